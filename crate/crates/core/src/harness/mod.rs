//! Reference solutions, error metrics and the convergence studies.

mod metrics;
mod reference;
mod studies;
mod table;

pub use metrics::{h1_error, observed_order, ErrorNorms, ROUNDOFF_FLOOR};
pub use reference::{
    default_reference_step, step_ratio, ReferenceSolution, SelfCheck, MIN_REFERENCE_SUBSTEPS,
    REFERENCE_MARGIN, REFERENCE_STEP,
};
pub use studies::{
    energy_drift_study, long_time_study, long_time_table, oscillatory_table, spatial_convergence,
    temporal_convergence, ErrorRecord, LongTimeSeries, StudySetup, TABLE_ONE_EPSILONS,
    TABLE_ONE_KAPPAS,
};
pub use table::{ColumnAxis, ConvergenceTable, TableRow};
