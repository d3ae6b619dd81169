//! Study configuration, orchestration and result files.

mod config;
mod emit;
mod run;

pub use config::{parse_config, ConfigError, StudyConfig, StudyKind, DEFAULT_SPATIAL_MODES, DEFAULT_STRIDE};
pub use emit::{emit_table, sci, write_series, write_table, write_trajectory, ARTIFACT_VERSION, SERIES_COLUMNS};
pub use run::{run_study, RunError, RunReport};
