//! Convergence, long-time and energy studies built on the reference solver.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrators::{evolve_with, Scheme, SchemeSpec};
use crate::model::{discrete_energy, mass, InitialData, ModelParams, Regime};
use crate::spectral::{Grid, SpinorField};

use super::metrics::h1_error;
use super::reference::{
    default_reference_step, ReferenceSolution, SelfCheck, REFERENCE_MARGIN, REFERENCE_STEP,
};
use super::table::{ColumnAxis, ConvergenceTable, TableRow};

/// Epsilon rows of the oscillatory error table, `1 / 2^i`.
pub const TABLE_ONE_EPSILONS: [f64; 5] = [1.0, 0.5, 0.25, 0.125, 0.0625];
/// Kappa columns of the oscillatory error table, `0.05 / 4^j`.
pub const TABLE_ONE_KAPPAS: [f64; 5] = [
    0.05,
    0.05 / 4.0,
    0.05 / 16.0,
    0.05 / 64.0,
    0.05 / 256.0,
];

/// Everything a study needs besides its sweep axes.
#[derive(Clone, Debug, PartialEq)]
pub struct StudySetup {
    pub data: InitialData,
    /// Study grid modes per axis.
    pub modes: usize,
    /// Reference grid modes per axis; must be a multiple of every study grid.
    pub reference_modes: usize,
    pub lambda1: f64,
    pub lambda2: f64,
    pub regime: Regime,
    pub scheme: Scheme,
    /// `T`: the run ends at `T / eps^2` (long-time) or `T` (oscillatory).
    pub horizon: f64,
    /// Reference step override in unscaled time; multiplied by `eps^2` in
    /// the oscillatory regime.
    pub reference_step: Option<f64>,
    /// Estimate the reference error and flag cells it could pollute.
    pub validate_reference: bool,
}

impl StudySetup {
    pub fn new(data: InitialData) -> Self {
        Self {
            data,
            modes: 128,
            reference_modes: 128,
            lambda1: 0.0,
            lambda2: 1.0,
            regime: Regime::LongTime,
            scheme: Scheme::Strang,
            horizon: 1.0,
            reference_step: None,
            validate_reference: true,
        }
    }

    /// Setup reproducing the oscillatory error table: `(0, 1)`, `M = 64`,
    /// `lambda1 = -1`, `lambda2 = 0`, run to `s = 1`.
    pub fn table_one() -> Self {
        Self {
            lambda1: -1.0,
            lambda2: 0.0,
            regime: Regime::Oscillatory,
            modes: 64,
            reference_modes: 64,
            ..Self::new(InitialData::Oscillatory1d)
        }
    }

    pub fn params(&self, epsilon: f64) -> Result<ModelParams> {
        ModelParams::new(epsilon, self.lambda1, self.lambda2, self.regime)
    }

    /// `T / eps^2` in the long-time regime (`T` in the linear limit), `T` in
    /// the oscillatory one.
    pub fn final_time(&self, epsilon: f64) -> f64 {
        match self.regime {
            Regime::LongTime if epsilon > 0.0 => self.horizon / (epsilon * epsilon),
            _ => self.horizon,
        }
    }

    fn time_scale(&self, epsilon: f64) -> f64 {
        match self.regime {
            Regime::LongTime => 1.0,
            Regime::Oscillatory => epsilon * epsilon,
        }
    }

    /// Reference step for a row sweeping `steps` at `epsilon`.
    pub fn reference_step_for(&self, epsilon: f64, steps: &[f64]) -> f64 {
        let scale = self.time_scale(epsilon);
        match self.reference_step {
            Some(step) => step * scale,
            None => default_reference_step(steps, REFERENCE_STEP * scale),
        }
    }

    pub fn grid(&self, modes: usize) -> Result<Grid> {
        self.data.grid(modes)
    }

    pub fn initial(&self, modes: usize) -> Result<SpinorField> {
        self.data.sample(&self.grid(modes)?)
    }

    fn describe(&self, table: &mut ConvergenceTable) {
        table.push_meta("data", self.data.key());
        table.push_meta("domain", format!("{:?}", self.data.domain()));
        table.push_meta("regime", format!("{:?}", self.regime));
        table.push_meta("scheme", self.scheme);
        table.push_meta("lambda1", self.lambda1);
        table.push_meta("lambda2", self.lambda2);
        table.push_meta("T", self.horizon);
        table.push_meta("M_ref", self.reference_modes);
        table.push_meta(
            "tau_ref",
            self.reference_step
                .map(|s| format!("{s:e}"))
                .unwrap_or_else(|| "auto".to_string()),
        );
    }
}

fn cell_error(epsilon: f64, column: String) -> impl FnOnce(Error) -> Error {
    move |source| Error::Cell {
        epsilon,
        column,
        source: Box::new(source),
    }
}

fn check_reference_grid(study: usize, reference: usize) -> Result<()> {
    if !reference.is_multiple_of(study) {
        return Err(Error::ReferenceGrid {
            m: vec![study],
            m_ref: vec![reference],
        });
    }
    Ok(())
}

fn sorted_descending(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v.dedup();
    v
}

/// One row of a time-step sweep: errors at the final time of every column.
fn temporal_row(setup: &StudySetup, epsilon: f64, steps: &[f64]) -> Result<TableRow> {
    let params = setup.params(epsilon)?;
    let study_grid = setup.grid(setup.modes)?;
    check_reference_grid(setup.modes, setup.reference_modes)?;
    let ref_initial = setup.initial(setup.reference_modes)?;
    let ref_step = setup.reference_step_for(epsilon, steps);
    let horizon = setup.final_time(epsilon);

    let specs = steps
        .iter()
        .map(|&s| SchemeSpec::new(setup.scheme, s, horizon))
        .collect::<Result<Vec<_>>>()?;
    let mut targets = BTreeSet::new();
    let mut ratios = Vec::new();
    for spec in &specs {
        let k = super::reference::step_ratio(spec.step, ref_step)?;
        ratios.push(k);
        targets.insert(spec.step_count * k);
    }
    let check = if setup.validate_reference {
        SelfCheck::StepDoubling
    } else {
        SelfCheck::None
    };
    let initial = setup.initial(setup.modes)?;
    let (reference, cells) = rayon::join(
        || ReferenceSolution::compute(&ref_initial, &params, ref_step, &targets, check),
        || {
            specs
                .par_iter()
                .map(|spec| {
                    evolve_with(&initial, spec, &params, u64::MAX, |_, _| Ok(()))
                        .map_err(cell_error(epsilon, format!("step {:e}", spec.step)))
                })
                .collect::<Result<Vec<_>>>()
        },
    );
    let (reference, cells) = (reference?, cells?);
    reference.check_grid(&study_grid)?;

    let mut errors = Vec::with_capacity(specs.len());
    let mut limited = Vec::with_capacity(specs.len());
    for ((spec, field), k) in specs.iter().zip(&cells).zip(&ratios) {
        let at = spec.step_count * k;
        let e = h1_error(field, reference.field_at(at)?)?.h1;
        limited.push(
            reference
                .error_estimate(at)
                .is_some_and(|r| e < REFERENCE_MARGIN * r),
        );
        errors.push(e);
    }
    let times = specs.iter().map(SchemeSpec::realized_final_time).collect();
    let mut row = TableRow::new(epsilon, errors, times);
    row.reference_step = Some(ref_step);
    row.reference_error = reference.max_error_estimate();
    row.reference_limited = limited;
    Ok(row)
}

/// Errors at `t = T / eps^2` (long-time) or `s = T` (oscillatory) for every
/// step in `steps` and every epsilon, with observed orders along each row.
pub fn temporal_convergence(
    setup: &StudySetup,
    epsilons: &[f64],
    steps: &[f64],
) -> Result<ConvergenceTable> {
    let columns = sorted_descending(steps);
    let rows = epsilons
        .par_iter()
        .map(|&eps| temporal_row(setup, eps, &columns))
        .collect::<Result<Vec<_>>>()?;
    let axis = match setup.regime {
        Regime::LongTime => ColumnAxis::Tau,
        Regime::Oscillatory => ColumnAxis::Kappa,
    };
    let name = match setup.regime {
        Regime::LongTime => "temporal",
        Regime::Oscillatory => "oscillatory-table",
    };
    let mut table = ConvergenceTable::new(name, axis, columns, rows);
    setup.describe(&mut table);
    table.push_meta("M", setup.modes);
    Ok(table)
}

/// The oscillatory-regime temporal table; `setup.regime` must be oscillatory.
pub fn oscillatory_table(
    setup: &StudySetup,
    epsilons: &[f64],
    kappas: &[f64],
) -> Result<ConvergenceTable> {
    if setup.regime != Regime::Oscillatory {
        return Err(Error::InvalidParams(
            "oscillatory table requires the oscillatory regime".into(),
        ));
    }
    temporal_convergence(setup, epsilons, kappas)
}

/// Errors at the final time for every grid in `modes`, all stepped with the
/// same `step` as the reference so only the spatial error remains.
pub fn spatial_convergence(
    setup: &StudySetup,
    epsilons: &[f64],
    modes: &[usize],
    step: f64,
) -> Result<ConvergenceTable> {
    let mut modes = modes.to_vec();
    modes.sort_unstable();
    modes.dedup();
    for &m in &modes {
        check_reference_grid(m, setup.reference_modes)?;
    }
    let rows = epsilons
        .par_iter()
        .map(|&eps| spatial_row(setup, eps, &modes, step))
        .collect::<Result<Vec<_>>>()?;
    let columns = modes.iter().map(|&m| m as f64).collect();
    let mut table = ConvergenceTable::new("spatial", ColumnAxis::Modes, columns, rows);
    setup.describe(&mut table);
    table.push_meta("tau", format!("{step:e}"));
    Ok(table)
}

fn spatial_row(setup: &StudySetup, epsilon: f64, modes: &[usize], step: f64) -> Result<TableRow> {
    let params = setup.params(epsilon)?;
    let spec = SchemeSpec::new(setup.scheme, step, setup.final_time(epsilon))?;
    let ref_initial = setup.initial(setup.reference_modes)?;
    let check = if setup.validate_reference {
        SelfCheck::GridDoubling
    } else {
        SelfCheck::None
    };
    let targets = BTreeSet::from([spec.step_count]);
    let (reference, cells) = rayon::join(
        || ReferenceSolution::compute(&ref_initial, &params, step, &targets, check),
        || {
            modes
                .par_iter()
                .map(|&m| {
                    let initial = setup.initial(m)?;
                    evolve_with(&initial, &spec, &params, u64::MAX, |_, _| Ok(()))
                        .map_err(cell_error(epsilon, format!("M {m}")))
                })
                .collect::<Result<Vec<_>>>()
        },
    );
    let (reference, cells) = (reference?, cells?);
    let exact = reference.field_at(spec.step_count)?;
    let estimate = reference.error_estimate(spec.step_count);
    let mut errors = Vec::new();
    let mut limited = Vec::new();
    for field in &cells {
        let e = h1_error(field, exact)?.h1;
        limited.push(estimate.is_some_and(|r| e < REFERENCE_MARGIN * r));
        errors.push(e);
    }
    let mut row = TableRow::new(epsilon, errors, vec![spec.realized_final_time(); modes.len()]);
    row.reference_step = Some(step);
    row.reference_error = estimate;
    row.reference_limited = limited;
    Ok(row)
}

/// Per-checkpoint errors and drifts of one long-time run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorRecord {
    pub step: u64,
    pub time: f64,
    pub l2_error: f64,
    pub h1_error: f64,
    /// Running maximum of `h1_error` over all checkpoints so far.
    pub e_max: f64,
    /// `|mass - mass_0| / mass_0`.
    pub mass_drift: f64,
    /// `|E_h - E_h^0|`.
    pub energy_drift: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LongTimeSeries {
    pub epsilon: f64,
    pub step: f64,
    pub stride: u64,
    pub final_time: f64,
    pub reference_step: f64,
    pub reference_error: Option<f64>,
    pub records: Vec<ErrorRecord>,
}

impl LongTimeSeries {
    pub fn e_max(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.e_max)
    }

    /// Whether the reference error estimate sits `REFERENCE_MARGIN` below `e_max`.
    pub fn reference_valid(&self) -> bool {
        self.reference_error
            .is_none_or(|r| self.e_max() >= REFERENCE_MARGIN * r)
    }
}

/// Runs each epsilon to its final time with step `step`, comparing against
/// the reference every `stride` steps.
pub fn long_time_study(
    setup: &StudySetup,
    epsilons: &[f64],
    step: f64,
    stride: u64,
) -> Result<Vec<LongTimeSeries>> {
    let mut series = epsilons
        .par_iter()
        .map(|&eps| long_time_run(setup, eps, step, stride.max(1)))
        .collect::<Result<Vec<_>>>()?;
    series.sort_by(|a, b| b.epsilon.total_cmp(&a.epsilon));
    Ok(series)
}

fn long_time_run(setup: &StudySetup, epsilon: f64, step: f64, stride: u64) -> Result<LongTimeSeries> {
    let params = setup.params(epsilon)?;
    check_reference_grid(setup.modes, setup.reference_modes)?;
    let spec = SchemeSpec::new(setup.scheme, step, setup.final_time(epsilon))?;
    let ref_step = setup.reference_step_for(epsilon, &[step]);
    let k = super::reference::step_ratio(step, ref_step)?;
    let mut targets: BTreeSet<u64> = (0..=spec.step_count).step_by(stride as usize).map(|n| n * k).collect();
    targets.insert(spec.step_count * k);
    let check = if setup.validate_reference {
        SelfCheck::StepDoubling
    } else {
        SelfCheck::None
    };
    let ref_initial = setup.initial(setup.reference_modes)?;
    let reference = ReferenceSolution::compute(&ref_initial, &params, ref_step, &targets, check)?;

    let initial = setup.initial(setup.modes)?;
    let mass0 = mass(&initial);
    let energy0 = discrete_energy(&initial, &params).total;
    let mut records = Vec::new();
    let mut running = 0.0f64;
    evolve_with(&initial, &spec, &params, stride, |n, field| {
        let e = h1_error(field, reference.field_at(n * k)?)?;
        running = running.max(e.h1);
        records.push(ErrorRecord {
            step: n,
            time: n as f64 * step,
            l2_error: e.l2,
            h1_error: e.h1,
            e_max: running,
            mass_drift: (mass(field) - mass0).abs() / mass0,
            energy_drift: (discrete_energy(field, &params).total - energy0).abs(),
        });
        Ok(())
    })
    .map_err(cell_error(epsilon, format!("step {step:e}")))?;

    Ok(LongTimeSeries {
        epsilon,
        step,
        stride,
        final_time: spec.realized_final_time(),
        reference_step: ref_step,
        reference_error: reference.max_error_estimate(),
        records,
    })
}

/// Summary table of `e_max` at the final time, one row per epsilon.
pub fn long_time_table(setup: &StudySetup, series: &[LongTimeSeries]) -> ConvergenceTable {
    let step = series.first().map_or(0.0, |s| s.step);
    let rows = series
        .iter()
        .map(|s| {
            let mut row = TableRow::new(s.epsilon, vec![s.e_max()], vec![s.final_time]);
            row.reference_step = Some(s.reference_step);
            row.reference_error = s.reference_error;
            row.reference_limited = vec![!s.reference_valid()];
            row
        })
        .collect();
    let mut table = ConvergenceTable::new("long-time", ColumnAxis::Tau, vec![step], rows);
    setup.describe(&mut table);
    table.push_meta("M", setup.modes);
    if let Some(s) = series.first() {
        table.push_meta("stride", s.stride);
    }
    table
}

/// Largest `|E_h^n - E_h^0|` over checkpoints every `stride` steps up to
/// the final time, for each (epsilon, step) cell.
pub fn energy_drift_study(
    setup: &StudySetup,
    epsilons: &[f64],
    steps: &[f64],
    stride: u64,
) -> Result<ConvergenceTable> {
    let columns = sorted_descending(steps);
    let cells: Vec<(f64, f64)> = epsilons
        .iter()
        .flat_map(|&e| columns.iter().map(move |&s| (e, s)))
        .collect();
    let initial = setup.initial(setup.modes)?;
    let drifts = cells
        .par_iter()
        .map(|&(eps, step)| {
            let params = setup.params(eps)?;
            let spec = SchemeSpec::new(setup.scheme, step, setup.final_time(eps))?;
            let energy0 = discrete_energy(&initial, &params).total;
            let mut worst = 0.0f64;
            evolve_with(&initial, &spec, &params, stride.max(1), |_, field| {
                worst = worst.max((discrete_energy(field, &params).total - energy0).abs());
                Ok(())
            })
            .map_err(cell_error(eps, format!("step {step:e}")))?;
            Ok((worst, spec.realized_final_time()))
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = epsilons
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let chunk = &drifts[i * columns.len()..(i + 1) * columns.len()];
            TableRow::new(
                eps,
                chunk.iter().map(|c| c.0).collect(),
                chunk.iter().map(|c| c.1).collect(),
            )
        })
        .collect();
    let axis = match setup.regime {
        Regime::LongTime => ColumnAxis::Tau,
        Regime::Oscillatory => ColumnAxis::Kappa,
    };
    let mut table = ConvergenceTable::new("energy-drift", axis, columns, rows);
    setup.describe(&mut table);
    table.push_meta("M", setup.modes);
    table.push_meta("stride", stride.max(1));
    Ok(table)
}
