//! Fine-step, fine-grid Strang runs standing in for the exact solution.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::integrators::{Scheme, Stepper};
use crate::model::ModelParams;
use crate::spectral::{Grid, SpinorField};

use super::metrics::h1_error;

/// Reference time step in the long-time regime; the oscillatory regime uses
/// `REFERENCE_STEP * eps^2`.
pub const REFERENCE_STEP: f64 = 1e-4;

/// The reference step is at least this many times finer than every study step.
pub const MIN_REFERENCE_SUBSTEPS: u64 = 10;

/// Reference errors must sit this far below the errors they validate.
pub const REFERENCE_MARGIN: f64 = 100.0;

const MULTIPLE_TOLERANCE: f64 = 1e-9;

/// Largest step not above `base` that divides the smallest study step into an
/// even number (at least [`MIN_REFERENCE_SUBSTEPS`]) of substeps.
pub fn default_reference_step(study_steps: &[f64], base: f64) -> f64 {
    let smallest = study_steps.iter().copied().fold(f64::INFINITY, f64::min);
    let mut k = ((smallest / base) * (1.0 - MULTIPLE_TOLERANCE)).ceil() as u64;
    k = k.max(MIN_REFERENCE_SUBSTEPS);
    k += k % 2;
    smallest / k as f64
}

/// Number of reference steps in one study step.
pub fn step_ratio(study_step: f64, reference_step: f64) -> Result<u64> {
    let ratio = study_step / reference_step;
    let k = ratio.round();
    if k < 1.0 || (ratio - k).abs() > MULTIPLE_TOLERANCE * ratio.max(1.0) {
        return Err(Error::ReferenceStep {
            step: study_step,
            reference: reference_step,
        });
    }
    Ok(k as u64)
}

/// How the reference estimates its own error at each checkpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelfCheck {
    None,
    /// Companion run at twice the step; the Richardson estimate
    /// `|R(2 dt) - R(dt)|_H1 / 3` bounds the second-order step error.
    StepDoubling,
    /// Companion run on twice the modes per axis with the same step.
    GridDoubling,
}

#[derive(Clone, Debug)]
pub struct ReferenceSolution {
    grid: Grid,
    step: f64,
    checkpoints: BTreeMap<u64, SpinorField>,
    estimates: BTreeMap<u64, f64>,
}

impl ReferenceSolution {
    /// Strang run from `initial` recording the field at each index in
    /// `checkpoints` (counted in reference steps).
    pub fn compute(
        initial: &SpinorField,
        params: &ModelParams,
        step: f64,
        checkpoints: &BTreeSet<u64>,
        check: SelfCheck,
    ) -> Result<Self> {
        let grid = initial.grid().clone();
        let main = || record(initial, params, step, checkpoints, 1);
        let (fields, estimates) = match check {
            SelfCheck::None => (main()?, BTreeMap::new()),
            SelfCheck::StepDoubling => {
                let even: BTreeSet<u64> = checkpoints.iter().copied().filter(|n| n % 2 == 0).collect();
                let (fine, coarse) = rayon::join(main, || record(initial, params, 2.0 * step, &even, 2));
                let (fine, coarse) = (fine?, coarse?);
                let mut est = BTreeMap::new();
                for (n, c) in &coarse {
                    est.insert(*n, h1_error(c, &fine[n])?.h1 / 3.0);
                }
                (fine, est)
            }
            SelfCheck::GridDoubling => {
                let doubled = grid.with_shape(&grid.shape().iter().map(|m| 2 * m).collect::<Vec<_>>())?;
                let finer = initial_on(initial, &doubled)?;
                let (base, fine) = rayon::join(main, || record(&finer, params, step, checkpoints, 1));
                let (base, fine) = (base?, fine?);
                let mut est = BTreeMap::new();
                for (n, f) in &base {
                    est.insert(*n, h1_error(f, &fine[n])?.h1);
                }
                (base, est)
            }
        };
        Ok(Self {
            grid,
            step,
            checkpoints: fields,
            estimates,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Reference steps per study step; rejects steps that are not multiples.
    pub fn steps_per(&self, study_step: f64) -> Result<u64> {
        step_ratio(study_step, self.step)
    }

    pub fn check_grid(&self, study: &Grid) -> Result<()> {
        if study.divides(&self.grid) {
            Ok(())
        } else {
            Err(Error::ReferenceGrid {
                m: study.shape().to_vec(),
                m_ref: self.grid.shape().to_vec(),
            })
        }
    }

    pub fn field_at(&self, reference_steps: u64) -> Result<&SpinorField> {
        self.checkpoints
            .get(&reference_steps)
            .ok_or(Error::MissingCheckpoint(reference_steps))
    }

    /// Estimated H1 error of the reference at a checkpoint, if one was computed.
    pub fn error_estimate(&self, reference_steps: u64) -> Option<f64> {
        self.estimates.get(&reference_steps).copied()
    }

    pub fn max_error_estimate(&self) -> Option<f64> {
        self.estimates.values().copied().reduce(f64::max)
    }
}

/// Samples of `initial` on another grid, by trigonometric interpolation when
/// refining.
fn initial_on(initial: &SpinorField, grid: &Grid) -> Result<SpinorField> {
    let coeffs = initial.analyze();
    let source = initial.grid();
    let dim = grid.dim();
    let mut out = SpinorField::from_coefficients(grid, |mode| {
        source
            .slot_of(&mode[..dim])
            .map(|k| coeffs.value(k))
            .unwrap_or_default()
    });
    out.synthesize_in_place();
    Ok(out)
}

fn record(
    initial: &SpinorField,
    params: &ModelParams,
    step: f64,
    checkpoints: &BTreeSet<u64>,
    index_scale: u64,
) -> Result<BTreeMap<u64, SpinorField>> {
    let stepper = Stepper::new(initial.grid(), params, Scheme::Strang, step);
    let mut field = initial.synthesize();
    let mut out = BTreeMap::new();
    let mut at = 0u64;
    for &n in checkpoints {
        let target = n / index_scale;
        stepper.advance_n(&mut field, target - at);
        at = target;
        if !field.is_finite() {
            return Err(Error::NonFinite { step: at });
        }
        out.insert(n, field.clone());
    }
    Ok(out)
}
