//! Lie and Strang splitting of the free and nonlinear flows, and the time loop.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{apply_nonlinear_flow, discrete_energy, mass, ModelParams, Regime};
use crate::spectral::{FreeFlow, Grid, Representation, SpinorField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// free(step) then nonlinear(step); first order.
    Lie,
    /// free(step/2), nonlinear(step), free(step/2); second order.
    Strang,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Lie => "lie",
            Scheme::Strang => "strang",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lie" => Ok(Scheme::Lie),
            "strang" => Ok(Scheme::Strang),
            other => Err(Error::InvalidParams(format!("unknown scheme `{other}`"))),
        }
    }
}

/// A scheme with a fixed step and step count. The step is `tau` in the
/// long-time regime and `kappa` in the oscillatory one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchemeSpec {
    pub scheme: Scheme,
    pub step: f64,
    pub step_count: u64,
}

impl SchemeSpec {
    /// Rounds `horizon / step` to the nearest step count.
    pub fn new(scheme: Scheme, step: f64, horizon: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidStep(format!("step {step} must be positive")));
        }
        if !(horizon.is_finite() && horizon >= 0.0) {
            return Err(Error::InvalidStep(format!(
                "horizon {horizon} must be finite and nonnegative"
            )));
        }
        Ok(Self {
            scheme,
            step,
            step_count: (horizon / step).round() as u64,
        })
    }

    pub fn with_steps(scheme: Scheme, step: f64, step_count: u64) -> Result<Self> {
        if !step.is_finite() {
            return Err(Error::InvalidStep(format!("step {step} must be finite")));
        }
        Ok(Self {
            scheme,
            step,
            step_count,
        })
    }

    pub fn realized_final_time(&self) -> f64 {
        self.step_count as f64 * self.step
    }
}

/// One step of a splitting scheme with its sub-flows precomputed.
#[derive(Clone, Debug)]
pub struct Stepper {
    scheme: Scheme,
    params: ModelParams,
    free: FreeFlow,
    nonlinear_duration: f64,
}

impl Stepper {
    pub fn new(grid: &Grid, params: &ModelParams, scheme: Scheme, step: f64) -> Self {
        let eps2 = params.epsilon() * params.epsilon();
        // the oscillatory form carries 1/eps^2 on the free operator
        let (free_time, nonlinear_duration) = match params.regime() {
            Regime::LongTime => (step, eps2 * step),
            Regime::Oscillatory => (step / eps2, step),
        };
        let free_part = match scheme {
            Scheme::Lie => free_time,
            Scheme::Strang => 0.5 * free_time,
        };
        Self {
            scheme,
            params: *params,
            free: FreeFlow::new(grid, free_part),
            nonlinear_duration,
        }
    }

    pub fn advance(&self, field: &mut SpinorField) {
        match self.scheme {
            Scheme::Lie => {
                self.free.apply(field);
                apply_nonlinear_flow(field, self.nonlinear_duration, &self.params);
            }
            Scheme::Strang => {
                self.free.apply(field);
                apply_nonlinear_flow(field, self.nonlinear_duration, &self.params);
                self.free.apply(field);
            }
        }
    }

    pub fn advance_n(&self, field: &mut SpinorField, n: u64) {
        for _ in 0..n {
            self.advance(field);
        }
    }
}

pub fn strang_step(field: &SpinorField, step: f64, params: &ModelParams) -> SpinorField {
    let mut out = field.synthesize();
    Stepper::new(field.grid(), params, Scheme::Strang, step).advance(&mut out);
    out
}

pub fn lie_step(field: &SpinorField, step: f64, params: &ModelParams) -> SpinorField {
    let mut out = field.synthesize();
    Stepper::new(field.grid(), params, Scheme::Lie, step).advance(&mut out);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub step: u64,
    pub time: f64,
    pub mass: f64,
    pub energy: f64,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub stride: u64,
    pub checkpoints: Vec<Checkpoint>,
    pub final_field: SpinorField,
}

/// Runs `spec.step_count` steps from `initial`, calling `observe` at step 0,
/// every `stride` steps and at the final step.
pub fn evolve_with(
    initial: &SpinorField,
    spec: &SchemeSpec,
    params: &ModelParams,
    stride: u64,
    mut observe: impl FnMut(u64, &SpinorField) -> Result<()>,
) -> Result<SpinorField> {
    let stride = stride.max(1);
    let stepper = Stepper::new(initial.grid(), params, spec.scheme, spec.step);
    let mut field = initial.synthesize();
    observe(0, &field)?;
    for n in 1..=spec.step_count {
        stepper.advance(&mut field);
        if !field.is_finite() {
            return Err(Error::NonFinite { step: n });
        }
        if n % stride == 0 || n == spec.step_count {
            observe(n, &field)?;
        }
    }
    Ok(field)
}

/// Evolves and records mass and discrete energy at each checkpoint.
pub fn evolve(
    initial: &SpinorField,
    spec: &SchemeSpec,
    params: &ModelParams,
    stride: u64,
) -> Result<Trajectory> {
    let mut checkpoints = Vec::new();
    let final_field = evolve_with(initial, spec, params, stride, |n, field| {
        checkpoints.push(Checkpoint {
            step: n,
            time: n as f64 * spec.step,
            mass: mass(field),
            energy: discrete_energy(field, params).total,
        });
        Ok(())
    })?;
    Ok(Trajectory {
        stride: stride.max(1),
        checkpoints,
        final_field,
    })
}

/// Runs `n` Strang steps forward and `n` back with the negated step, and
/// returns the discrete H1 distance to `initial`.
pub fn reverse_check(initial: &SpinorField, step: f64, params: &ModelParams, n: u64) -> f64 {
    let grid = initial.grid();
    let forward = Stepper::new(grid, params, Scheme::Strang, step);
    let backward = Stepper::new(grid, params, Scheme::Strang, -step);
    let mut field = initial.synthesize();
    forward.advance_n(&mut field, n);
    backward.advance_n(&mut field, n);
    let start = initial.synthesize();
    debug_assert_eq!(field.representation(), Representation::Physical);
    (&field - &start).discrete_h1_norm()
}
