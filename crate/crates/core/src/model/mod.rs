//! Cubic Dirac nonlinearity `F(Phi) = lambda1 (Phi^* sigma3 Phi) sigma3 +
//! lambda2 |Phi|^2 I`, its exact pointwise flow and the conserved quantities.

mod catalog;

pub use catalog::InitialData;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Representation, SpinorField};

/// Which form of the equation is being stepped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `i d_t Phi = T Phi + eps^2 F(Phi) Phi`, run to `T / eps^2`.
    LongTime,
    /// `i d_s Phi = T Phi / eps^2 + F(Phi) Phi`, run to `T`.
    Oscillatory,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    epsilon: f64,
    lambda1: f64,
    lambda2: f64,
    regime: Regime,
}

impl ModelParams {
    /// `epsilon` must lie in `(0, 1]`; `0` is accepted in the long-time
    /// regime as the linear limit.
    pub fn new(epsilon: f64, lambda1: f64, lambda2: f64, regime: Regime) -> Result<Self> {
        let eps_ok = match regime {
            Regime::LongTime => (0.0..=1.0).contains(&epsilon),
            Regime::Oscillatory => epsilon > 0.0 && epsilon <= 1.0,
        };
        if !eps_ok {
            return Err(Error::InvalidParams(format!(
                "epsilon {epsilon} outside (0, 1] for the {regime:?} regime"
            )));
        }
        if !lambda1.is_finite() || !lambda2.is_finite() {
            return Err(Error::InvalidParams(format!(
                "lambda1 = {lambda1}, lambda2 = {lambda2} must be finite"
            )));
        }
        Ok(Self {
            epsilon,
            lambda1,
            lambda2,
            regime,
        })
    }

    /// Long-time regime with the default `lambda1 = 0`, `lambda2 = 1`.
    pub fn long_time(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0, 1.0, Regime::LongTime)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(epsilon, self.lambda1, self.lambda2, self.regime)
    }

    /// `G(Phi) = lambda1/2 (Phi^* sigma3 Phi)^2 + lambda2/2 |Phi|^4`.
    pub fn potential(&self, v: [Complex64; 2]) -> f64 {
        let (a, b) = (v[0].norm_sqr(), v[1].norm_sqr());
        let density = a + b;
        let chiral = a - b;
        0.5 * self.lambda1 * chiral * chiral + 0.5 * self.lambda2 * density * density
    }

    /// `(Lambda_+, Lambda_-) = lambda2 |Phi|^2 +- lambda1 Phi^* sigma3 Phi`.
    #[inline]
    pub fn phase_rates(&self, v: [Complex64; 2]) -> (f64, f64) {
        let (a, b) = (v[0].norm_sqr(), v[1].norm_sqr());
        let density = self.lambda2 * (a + b);
        let chiral = self.lambda1 * (a - b);
        (density + chiral, density - chiral)
    }
}

/// Nodewise diagonal of `F(Phi_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonlinearPhase {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

pub fn nonlinear_phase(field: &SpinorField, params: &ModelParams) -> NonlinearPhase {
    let physical = field.synthesize();
    let n = physical.grid().len();
    let (mut plus, mut minus) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for j in 0..n {
        let (p, m) = params.phase_rates(physical.value(j));
        plus.push(p);
        minus.push(m);
    }
    NonlinearPhase { plus, minus }
}

/// `phi_1 <- exp(-i s Lambda_+) phi_1`, `phi_2 <- exp(-i s Lambda_-) phi_2`
/// at every node, with `s = duration`. Exact for any `s` since both phase
/// rates depend only on `|phi_1|` and `|phi_2|`.
pub fn apply_nonlinear_flow(field: &mut SpinorField, duration: f64, params: &ModelParams) {
    if duration == 0.0 {
        return;
    }
    let repr = field.representation();
    field.synthesize_in_place();
    let [upper, lower] = field.components_mut();
    for (u, l) in upper.iter_mut().zip(lower.iter_mut()) {
        let (p, m) = params.phase_rates([*u, *l]);
        *u *= Complex64::from_polar(1.0, -duration * p);
        *l *= Complex64::from_polar(1.0, -duration * m);
    }
    if repr == Representation::Fourier {
        field.analyze_in_place();
    }
}

pub fn nonlinear_flow(field: &SpinorField, duration: f64, params: &ModelParams) -> SpinorField {
    let mut out = field.clone();
    apply_nonlinear_flow(&mut out, duration, params);
    out
}

/// `||Phi||^2` by the periodic rectangle rule.
pub fn mass(field: &SpinorField) -> f64 {
    field.quadrature_norm_sqr()
}

/// Discrete energy and its parts; `total = kinetic + mass_term + eps^2 nonlinear`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyReport {
    pub mass: f64,
    pub kinetic: f64,
    pub mass_term: f64,
    /// `h sum_j G(Phi_j)`, before the `eps^2` factor.
    pub nonlinear: f64,
    pub total: f64,
    /// Imaginary part of the kinetic sum, which vanishes for a valid field.
    pub imaginary_residue: f64,
    /// Set when the residue exceeds `1e-10` relative to the energy scale.
    pub residue_flagged: bool,
}

const ENERGY_RESIDUE_TOLERANCE: f64 = 1e-10;

/// `E_h = h sum_j [ -i Phi_j^* sigma . Phi'_j + Phi_j^* sigma3 Phi_j + eps^2 G(Phi_j) ]`
/// with spectral derivatives; 2D adds the `sigma2 d_y` term.
pub fn discrete_energy(field: &SpinorField, params: &ModelParams) -> EnergyReport {
    let u = field.synthesize();
    let grid = u.grid().clone();
    let w = grid.cell_volume();
    let derivatives: Vec<SpinorField> = (0..grid.dim())
        .map(|axis| u.spectral_derivative(axis).synthesize())
        .collect();

    let i = Complex64::new(0.0, 1.0);
    let mut kinetic = Complex64::default();
    let (mut mass_term, mut nonlinear, mut mass) = (0.0, 0.0, 0.0);
    for j in 0..grid.len() {
        let v = u.value(j);
        // -i v^* sigma1 dx v
        let dx = derivatives[0].value(j);
        kinetic += -i * (v[0].conj() * dx[1] + v[1].conj() * dx[0]);
        if let Some(dy) = derivatives.get(1) {
            // sigma2 dy v = (-i dy_2, i dy_1)
            let dy = dy.value(j);
            kinetic += -i * (v[0].conj() * (-i * dy[1]) + v[1].conj() * (i * dy[0]));
        }
        let (a, b) = (v[0].norm_sqr(), v[1].norm_sqr());
        mass += a + b;
        mass_term += a - b;
        nonlinear += params.potential(v);
    }
    let kinetic = kinetic * w;
    let (mass, mass_term, nonlinear) = (mass * w, mass_term * w, nonlinear * w);
    let eps2 = params.epsilon() * params.epsilon();
    let total = kinetic.re + mass_term + eps2 * nonlinear;
    let scale = kinetic.re.abs() + mass_term.abs() + eps2 * nonlinear.abs();
    EnergyReport {
        mass,
        kinetic: kinetic.re,
        mass_term,
        nonlinear,
        total,
        imaginary_residue: kinetic.im,
        residue_flagged: kinetic.im.abs() > ENERGY_RESIDUE_TOLERANCE * scale.max(f64::MIN_POSITIVE),
    }
}
