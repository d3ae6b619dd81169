//! Per-mode symbol of the free Dirac operator and its exact eigendecomposition.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

pub type Spinor = [Complex64; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense complex 2x2 matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Mat2([[a, ZERO], [ZERO, b]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    #[inline]
    pub fn apply(&self, v: Spinor) -> Spinor {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let d = *self - *other;
        d.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(-ONE)
    }
}

pub fn sigma1() -> Mat2 {
    Mat2([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma2() -> Mat2 {
    Mat2([[ZERO, -I], [I, ZERO]])
}

pub fn sigma3() -> Mat2 {
    Mat2([[ONE, ZERO], [ZERO, -ONE]])
}

/// Free Dirac data of one Fourier mode: `Gamma = mu_1 sigma_1 + mu_2 sigma_2 +
/// sigma_3 = Q diag(delta, -delta) Q^*` with `delta = sqrt(1 + |mu|^2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSymbol {
    pub mode: Vec<i64>,
    pub wavevector: Vec<f64>,
    pub delta: f64,
    pub gamma: Mat2,
    pub eigenvectors: Mat2,
    pub eigenvalues: [f64; 2],
    pub proj_plus: Mat2,
    pub proj_minus: Mat2,
}

impl ModeSymbol {
    /// Builds the symbol from a wave vector of length 1 or 2.
    ///
    /// The eigenvector matrix is the closed form
    /// `[[1 + delta, -conj(z)], [z, 1 + delta]] / sqrt(2 delta (1 + delta))`
    /// with `z = mu_1 + i mu_2`, which is the identity at `mu = 0`.
    pub fn from_wavevector(mode: Vec<i64>, wavevector: Vec<f64>) -> Self {
        let mu1 = wavevector.first().copied().unwrap_or(0.0);
        let mu2 = wavevector.get(1).copied().unwrap_or(0.0);
        let delta = (1.0 + mu1 * mu1 + mu2 * mu2).sqrt();
        let norm = (2.0 * delta * (1.0 + delta)).sqrt();
        let z = Complex64::new(mu1, mu2) / norm;
        let c = Complex64::from((1.0 + delta) / norm);
        let q = Mat2([[c, -z.conj()], [z, c]]);

        let mut gamma = sigma1().scale(mu1.into()) + sigma3();
        if wavevector.len() > 1 {
            gamma = gamma + sigma2().scale(mu2.into());
        }

        let plus = Mat2([[c * c, c * z.conj()], [z * c, z * z.conj()]]);
        let minus = Mat2([[z * z.conj(), -z.conj() * c], [-c * z, c * c]]);

        Self {
            mode,
            wavevector,
            delta,
            gamma,
            eigenvectors: q,
            eigenvalues: [delta, -delta],
            proj_plus: plus,
            proj_minus: minus,
        }
    }

    /// `exp(-i t Gamma) = Q exp(-i t D) Q^*`, evaluated as
    /// `cos(t delta) I - i sin(t delta) Gamma / delta`.
    pub fn propagator(&self, t: f64) -> Mat2 {
        let (sin, cos) = (t * self.delta).sin_cos();
        let s = Complex64::new(0.0, -sin / self.delta);
        Mat2::IDENTITY.scale(cos.into()) + self.gamma.scale(s)
    }

    pub fn diagonal(&self) -> Mat2 {
        Mat2::diag(self.eigenvalues[0].into(), self.eigenvalues[1].into())
    }
}

/// Symbol of mode `mode` (one index per axis) on `grid`.
pub fn mode_symbol(grid: &Grid, mode: &[i64]) -> Result<ModeSymbol> {
    let slot = grid.slot_of(mode).ok_or_else(|| Error::ModeOutOfRange {
        mode: mode.to_vec(),
        modes: grid.shape().to_vec(),
    })?;
    let mu = grid.wavevector_at(slot);
    Ok(ModeSymbol::from_wavevector(
        mode.to_vec(),
        mu[..grid.dim()].to_vec(),
    ))
}
