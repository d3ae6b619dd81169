//! Periodic grids, discrete Fourier analysis and the free Dirac flow.

mod fft;
mod field;
mod grid;
mod symbol;

pub use field::{FreeFlow, Representation, SpinorField};
pub use grid::{Axis, Grid};
pub use symbol::{mode_symbol, sigma1, sigma2, sigma3, Mat2, ModeSymbol, Spinor};

use crate::error::Result;

pub fn analyze(field: &SpinorField) -> SpinorField {
    field.analyze()
}

pub fn synthesize(coeffs: &SpinorField) -> SpinorField {
    coeffs.synthesize()
}

pub fn project(field: &SpinorField, target: &Grid) -> Result<SpinorField> {
    field.project(target)
}

pub fn sobolev_norm(field: &SpinorField, m: u32) -> f64 {
    field.sobolev_norm(m)
}

pub fn free_flow(field: &SpinorField, t: f64) -> SpinorField {
    field.free_flow(t)
}

pub fn spectral_derivative(field: &SpinorField, axis: usize) -> SpinorField {
    field.spectral_derivative(axis)
}
