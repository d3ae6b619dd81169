use crate::error::{Error, Result};
use crate::spectral::SpinorField;

/// Errors at or below this are treated as round-off; no order is extracted
/// from them.
pub const ROUNDOFF_FLOOR: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l2: f64,
    pub h1: f64,
}

/// Discrete L2 and H1 errors of `numeric` against `reference`.
///
/// Derivatives are taken spectrally on each field at its own resolution; the
/// reference and its derivatives are then restricted to the numeric grid by
/// Fourier truncation.
pub fn h1_error(numeric: &SpinorField, reference: &SpinorField) -> Result<ErrorNorms> {
    let grid = numeric.grid();
    if !grid.divides(reference.grid()) {
        return Err(Error::GridMismatch(format!(
            "numeric grid {grid} is not a restriction of reference grid {}",
            reference.grid()
        )));
    }
    let same = grid == reference.grid();
    let restrict = |f: &SpinorField| -> Result<SpinorField> {
        if same {
            Ok(f.synthesize())
        } else {
            Ok(f.project(grid)?.synthesize())
        }
    };

    let diff = numeric.synthesize().try_sub(&restrict(reference)?)?;
    let l2_sqr = diff.quadrature_norm_sqr();
    let mut h1_sqr = l2_sqr;
    for axis in 0..grid.dim() {
        let dn = numeric.spectral_derivative(axis).synthesize();
        let dr = restrict(&reference.spectral_derivative(axis))?;
        h1_sqr += dn.try_sub(&dr)?.quadrature_norm_sqr();
    }
    Ok(ErrorNorms {
        l2: l2_sqr.sqrt(),
        h1: h1_sqr.sqrt(),
    })
}

/// `log(e_coarse / e_fine) / log(ratio)`, or `None` when either error is at
/// the round-off floor.
pub fn observed_order(coarse: f64, fine: f64, ratio: f64) -> Option<f64> {
    let above = |e: f64| e > ROUNDOFF_FLOOR;
    if !above(coarse) || !above(fine) || ratio.is_nan() || ratio <= 1.0 {
        return None;
    }
    Some((coarse / fine).ln() / ratio.ln())
}
