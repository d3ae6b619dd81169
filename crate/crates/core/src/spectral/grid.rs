use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// One periodic direction `(lower, upper)` sampled at `modes` uniform nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    lower: f64,
    upper: f64,
    modes: usize,
}

impl Axis {
    pub fn new(lower: f64, upper: f64, modes: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || upper <= lower {
            return Err(Error::InvalidGrid(format!(
                "interval ({lower}, {upper}) must be finite and nonempty"
            )));
        }
        if modes < 4 || !modes.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "mode count {modes} must be even and at least 4"
            )));
        }
        Ok(Self {
            lower,
            upper,
            modes,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn spacing(&self) -> f64 {
        self.length() / self.modes as f64
    }

    /// `x_j = a + j h`; `j = M` is the periodic image of `j = 0`.
    pub fn node(&self, j: usize) -> f64 {
        self.lower + j as f64 * self.spacing()
    }

    /// Wave number `mu_l = 2 pi l / (b - a)`.
    pub fn wavenumber(&self, l: i64) -> f64 {
        2.0 * PI * l as f64 / self.length()
    }

    /// Mode index in `T_M = {-M/2, ..., M/2 - 1}` stored at FFT slot `k`.
    pub fn mode_of_slot(&self, k: usize) -> i64 {
        let half = self.modes / 2;
        if k < half {
            k as i64
        } else {
            k as i64 - self.modes as i64
        }
    }

    /// FFT slot holding mode `l`, if `l` lies in `T_M`.
    pub fn slot_of_mode(&self, l: i64) -> Option<usize> {
        let half = (self.modes / 2) as i64;
        if l < -half || l >= half {
            None
        } else if l >= 0 {
            Some(l as usize)
        } else {
            Some((l + self.modes as i64) as usize)
        }
    }

    fn same_interval(&self, other: &Axis) -> bool {
        let tol = 1e-12 * self.length().abs().max(1.0);
        (self.lower - other.lower).abs() <= tol && (self.upper - other.upper).abs() <= tol
    }
}

/// Periodic tensor grid in one or two dimensions. Values are stored
/// row-major with axis 0 varying slowest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
    shape: Vec<usize>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidGrid(format!(
                "dimension {} not supported (1 or 2)",
                axes.len()
            )));
        }
        let shape = axes.iter().map(Axis::modes).collect();
        Ok(Self { axes, shape })
    }

    pub fn line(lower: f64, upper: f64, modes: usize) -> Result<Self> {
        Self::new(vec![Axis::new(lower, upper, modes)?])
    }

    pub fn rectangle(x: (f64, f64, usize), y: (f64, f64, usize)) -> Result<Self> {
        Self::new(vec![Axis::new(x.0, x.1, x.2)?, Axis::new(y.0, y.1, y.2)?])
    }

    /// Grid over `bounds` with `modes` nodes along every axis.
    pub fn uniform(bounds: &[(f64, f64)], modes: usize) -> Result<Self> {
        let axes = bounds
            .iter()
            .map(|&(a, b)| Axis::new(a, b, modes))
            .collect::<Result<Vec<_>>>()?;
        Self::new(axes)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Axis {
        &self.axes[i]
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.axes.iter().map(|a| (a.lower, a.upper)).collect()
    }

    /// Number of stored nodes, `prod M_j`.
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight `prod h_j` of the rectangle rule.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(Axis::spacing).product()
    }

    pub fn volume(&self) -> f64 {
        self.axes.iter().map(Axis::length).product()
    }

    /// Per-axis indices of flat position `flat`.
    pub fn unflatten(&self, flat: usize) -> [usize; 2] {
        match *self.shape {
            [_] => [flat, 0],
            [_, ny] => [flat / ny, flat % ny],
            _ => unreachable!(),
        }
    }

    pub fn flatten(&self, idx: [usize; 2]) -> usize {
        match *self.shape {
            [_] => idx[0],
            [_, ny] => idx[0] * ny + idx[1],
            _ => unreachable!(),
        }
    }

    /// Physical coordinates of the node at `flat`.
    pub fn coordinates(&self, flat: usize) -> [f64; 2] {
        let idx = self.unflatten(flat);
        let mut x = [0.0; 2];
        for (d, axis) in self.axes.iter().enumerate() {
            x[d] = axis.node(idx[d]);
        }
        x
    }

    /// Mode multi-index stored at FFT slot `flat` (unused axes are 0).
    pub fn mode_at(&self, flat: usize) -> [i64; 2] {
        let idx = self.unflatten(flat);
        let mut l = [0i64; 2];
        for (d, axis) in self.axes.iter().enumerate() {
            l[d] = axis.mode_of_slot(idx[d]);
        }
        l
    }

    /// Wave vector `mu_l` stored at FFT slot `flat` (unused axes are 0).
    pub fn wavevector_at(&self, flat: usize) -> [f64; 2] {
        let l = self.mode_at(flat);
        let mut mu = [0.0; 2];
        for (d, axis) in self.axes.iter().enumerate() {
            mu[d] = axis.wavenumber(l[d]);
        }
        mu
    }

    /// Flat FFT slot of mode multi-index `mode`, if it lies in `T_M`.
    pub fn slot_of(&self, mode: &[i64]) -> Option<usize> {
        if mode.len() != self.dim() {
            return None;
        }
        let mut idx = [0usize; 2];
        for (d, axis) in self.axes.iter().enumerate() {
            idx[d] = axis.slot_of_mode(mode[d])?;
        }
        Some(self.flatten(idx))
    }

    /// Same domain, `modes` nodes per axis.
    pub fn with_modes(&self, modes: usize) -> Result<Self> {
        Self::uniform(&self.bounds(), modes)
    }

    pub fn with_shape(&self, shape: &[usize]) -> Result<Self> {
        if shape.len() != self.dim() {
            return Err(Error::InvalidGrid(format!(
                "shape {shape:?} does not match dimension {}",
                self.dim()
            )));
        }
        let axes = self
            .axes
            .iter()
            .zip(shape)
            .map(|(a, &m)| Axis::new(a.lower, a.upper, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(axes)
    }

    pub fn same_domain(&self, other: &Grid) -> bool {
        self.dim() == other.dim()
            && self
                .axes
                .iter()
                .zip(&other.axes)
                .all(|(a, b)| a.same_interval(b))
    }

    /// True when `self` covers the same domain as `fine` and every mode count
    /// divides the corresponding one of `fine`.
    pub fn divides(&self, fine: &Grid) -> bool {
        self.same_domain(fine)
            && self
                .shape
                .iter()
                .zip(&fine.shape)
                .all(|(&c, &f)| f % c == 0)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.axes.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "({}, {})[M={}]", a.lower, a.upper, a.modes)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_small_mode_counts() {
        assert!(Grid::line(0.0, 1.0, 6).is_ok());
        assert!(Grid::line(0.0, 1.0, 7).is_err());
        assert!(Grid::line(0.0, 1.0, 2).is_err());
        assert!(Grid::line(1.0, 1.0, 8).is_err());
    }

    #[test]
    fn spacing_times_modes_is_length() {
        let g = Grid::line(0.0, 2.0 * PI, 64).unwrap();
        let a = g.axis(0);
        assert!((a.spacing() * 64.0 - 2.0 * PI).abs() <= 4.0 * f64::EPSILON * 2.0 * PI);
        assert_eq!(a.node(0), 0.0);
    }

    #[test]
    fn slots_cover_index_set_once() {
        let a = Axis::new(0.0, 1.0, 8).unwrap();
        let modes: Vec<i64> = (0..8).map(|k| a.mode_of_slot(k)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for k in 0..8 {
            assert_eq!(a.slot_of_mode(a.mode_of_slot(k)), Some(k));
        }
        assert_eq!(a.slot_of_mode(4), None);
        assert_eq!(a.slot_of_mode(-5), None);
    }

    #[test]
    fn divisibility() {
        let fine = Grid::line(0.0, 1.0, 128).unwrap();
        assert!(Grid::line(0.0, 1.0, 32).unwrap().divides(&fine));
        assert!(!Grid::line(0.0, 1.0, 48).unwrap().divides(&fine));
        assert!(!Grid::line(0.0, 2.0, 32).unwrap().divides(&fine));
    }
}
