use std::ops::Sub;

use num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::transform;
use super::grid::Grid;
use super::symbol::{Mat2, ModeSymbol, Spinor};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// Node values `U_j`, `j` over the interior nodes.
    Physical,
    /// Interpolation coefficients `U~_l`, stored in FFT slot order.
    Fourier,
}

/// Two-component complex field on a periodic grid, either as node values or
/// as discrete Fourier coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    grid: Grid,
    repr: Representation,
    components: [Vec<Complex64>; 2],
}

impl SpinorField {
    pub fn zeros(grid: &Grid, repr: Representation) -> Self {
        let n = grid.len();
        Self {
            grid: grid.clone(),
            repr,
            components: [vec![Complex64::default(); n], vec![Complex64::default(); n]],
        }
    }

    pub fn from_components(
        grid: &Grid,
        repr: Representation,
        upper: Vec<Complex64>,
        lower: Vec<Complex64>,
    ) -> Result<Self> {
        if upper.len() != grid.len() || lower.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} values per component, got {} and {}",
                grid.len(),
                upper.len(),
                lower.len()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            repr,
            components: [upper, lower],
        })
    }

    /// Samples `f` at every interior node. Coordinates beyond the grid
    /// dimension are passed as 0.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut([f64; 2]) -> Spinor) -> Self {
        let mut field = Self::zeros(grid, Representation::Physical);
        for j in 0..grid.len() {
            let v = f(grid.coordinates(j));
            field.components[0][j] = v[0];
            field.components[1][j] = v[1];
        }
        field
    }

    /// Fourier-space field whose coefficients are produced by `f(mode)`.
    pub fn from_coefficients(grid: &Grid, mut f: impl FnMut([i64; 2]) -> Spinor) -> Self {
        let mut field = Self::zeros(grid, Representation::Fourier);
        for k in 0..grid.len() {
            let v = f(grid.mode_at(k));
            field.components[0][k] = v[0];
            field.components[1][k] = v[1];
        }
        field
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn component(&self, i: usize) -> &[Complex64] {
        &self.components[i]
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>; 2] {
        &mut self.components
    }

    pub fn value(&self, j: usize) -> Spinor {
        [self.components[0][j], self.components[1][j]]
    }

    /// Coefficient of mode `mode`; requires Fourier representation.
    pub fn coefficient(&self, mode: &[i64]) -> Option<Spinor> {
        debug_assert_eq!(self.repr, Representation::Fourier);
        self.grid.slot_of(mode).map(|k| self.value(k))
    }

    pub fn is_finite(&self) -> bool {
        self.components
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Forward transform `U~_l = (1/M) sum_j U_j exp(-2 pi i j l / M)`,
    /// tensorized over axes. Fourier input is returned unchanged.
    pub fn analyze(&self) -> SpinorField {
        let mut out = self.clone();
        out.analyze_in_place();
        out
    }

    /// Inverse transform `U_j = sum_l U~_l exp(i mu_l (x_j - a))`.
    /// Physical input is returned unchanged.
    pub fn synthesize(&self) -> SpinorField {
        let mut out = self.clone();
        out.synthesize_in_place();
        out
    }

    pub fn analyze_in_place(&mut self) {
        if self.repr == Representation::Fourier {
            return;
        }
        let scale = 1.0 / self.grid.len() as f64;
        let shape = self.grid.shape().to_vec();
        for c in &mut self.components {
            transform(c, &shape, FftDirection::Forward);
            c.iter_mut().for_each(|z| *z *= scale);
        }
        self.repr = Representation::Fourier;
    }

    pub fn synthesize_in_place(&mut self) {
        if self.repr == Representation::Physical {
            return;
        }
        let shape = self.grid.shape().to_vec();
        for c in &mut self.components {
            transform(c, &shape, FftDirection::Inverse);
        }
        self.repr = Representation::Physical;
    }

    fn into_repr(mut self, repr: Representation) -> SpinorField {
        match repr {
            Representation::Physical => self.synthesize_in_place(),
            Representation::Fourier => self.analyze_in_place(),
        }
        self
    }

    /// Keeps the coefficients with modes in `T_{M_c}` of `target`, dropping
    /// the rest. The result lives on `target` in the input representation.
    pub fn project(&self, target: &Grid) -> Result<SpinorField> {
        if !target.divides(&self.grid) {
            return Err(Error::Projection {
                fine: self.grid.shape().to_vec(),
                coarse: target.shape().to_vec(),
            });
        }
        let coeffs = self.analyze();
        let mut out = SpinorField::zeros(target, Representation::Fourier);
        let dim = target.dim();
        for k in 0..target.len() {
            let mode = target.mode_at(k);
            let src = self
                .grid
                .slot_of(&mode[..dim])
                .expect("coarse index set is contained in the fine one");
            out.components[0][k] = coeffs.components[0][src];
            out.components[1][k] = coeffs.components[1][src];
        }
        Ok(out.into_repr(self.repr))
    }

    /// `sqrt(sum_l (1 + |mu_l|^2)^m |U~_l|^2)` summed over both components.
    pub fn sobolev_norm(&self, m: u32) -> f64 {
        let coeffs = self.analyze();
        let mut sum = 0.0;
        for k in 0..self.grid.len() {
            let mu = self.grid.wavevector_at(k);
            let weight = (1.0 + mu[0] * mu[0] + mu[1] * mu[1]).powi(m as i32);
            sum += weight * (coeffs.components[0][k].norm_sqr() + coeffs.components[1][k].norm_sqr());
        }
        sum.sqrt()
    }

    /// Multiplies every coefficient by `i mu_l` along `axis`, including the
    /// unmatched `-M/2` mode.
    pub fn spectral_derivative(&self, axis: usize) -> SpinorField {
        assert!(axis < self.grid.dim(), "axis {axis} out of range");
        let mut coeffs = self.analyze();
        for k in 0..self.grid.len() {
            let factor = Complex64::new(0.0, self.grid.wavevector_at(k)[axis]);
            coeffs.components[0][k] *= factor;
            coeffs.components[1][k] *= factor;
        }
        coeffs.into_repr(self.repr)
    }

    /// Rectangle-rule `h sum_j |U_j|^2` over both components.
    pub fn quadrature_norm_sqr(&self) -> f64 {
        let physical = self.synthesize();
        let sum: f64 = physical
            .components
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum();
        self.grid.cell_volume() * sum
    }

    /// `sqrt(h sum_j |U_j|^2 + sum_axes h sum_j |d U_j|^2)` with spectral
    /// derivatives.
    pub fn discrete_h1_norm(&self) -> f64 {
        let mut sum = self.quadrature_norm_sqr();
        for axis in 0..self.grid.dim() {
            sum += self.spectral_derivative(axis).quadrature_norm_sqr();
        }
        sum.sqrt()
    }

    /// Plain l2 norm of the stored values in the current representation.
    pub fn l2_norm(&self) -> f64 {
        self.components
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, s: Complex64) -> SpinorField {
        let mut out = self.clone();
        out.components
            .iter_mut()
            .flatten()
            .for_each(|z| *z *= s);
        out
    }

    pub fn try_sub(&self, other: &SpinorField) -> Result<SpinorField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{} vs {}",
                self.grid, other.grid
            )));
        }
        let rhs = other.clone().into_repr(self.repr);
        let mut out = self.clone();
        for (c, r) in out.components.iter_mut().zip(&rhs.components) {
            c.iter_mut().zip(r).for_each(|(a, b)| *a -= b);
        }
        Ok(out)
    }

    /// Free flow `exp(-i t T)` on the discrete mode set.
    pub fn free_flow(&self, t: f64) -> SpinorField {
        let mut out = self.clone();
        FreeFlow::new(&self.grid, t).apply(&mut out);
        out
    }
}

impl Sub for &SpinorField {
    type Output = SpinorField;
    fn sub(self, rhs: &SpinorField) -> SpinorField {
        self.try_sub(rhs).expect("fields on different grids")
    }
}

/// Precomputed per-mode propagators `Q_l exp(-i t D_l) Q_l^*` for a fixed
/// grid and duration.
#[derive(Clone, Debug)]
pub struct FreeFlow {
    grid: Grid,
    duration: f64,
    propagators: Vec<Mat2>,
}

impl FreeFlow {
    pub fn new(grid: &Grid, duration: f64) -> Self {
        let dim = grid.dim();
        let propagators = (0..grid.len())
            .map(|k| {
                let mode = grid.mode_at(k);
                let mu = grid.wavevector_at(k);
                ModeSymbol::from_wavevector(mode[..dim].to_vec(), mu[..dim].to_vec())
                    .propagator(duration)
            })
            .collect();
        Self {
            grid: grid.clone(),
            duration,
            propagators,
        }
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Applies the flow in place, preserving the field's representation.
    pub fn apply(&self, field: &mut SpinorField) {
        assert_eq!(field.grid, self.grid, "free flow built for another grid");
        let repr = field.repr;
        field.analyze_in_place();
        let [upper, lower] = &mut field.components;
        for ((u, l), p) in upper.iter_mut().zip(lower.iter_mut()).zip(&self.propagators) {
            let [nu, nl] = p.apply([*u, *l]);
            *u = nu;
            *l = nl;
        }
        if repr == Representation::Physical {
            field.synthesize_in_place();
        }
    }
}
