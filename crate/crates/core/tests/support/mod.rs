//! Independent oracles shared by the `oracles` and `acceptance` targets.
#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use nlde_core::harness::h1_error;
use nlde_core::integrators::{reverse_check, Scheme, Stepper};
use nlde_core::model::{discrete_energy, mass, InitialData, ModelParams, Regime};
use nlde_core::spectral::{mode_symbol, Grid, Representation, Spinor, SpinorField};

/// A measured quantity and the closed interval it must fall in.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub name: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Outcome {
    pub fn below(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, lo: f64::NEG_INFINITY, hi: tol }
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self { name: name.into(), value, lo, hi }
    }

    pub fn passed(&self) -> bool {
        self.value.is_finite() && self.lo <= self.value && self.value <= self.hi
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAIL" };
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (false, _) => write!(f, "{status} {}: {:.3e} <= {:.1e}", self.name, self.value, self.hi),
            (true, false) => write!(f, "{status} {}: {:.3} >= {}", self.name, self.value, self.lo),
            (true, true) => write!(f, "{status} {}: {:.3} in [{}, {}]", self.name, self.value, self.lo, self.hi),
        }
    }
}

pub fn assert_all(outcomes: &[Outcome]) {
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.to_string()).collect();
    assert!(failed.is_empty(), "{}", failed.join("\n"));
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn random_c(rng: &mut StdRng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random coefficients on every mode with `|l_i| <= band` per axis.
pub fn random_band_limited(grid: &Grid, band: i64, seed: u64) -> SpinorField {
    let mut r = rng(seed);
    let dim = grid.dim();
    SpinorField::from_coefficients(grid, |mode| {
        let a = random_c(&mut r);
        let b = random_c(&mut r);
        if mode[..dim].iter().all(|l| l.abs() <= band) {
            [a, b]
        } else {
            [Complex64::default(); 2]
        }
    })
}

fn max_diff(a: &SpinorField, b: &SpinorField) -> f64 {
    let d = a - b;
    (0..2)
        .flat_map(|c| d.component(c).iter().map(|z| z.norm()).collect::<Vec<_>>())
        .fold(0.0, f64::max)
}

/// Node values `sum_l c_l exp(i mu_l (x_j - a))` by direct summation.
pub fn direct_synthesis(coeffs: &SpinorField) -> SpinorField {
    let g = coeffs.grid();
    let dim = g.dim();
    let lower: Vec<f64> = g.bounds().iter().map(|b| b.0).collect();
    let mut values = [vec![Complex64::default(); g.len()], vec![Complex64::default(); g.len()]];
    for j in 0..g.len() {
        let x = g.coordinates(j);
        for k in 0..g.len() {
            let mu = g.wavevector_at(k);
            let arg: f64 = (0..dim).map(|d| mu[d] * (x[d] - lower[d])).sum();
            let e = Complex64::from_polar(1.0, arg);
            let c = coeffs.value(k);
            values[0][j] += c[0] * e;
            values[1][j] += c[1] * e;
        }
    }
    let [a, b] = values;
    SpinorField::from_components(g, Representation::Physical, a, b).unwrap()
}

/// `c_l = (1/M) sum_j U_j exp(-i mu_l (x_j - a))` by direct summation.
pub fn direct_analysis(field: &SpinorField) -> SpinorField {
    let g = field.grid();
    let dim = g.dim();
    let lower: Vec<f64> = g.bounds().iter().map(|b| b.0).collect();
    let scale = 1.0 / g.len() as f64;
    let mut values = [vec![Complex64::default(); g.len()], vec![Complex64::default(); g.len()]];
    for k in 0..g.len() {
        let mu = g.wavevector_at(k);
        for j in 0..g.len() {
            let x = g.coordinates(j);
            let arg: f64 = (0..dim).map(|d| mu[d] * (x[d] - lower[d])).sum();
            let e = Complex64::from_polar(scale, -arg);
            let u = field.value(j);
            values[0][k] += u[0] * e;
            values[1][k] += u[1] * e;
        }
    }
    let [a, b] = values;
    SpinorField::from_components(g, Representation::Fourier, a, b).unwrap()
}

/// `exp(-i t Gamma) = cos(t delta) I - i sin(t delta) Gamma / delta`, applied
/// mode by mode without any eigendecomposition.
pub fn analytic_free_flow(field: &SpinorField, t: f64) -> SpinorField {
    let g = field.grid();
    let dim = g.dim();
    let coeffs = direct_or_fast_analysis(field);
    let i = Complex64::i();
    let mut out = coeffs.clone();
    let comps = out.components_mut();
    for k in 0..g.len() {
        let mu = g.wavevector_at(k);
        let (m1, m2) = (mu[0], if dim > 1 { mu[1] } else { 0.0 });
        let delta = (1.0 + m1 * m1 + m2 * m2).sqrt();
        let (c, s) = ((t * delta).cos(), (t * delta).sin() / delta);
        let gamma = [
            [Complex64::from(1.0), Complex64::new(m1, -m2)],
            [Complex64::new(m1, m2), Complex64::from(-1.0)],
        ];
        let v = coeffs.value(k);
        for r in 0..2 {
            let gv = gamma[r][0] * v[0] + gamma[r][1] * v[1];
            comps[r][k] = c * v[r] - i * s * gv;
        }
    }
    out.synthesize()
}

fn direct_or_fast_analysis(field: &SpinorField) -> SpinorField {
    if field.grid().len() <= 64 {
        direct_analysis(&field.synthesize())
    } else {
        field.analyze()
    }
}

fn accuracy(m: usize) -> SpinorField {
    let d = InitialData::Accuracy1d;
    d.sample(&d.grid(m).unwrap()).unwrap()
}

fn run(initial: &SpinorField, params: &ModelParams, scheme: Scheme, step: f64, n: u64) -> SpinorField {
    let mut u = initial.synthesize();
    Stepper::new(initial.grid(), params, scheme, step).advance_n(&mut u, n);
    u
}

fn h1(a: &SpinorField, b: &SpinorField) -> f64 {
    h1_error(a, b).unwrap().h1
}

pub fn transform_direct_summation() -> Vec<Outcome> {
    let grids = [
        Grid::line(0.0, 2.0 * PI, 8).unwrap(),
        Grid::line(-1.0, 3.0, 8).unwrap(),
        Grid::rectangle((0.0, 2.0 * PI, 8), (0.0, 1.0, 8)).unwrap(),
    ];
    let mut out = Vec::new();
    for (n, g) in grids.iter().enumerate() {
        let c = random_band_limited(g, 4, 11 + n as u64);
        let nodes = direct_synthesis(&c);
        let tag = g.to_string();
        out.push(Outcome::below(format!("synthesize vs direct sum on {tag}"), max_diff(&c.synthesize(), &nodes), 1e-13));
        out.push(Outcome::below(
            format!("analyze vs direct sum on {tag}"),
            max_diff(&nodes.analyze(), &direct_analysis(&nodes)),
            1e-13,
        ));
        out.push(Outcome::below(
            format!("analyze . synthesize on {tag}"),
            max_diff(&c.synthesize().analyze(), &c),
            1e-13,
        ));
    }
    out
}

pub fn closed_form_eigenvectors() -> Vec<Outcome> {
    let g = Grid::line(0.0, 2.0 * PI, 8).unwrap();
    let s = mode_symbol(&g, &[1]).unwrap();
    let d = 2f64.sqrt();
    let a = ((1.0 + d) / (2.0 * d)).sqrt();
    let b = 1.0 / (2.0 * d * (1.0 + d)).sqrt();
    let q = s.eigenvectors.0;
    let formula = [[a, -b], [b, a]];
    let quoted = [[0.9238795, -0.3826834], [0.3826834, 0.9238795]];
    let dev = |m: [[f64; 2]; 2]| {
        (0..4).map(|k| (q[k / 2][k % 2] - Complex64::from(m[k / 2][k % 2])).norm()).fold(0.0, f64::max)
    };
    vec![
        Outcome::below("delta_1 = sqrt 2", (s.delta - d).abs(), 1e-15),
        Outcome::below("Q_1 vs closed form", dev(formula), 1e-15),
        Outcome::below("Q_1 vs quoted decimals", dev(quoted), 5e-8),
    ]
}

pub fn projector_phase() -> Vec<Outcome> {
    let cases = [
        (Grid::line(0.0, 2.0 * PI, 16).unwrap(), vec![1i64]),
        (Grid::line(-2.0, 1.0, 16).unwrap(), vec![-3]),
        (Grid::rectangle((0.0, 2.0 * PI, 8), (0.0, 1.0, 8)).unwrap(), vec![1, -2]),
    ];
    let mut r = rng(5);
    let mut out = Vec::new();
    for (g, mode) in cases {
        let s = mode_symbol(&g, &mode).unwrap();
        let v: Spinor = [random_c(&mut r), random_c(&mut r)];
        for (proj, sign, label) in [(s.proj_plus, -1.0, "+"), (s.proj_minus, 1.0, "-")] {
            let pv = proj.apply(v);
            let field = SpinorField::from_coefficients(&g, |m| {
                if m[..mode.len()] == mode[..] { pv } else { [Complex64::default(); 2] }
            });
            let t = 0.73;
            let expect = field.scaled(Complex64::from_polar(1.0, sign * t * s.delta));
            out.push(Outcome::below(
                format!("free flow of P{label} mode {mode:?} on {g}"),
                max_diff(&field.free_flow(t), &expect),
                1e-13,
            ));
        }
    }
    out
}

fn fd_error(m: usize) -> (f64, f64) {
    let g = Grid::line(0.0, 2.0 * PI, m).unwrap();
    let coeffs = random_band_limited(&g, 6, 17);
    let u = coeffs.synthesize();
    let du = coeffs.spectral_derivative(0).synthesize();
    let h = g.axis(0).spacing();
    let mut err = 0.0f64;
    for c in 0..2 {
        let v = u.component(c);
        for j in 0..m {
            let fd = (v[(j + 1) % m] - v[(j + m - 1) % m]) / (2.0 * h);
            err = err.max((fd - du.component(c)[j]).norm());
        }
    }
    // |u'''| <= sum |l|^3 |c_l|; the centered difference errs by at most h^2 |u'''| / 6
    let third: f64 = (0..m)
        .map(|k| {
            let l = g.mode_at(k)[0].abs() as f64;
            let c = coeffs.value(k);
            l.powi(3) * c[0].norm().max(c[1].norm())
        })
        .sum();
    (err, h * h * third / 6.0)
}

pub fn finite_difference_derivative() -> Vec<Outcome> {
    let (e512, bound) = fd_error(512);
    let (e256, _) = fd_error(256);
    vec![
        Outcome::below("spectral vs centered difference at M=512, relative to h^2 bound", e512 / bound, 1.0),
        Outcome::within("centered difference order against spectral derivative", (e256 / e512).log2(), 1.9, 2.1),
    ]
}

pub fn projection_norms() -> Vec<Outcome> {
    let mut out = Vec::new();
    for seed in 0..4u64 {
        let fine = Grid::line(0.0, 2.0 * PI, 32).unwrap();
        let coarse = fine.with_modes(16).unwrap();
        let u = random_band_limited(&fine, 16, 100 + seed).synthesize();
        let c = direct_analysis(&u);
        let kept: f64 = (0..fine.len())
            .filter(|&k| coarse.slot_of(&fine.mode_at(k)[..1]).is_some())
            .map(|k| {
                let mu = fine.wavevector_at(k)[0];
                let v = c.value(k);
                (1.0 + mu * mu) * (v[0].norm_sqr() + v[1].norm_sqr())
            })
            .sum::<f64>()
            .sqrt();
        let projected = u.project(&coarse).unwrap().sobolev_norm(1);
        out.push(Outcome::below(
            format!("H1 of projection vs direct coefficient sum (seed {seed})"),
            (projected - kept).abs() / kept,
            1e-12,
        ));
        out.push(Outcome::below(
            format!("H1 of projection over H1 of input (seed {seed})"),
            projected / u.sobolev_norm(1),
            1.0,
        ));
    }
    out
}

pub fn resolution_refinement() -> Vec<Outcome> {
    let params = ModelParams::long_time(0.25).unwrap();
    let (u64_, u128, u256) = (accuracy(64), accuracy(128), accuracy(256));
    let e128 = discrete_energy(&u128, &params).total;
    let e256 = discrete_energy(&u256, &params).total;
    vec![
        Outcome::below("H1 norm of accuracy data, M=64 vs 128", (u64_.sobolev_norm(1) - u128.sobolev_norm(1)).abs(), 1e-10),
        Outcome::below("mass of accuracy data, M=128 vs 256 (relative)", (mass(&u128) - mass(&u256)).abs() / mass(&u256), 1e-12),
        Outcome::below("energy at eps=0.25, M=128 vs 256 (relative)", (e128 - e256).abs() / e256.abs(), 1e-10),
    ]
}

/// Local error of one step against the same step split into 2^10 Strang substeps.
fn local_error(scheme: Scheme, step: f64) -> f64 {
    let params = ModelParams::long_time(1.0).unwrap();
    let u = accuracy(64);
    let one = run(&u, &params, scheme, step, 1);
    let fine = run(&u, &params, Scheme::Strang, step / 1024.0, 1024);
    h1(&one, &fine)
}

pub fn strang_local_order() -> Vec<Outcome> {
    let (a, b) = rayon::join(|| local_error(Scheme::Strang, 0.1), || local_error(Scheme::Strang, 0.05));
    vec![Outcome::within("Strang local error order vs nested substeps", (a / b).log2(), 2.8, f64::INFINITY)]
}

pub fn lie_global_order() -> Vec<Outcome> {
    let params = ModelParams::long_time(1.0).unwrap();
    let u = accuracy(64);
    let horizon = 1.0;
    let steps = [0.1, 0.05, 0.025];
    let finest = steps[2] / 1024.0;
    let exact = run(&u, &params, Scheme::Strang, finest, (horizon / finest).round() as u64);
    let errors: Vec<f64> = steps
        .par_iter()
        .map(|&s| h1(&run(&u, &params, Scheme::Lie, s, (horizon / s).round() as u64), &exact))
        .collect();
    errors
        .windows(2)
        .zip(&steps[1..])
        .map(|(w, s)| Outcome::within(format!("Lie order at tau={s}"), (w[0] / w[1]).log2(), 0.85, 1.15))
        .collect()
}

pub fn h1_of_plane_wave() -> Vec<Outcome> {
    let g = Grid::line(0.0, 2.0 * PI, 16).unwrap();
    let wave = SpinorField::from_fn(&g, |x| [Complex64::from_polar(1.0, x[0]), 0.0.into()]);
    let zero = SpinorField::zeros(&g, Representation::Physical);
    let e = h1_error(&wave, &zero).unwrap().h1;
    vec![Outcome::below("h1 of (e^{ix}, 0) minus 2 sqrt(pi)", (e - 2.0 * PI.sqrt()).abs(), 1e-13)]
}

pub fn reference_self_consistency() -> Vec<Outcome> {
    let params = ModelParams::long_time(0.5).unwrap();
    let u = accuracy(128);
    let (coarse, fine) = rayon::join(
        || run(&u, &params, Scheme::Strang, 1e-4, 40_000),
        || run(&u, &params, Scheme::Strang, 5e-5, 80_000),
    );
    let step_halving = h1(&coarse, &fine);

    let grid_doubling = |data: InitialData, m: usize, step: f64, n: u64| {
        let a = data.sample(&data.grid(m).unwrap()).unwrap();
        let b = data.sample(&data.grid(2 * m).unwrap()).unwrap();
        let (ra, rb) = rayon::join(
            || run(&a, &params, Scheme::Strang, step, n),
            || run(&b, &params, Scheme::Strang, step, n),
        );
        h1(&ra, &rb)
    };
    vec![
        Outcome::below("reference tau=1e-4 vs 5e-5 at t=4, eps=0.5", step_halving, 1e-7),
        Outcome::below(
            "reference M=128 vs 256, accuracy-1d, t=4",
            grid_doubling(InitialData::Accuracy1d, 128, 1e-3, 4000),
            1e-10,
        ),
        Outcome::below(
            "reference M=128^2 vs 256^2, irrational-2d, t=0.1",
            grid_doubling(InitialData::Irrational2d, 128, 1e-3, 100),
            1e-10,
        ),
    ]
}

pub fn linear_limit() -> Vec<Outcome> {
    let params = ModelParams::long_time(0.0).unwrap();
    let u = accuracy(32);
    let stepped = run(&u, &params, Scheme::Strang, 0.01, 100);
    vec![
        Outcome::below("eps=0, 100 steps vs free flow to t=1", h1(&stepped, &u.free_flow(1.0)), 1e-12),
        Outcome::below("eps=0, 100 steps vs analytic mode evolution", h1(&stepped, &analytic_free_flow(&u, 1.0)), 1e-12),
    ]
}

pub fn conservation() -> Vec<Outcome> {
    let params = ModelParams::long_time(0.5).unwrap();
    let u128 = accuracy(128);
    let u64_ = accuracy(64);
    let (end, back) = rayon::join(
        || run(&u128, &params, Scheme::Strang, 0.01, 10_000),
        || reverse_check(&u64_, 0.01, &params, 1000),
    );
    vec![
        Outcome::below("relative mass drift, 1e4 Strang steps", (mass(&end) - mass(&u128)).abs() / mass(&u128), 1e-10),
        Outcome::below("reverse check, 1e3 steps at M=64", back, 1e-9),
    ]
}

pub fn regime_consistency() -> Vec<Outcome> {
    let u = accuracy(64);
    let long = ModelParams::new(1.0, -1.0, 0.5, Regime::LongTime).unwrap();
    let osc = ModelParams::new(1.0, -1.0, 0.5, Regime::Oscillatory).unwrap();
    let a = run(&u, &long, Scheme::Strang, 0.03, 1);
    let b = run(&u, &osc, Scheme::Strang, 0.03, 1);
    vec![Outcome::below("eps=1 oscillatory step vs long-time step", max_diff(&a, &b), 1e-13)]
}

pub type Oracle = fn() -> Vec<Outcome>;

/// Every oracle, in a fixed order.
pub fn all() -> Vec<(&'static str, Vec<Outcome>)> {
    let suite: [(&'static str, Oracle); 14] = [
        ("transform", transform_direct_summation),
        ("eigenvectors", closed_form_eigenvectors),
        ("projector phase", projector_phase),
        ("derivative", finite_difference_derivative),
        ("projection", projection_norms),
        ("refinement", resolution_refinement),
        ("strang local order", strang_local_order),
        ("lie order", lie_global_order),
        ("h1 metric", h1_of_plane_wave),
        ("reference", reference_self_consistency),
        ("linear limit", linear_limit),
        ("conservation", conservation),
        ("regime", regime_consistency),
        ("metric symmetry", metric_symmetry),
    ];
    suite.par_iter().map(|(name, f)| (*name, f())).collect()
}

pub fn metric_symmetry() -> Vec<Outcome> {
    let g = Grid::line(0.0, 2.0 * PI, 32).unwrap();
    let a = random_band_limited(&g, 10, 1).synthesize();
    let b = random_band_limited(&g, 10, 2).synthesize();
    let (ab, ba) = (h1_error(&a, &b).unwrap(), h1_error(&b, &a).unwrap());
    vec![Outcome::below("h1_error(a,b) - h1_error(b,a)", (ab.h1 - ba.h1).abs() + (ab.l2 - ba.l2).abs(), 1e-14)]
}
