//! Fast invariant checks run by `nlde --seed-check`.

use std::f64::consts::PI;

use crate::integrators::{reverse_check, Scheme, Stepper};
use crate::model::{mass, nonlinear_flow, nonlinear_phase, InitialData, ModelParams};
use crate::spectral::{mode_symbol, Grid, Mat2, SpinorField};

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.value.is_finite() && self.value <= self.tolerance
    }
}

fn check(name: &'static str, value: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        value,
        tolerance,
    }
}

pub fn seed_check() -> Vec<CheckOutcome> {
    let data = InitialData::Accuracy1d;
    let grid = data.grid(64).expect("catalog grid");
    let u = data.sample(&grid).expect("catalog data");
    let params = ModelParams::long_time(0.5).expect("valid parameters");
    let mut out = Vec::new();

    let round_trip = (&u.analyze().synthesize() - &u).l2_norm() / u.l2_norm();
    out.push(check("analyze/synthesize round trip", round_trip, 1e-12));

    let mut projector = 0.0f64;
    let mut diagonalization = 0.0f64;
    let g2 = Grid::rectangle((0.0, 2.0 * PI, 16), (0.0, 1.0, 16)).expect("grid");
    for l1 in -8..8 {
        for l2 in -8..8 {
            let s = mode_symbol(&g2, &[l1, l2]).expect("mode in range");
            let (p, m) = (s.proj_plus, s.proj_minus);
            projector = projector
                .max((p + m).max_abs_diff(&Mat2::IDENTITY))
                .max((p * p).max_abs_diff(&p))
                .max((p * m).max_abs_diff(&Mat2::ZERO));
            let q = s.eigenvectors;
            diagonalization =
                diagonalization.max((q * s.diagonal() * q.adjoint()).max_abs_diff(&s.gamma) / s.delta);
        }
    }
    out.push(check("projector algebra", projector, 1e-13));
    out.push(check("symbol diagonalization", diagonalization, 1e-13));

    let flowed = u.free_flow(0.37);
    let unitarity = (flowed.sobolev_norm(0) - u.sobolev_norm(0)).abs() / u.sobolev_norm(0);
    out.push(check("free flow unitarity", unitarity, 1e-12));

    let before = nonlinear_phase(&u, &params);
    let after = nonlinear_phase(&nonlinear_flow(&u, 0.9, &params), &params);
    let phase = before
        .plus
        .iter()
        .zip(&after.plus)
        .chain(before.minus.iter().zip(&after.minus))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    out.push(check("nonlinear phase invariance", phase, 1e-13));

    let stepper = Stepper::new(&grid, &params, Scheme::Strang, 0.01);
    let mut v: SpinorField = u.clone();
    stepper.advance_n(&mut v, 1000);
    let drift = (mass(&v) - mass(&u)).abs() / mass(&u);
    out.push(check("mass drift over 1000 Strang steps", drift, 1e-10));

    out.push(check(
        "Strang reversibility (1 step)",
        reverse_check(&u, 0.01, &params, 1),
        1e-12,
    ));
    out
}
