//! Cached rustfft plans and unnormalized tensor-product transforms.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

type PlanCache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<PlanCache> = OnceLock::new();
    let forward = direction == FftDirection::Forward;
    let mut plans = PLANS
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner());
    plans
        .entry((len, forward))
        .or_insert_with(|| FftPlanner::new().plan_fft(len, direction))
        .clone()
}

/// In-place unnormalized DFT over a row-major array of the given shape.
///
/// Forward computes `sum_j u_j exp(-2 pi i j k / M)`, inverse the same with
/// `+`; neither applies a `1/M` factor.
pub(crate) fn transform(data: &mut [Complex64], shape: &[usize], direction: FftDirection) {
    debug_assert_eq!(data.len(), shape.iter().product::<usize>());
    match *shape {
        [n] => plan(n, direction).process(data),
        [nx, ny] => {
            plan(ny, direction).process(data);
            let mut columns = vec![Complex64::default(); data.len()];
            transpose(data, &mut columns, nx, ny);
            plan(nx, direction).process(&mut columns);
            transpose(&columns, data, ny, nx);
        }
        _ => unreachable!("grids are one- or two-dimensional"),
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for r in 0..rows {
        for c in 0..cols {
            dst[c * rows + r] = src[r * cols + c];
        }
    }
}
