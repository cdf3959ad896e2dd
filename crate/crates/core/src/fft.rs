//! Minimal 3-D complex FFT on flat row-major arrays, built on rustfft.
//!
//! Conventions, used consistently across the crate:
//!   forward:  c_k = (1/n^3) sum_x s(x) e^{-i k.x}
//!   inverse:  s(x) = sum_k c_k e^{+i k.x}
//! so `inverse(forward(s)) == s` and coefficients are the amplitudes of e^{ikx}.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type PlanKey = (usize, bool);

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<PlanKey, Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = plans.lock().unwrap();
    guard
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

/// In-place unnormalized transform along every axis of an n x n x n array.
fn transform_all_axes(data: &mut [Complex64], n: usize, inverse: bool) {
    debug_assert_eq!(data.len(), n * n * n);
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::default(); n];

    // axis 2: contiguous rows
    for row in data.chunks_exact_mut(n) {
        fft.process_with_scratch(row, &mut scratch);
    }
    // axis 1: stride n
    for ix in 0..n {
        let base = ix * n * n;
        for iz in 0..n {
            for iy in 0..n {
                line[iy] = data[base + iy * n + iz];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for iy in 0..n {
                data[base + iy * n + iz] = line[iy];
            }
        }
    }
    // axis 0: stride n*n
    let nn = n * n;
    for rem in 0..nn {
        for ix in 0..n {
            line[ix] = data[ix * nn + rem];
        }
        fft.process_with_scratch(&mut line, &mut scratch);
        for ix in 0..n {
            data[ix * nn + rem] = line[ix];
        }
    }
}

/// samples -> coefficients (normalized by 1/n^3).
pub fn forward(samples: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut data = samples.to_vec();
    transform_all_axes(&mut data, n, false);
    let scale = 1.0 / (n * n * n) as f64;
    for v in &mut data {
        *v *= scale;
    }
    data
}

/// coefficients -> samples (no extra scaling; the plain e^{ikx} sum).
pub fn inverse(coeffs: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut data = coeffs.to_vec();
    transform_all_axes(&mut data, n, true);
    data
}

pub fn inverse_in_place(data: &mut [Complex64], n: usize) {
    transform_all_axes(data, n, true);
}

pub fn forward_in_place(data: &mut [Complex64], n: usize) {
    transform_all_axes(data, n, false);
    let scale = 1.0 / (n * n * n) as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}
