use alloc::vec;
use alloc::vec::Vec;

use super::{FractionalOrder, SampledSignal};
use crate::math;

/// L1 approximation of the Caputo derivative.
///
/// The L1 formula has no value at `t_0`; `signal[0]` repeats `signal[1]` and
/// `origin_extrapolated` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Derivative {
    pub signal: SampledSignal,
    pub origin_extrapolated: bool,
}

/// Convolution weights `b_j = (j+1)^{1−α} − j^{1−α}`, `j = 0..n`.
///
/// For `α = 1` this is the backward-difference stencil `(1, 0, 0, …)`.
pub fn l1_weights(alpha: FractionalOrder, n: usize) -> Vec<f64> {
    let mut b = vec![0.0; n];
    if n == 0 {
        return b;
    }
    b[0] = 1.0;
    if alpha.is_classical() {
        return b;
    }
    let p = 1.0 - alpha.value();
    for (j, bj) in b.iter_mut().enumerate().skip(1) {
        let jf = j as f64;
        // j^p·((1 + 1/j)^p − 1) without the cancellation of the naive difference
        *bj = math::powf(jf, p) * libm::expm1(p * libm::log1p(1.0 / jf));
    }
    b
}

/// Prefactor `Δt^{−α}/Γ(2−α)` of the L1 sum.
pub fn l1_scale(alpha: FractionalOrder, dt: f64) -> f64 {
    if alpha.is_classical() {
        1.0 / dt
    } else {
        math::powf(dt, -alpha.value()) / math::gamma(2.0 - alpha.value())
    }
}

/// Slice form of [`caputo_l1`]: writes `D^α v` at every node into `out`
/// using precomputed weights (length ≥ `values.len()`).
pub fn caputo_l1_into(values: &[f64], scale: f64, weights: &[f64], out: &mut [f64]) {
    let n = values.len();
    debug_assert_eq!(out.len(), n);
    if n == 0 {
        return;
    }
    out[0] = 0.0;
    for i in 1..n {
        let mut acc = 0.0;
        for j in 0..i {
            acc += weights[j] * (values[i - j] - values[i - j - 1]);
        }
        out[i] = scale * acc;
    }
    if n > 1 {
        out[0] = out[1];
    }
}

/// `D_t^α v` at `t_1..t_{N−1}` by the L1 scheme on the signal's grid.
pub fn caputo_l1(v: &SampledSignal, alpha: FractionalOrder) -> L1Derivative {
    let grid = v.grid();
    let weights = l1_weights(alpha, grid.len());
    let scale = l1_scale(alpha, grid.step());
    let mut out = vec![0.0; grid.len()];
    caputo_l1_into(v.values(), scale, &weights, &mut out);
    L1Derivative {
        signal: SampledSignal::new(grid, out).expect("L1 of finite data is finite"),
        origin_extrapolated: true,
    }
}
