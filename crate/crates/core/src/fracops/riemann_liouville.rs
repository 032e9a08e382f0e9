use alloc::vec;

use super::SampledSignal;
use crate::math;
use crate::{Error, Result};

/// Product-integration weights for node `n` of `J^α` with the integrand
/// replaced by its piecewise-linear interpolant.
///
/// `J^α v(t_n) = Δt^α/Γ(α+2) · [a_{0} v_0 + Σ_{j=1}^{n−1} c_{n−j} v_j + v_n]`
/// with `a_0 = (n−1)^{α+1} − (n−1−α)·n^α` and
/// `c_m = (m+1)^{α+1} − 2m^{α+1} + (m−1)^{α+1}`.
pub fn rl_integral_into(values: &[f64], alpha: f64, dt: f64, out: &mut [f64]) {
    let n_nodes = values.len();
    debug_assert_eq!(out.len(), n_nodes);
    if n_nodes == 0 {
        return;
    }
    let ap1 = alpha + 1.0;
    // (m)^{α+1} for m = 0..N
    let pw: alloc::vec::Vec<f64> = (0..=n_nodes).map(|m| math::powf(m as f64, ap1)).collect();
    let inner: alloc::vec::Vec<f64> = (0..n_nodes)
        .map(|m| {
            if m == 0 {
                0.0
            } else {
                pw[m + 1] - 2.0 * pw[m] + pw[m - 1]
            }
        })
        .collect();
    let scale = math::powf(dt, alpha) / math::gamma(alpha + 2.0);
    out[0] = 0.0;
    for n in 1..n_nodes {
        let nf = n as f64;
        let mut acc = math::CompensatedSum::new();
        acc.add((pw[n - 1] - (nf - 1.0 - alpha) * math::powf(nf, alpha)) * values[0]);
        for j in 1..n {
            acc.add(inner[n - j] * values[j]);
        }
        acc.add(values[n]);
        out[n] = scale * acc.value();
    }
}

/// Riemann–Liouville integral `J^α v` at every grid node, `α > 0`.
///
/// Exact for piecewise-affine `v`.
pub fn rl_integral(v: &SampledSignal, alpha: f64) -> Result<SampledSignal> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::domain("alpha", alpha, "alpha > 0"));
    }
    let grid = v.grid();
    let mut out = vec![0.0; grid.len()];
    rl_integral_into(v.values(), alpha, grid.step(), &mut out);
    SampledSignal::new(grid, out)
}
