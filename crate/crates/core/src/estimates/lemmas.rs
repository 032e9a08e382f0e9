use alloc::vec;
use alloc::vec::Vec;

use super::EstimateCheck;
use crate::fracops::{
    caputo_l1, gronwall_bound, l1_scale, l1_weights, rl_integral, FractionalOrder, SampledSignal,
    TimeGrid,
};
use crate::math;
use crate::{Error, Result};

/// Residuals of a refinement sweep and the fitted log–log slope.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Refinement {
    pub steps: Vec<f64>,
    pub residuals: Vec<f64>,
    pub order: f64,
}

/// `max_n |J^α D^α v(t_n) − (v(t_n) − v(0))|` with the L1 derivative and
/// product-integration `J^α`.
pub fn lemma_j_residual(v: &SampledSignal, alpha: FractionalOrder) -> Result<f64> {
    let d = caputo_l1(v, alpha).signal;
    let j = rl_integral(&d, alpha.value())?;
    let v0 = v.values()[0];
    Ok(j.values()
        .iter()
        .zip(v.values())
        .fold(0.0_f64, |m, (a, b)| m.max((a - (b - v0)).abs())))
}

/// [`lemma_j_residual`] as a check against an absolute `tolerance`.
pub fn check_lemma_j(v: &SampledSignal, alpha: FractionalOrder, tolerance: f64) -> Result<EstimateCheck> {
    let r = lemma_j_residual(v, alpha)?;
    Ok(EstimateCheck::with_tolerance("lemma_j", r, 0.0, tolerance))
}

/// Residual of [`lemma_j_residual`] for `v` sampled on `nodes[i]` points of
/// `[0, final_time]`, with the slope of `log r` against `log Δt`.
pub fn lemma_j_refinement<F: Fn(f64) -> f64>(
    v: F,
    alpha: FractionalOrder,
    final_time: f64,
    nodes: &[usize],
) -> Result<Refinement> {
    if nodes.len() < 2 {
        return Err(Error::InsufficientHistory { len: nodes.len() });
    }
    let mut steps = Vec::with_capacity(nodes.len());
    let mut residuals = Vec::with_capacity(nodes.len());
    for &n in nodes {
        let g = TimeGrid::new(final_time, n)?;
        let s = SampledSignal::from_fn(g, &v)?;
        steps.push(g.step());
        residuals.push(lemma_j_residual(&s, alpha)?);
    }
    let xs: Vec<f64> = steps.iter().map(|h| math::ln(*h)).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| math::ln(*r)).collect();
    let order = math::fit_slope(&xs, &ys);
    Ok(Refinement {
        steps,
        residuals,
        order,
    })
}

/// Discrete product inequality `w·D^α w ≥ ½ D^α(w²)` at `t_1..t_{N−1}`.
///
/// The gap is summed term by term,
/// `c Σ_j b_j (w_{n−j} − w_{n−j−1})(w_n − (w_{n−j} + w_{n−j−1})/2)`,
/// and the check passes when its minimum is at least `−1e−12`.
pub fn check_alikhanov(w: &SampledSignal, alpha: FractionalOrder) -> EstimateCheck {
    let grid = w.grid();
    let v = w.values();
    let b = l1_weights(alpha, grid.len());
    let c = l1_scale(alpha, grid.step());
    let mut worst = f64::INFINITY;
    for n in 1..v.len() {
        let mut acc = math::CompensatedSum::new();
        for j in 0..n {
            let (hi, lo) = (v[n - j], v[n - j - 1]);
            acc.add(b[j] * (hi - lo) * (v[n] - 0.5 * (hi + lo)));
        }
        worst = worst.min(c * acc.value());
    }
    if !worst.is_finite() {
        worst = 0.0;
    }
    EstimateCheck::with_tolerance("alikhanov", -worst, 0.0, 1e-12)
}

/// The chain `T^{α−1}∫₀ᵗv ≤ t^{α−1}∫₀ᵗv ≤ Γ(α)J^α v(t) ≤ T^α max v` for
/// positive `v`, each link at its tightest node, plus the bound
/// `Γ(α)J^α v(t) ≤ (T^α/α) max v` that the kernel mass gives.
pub fn inequality_chain(v: &SampledSignal, alpha: FractionalOrder) -> Result<Vec<EstimateCheck>> {
    if let Some(&bad) = v.values().iter().find(|x| !(**x > 0.0)) {
        return Err(Error::domain("v", bad, "v > 0"));
    }
    let a = alpha.value();
    let grid = v.grid();
    let t_final = grid.final_time();
    let vals = v.values();
    let vmax = v.max_abs();
    let jv = rl_integral(v, a)?;
    let ga = math::gamma(a);
    let mut cum = 0.0;
    let dt = grid.step();

    let mut links = [(f64::INFINITY, 0.0, 0.0); 4];
    let mut keep = |slot: usize, lhs: f64, rhs: f64| {
        if rhs - lhs < links[slot].0 {
            links[slot] = (rhs - lhs, lhs, rhs);
        }
    };
    for n in 1..vals.len() {
        cum += 0.5 * dt * (vals[n] + vals[n - 1]);
        let t = grid.node(n);
        let full = math::powf(t_final, a - 1.0) * cum;
        let local = math::powf(t, a - 1.0) * cum;
        let kernel = ga * jv.values()[n];
        keep(0, full, local);
        keep(1, local, kernel);
        keep(2, kernel, math::powf(t_final, a) * vmax);
        keep(3, kernel, math::powf(t_final, a) / a * vmax);
    }
    let names = ["chain_time_weight", "chain_kernel", "chain_upper", "chain_kernel_mass"];
    Ok(names
        .iter()
        .zip(links)
        .map(|(name, (_, lhs, rhs))| EstimateCheck::new(name, lhs, rhs))
        .collect())
}

/// Implicit L1 solution of `D^α y = c₁ y + c₂(t)`, `y(0) = y₀`, on the grid
/// of `c2`.
pub fn solve_linear_fractional(
    y0: f64,
    c1: f64,
    c2: &SampledSignal,
    alpha: FractionalOrder,
) -> Result<SampledSignal> {
    let grid = c2.grid();
    let n_t = grid.len();
    let b = l1_weights(alpha, n_t);
    let c = l1_scale(alpha, grid.step());
    if !(c > c1) {
        return Err(Error::SingularSystem);
    }
    let f = c2.values();
    let mut y = vec![0.0; n_t];
    y[0] = y0;
    for n in 1..n_t {
        let mut hist = 0.0;
        for j in 1..n {
            hist += b[j] * (y[n - j] - y[n - j - 1]);
        }
        y[n] = (c * y[n - 1] - c * hist + f[n]) / (c - c1);
    }
    SampledSignal::new(grid, y)
}

/// `y ≤ gronwall_bound` at every node for the L1 solution of
/// `D^α y = c₁y + c₂`, allowing `rel_tol·(1 + bound)`.
pub fn check_gronwall(
    y0: f64,
    c1: f64,
    c2: &SampledSignal,
    alpha: FractionalOrder,
    rel_tol: f64,
) -> Result<EstimateCheck> {
    let y = solve_linear_fractional(y0, c1, c2, alpha)?;
    let bound = gronwall_bound(y0, c1, c2, alpha)?;
    let mut worst = (f64::INFINITY, 0.0, 0.0);
    for (a, b) in y.values().iter().zip(bound.values()) {
        let slack = (b - a) / (1.0 + b.abs());
        if slack < worst.0 {
            worst = (slack, *a, *b);
        }
    }
    let (_, lhs, rhs) = worst;
    Ok(EstimateCheck::with_tolerance("gronwall", lhs, rhs, rel_tol * (1.0 + rhs.abs())))
}
