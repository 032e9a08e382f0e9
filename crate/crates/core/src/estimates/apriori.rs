use alloc::vec;
use alloc::vec::Vec;

use super::EstimateCheck;
use crate::forward::{caputo_columns, SampledProblem, SpectralField};
use crate::inverse::ConditionsReport;
use crate::math;
use crate::{Error, Result};

/// Evaluate the four a priori bounds on a computed pair `(u, h)`.
///
/// 1. `max_t ‖u‖²_{τ,G} ≤ 2A₀`
/// 2. `∫₀ᵀ (‖∇_x u‖² + ‖∇_y u‖²) ≤ Γ(α)T^{1−α}/2·‖φ‖² + 3A₀T + T·A₁/2
///    + T·A₀·C_ε·f₀²·‖∇ω‖²·max‖f‖²_{L₂(Ω)}`
/// 3. `‖D^α u‖²_{L₂(Q)} ≤ Γ(α)T^{1−α}/2·(‖∇_xφ‖² + ‖∇_yφ‖²)
///    + T·max_t[f₀²(ψ₀+g₀)²‖f‖² + ‖g‖²] + 2A₀·C_ε·f₀²·‖∇ω‖²·max‖f‖²_{L₂(Ω)}`
/// 4. `max_t ∫_G h² ≤ 4f₀²(|G|ψ₀² + 2A₀C_ε‖∇ω‖²) + 2|G|g₀²`
///
/// `C_ε` enters through its upper bound.
pub fn validate_apriori(
    u: &SpectralField,
    h: &[f64],
    problem: &SampledProblem,
    report: &ConditionsReport,
) -> Result<Vec<EstimateCheck>> {
    let time = problem.time;
    let space = problem.space;
    let (nt, m, k_modes) = (time.len(), space.len(), problem.modes());
    if u.modes() != k_modes || u.values().len() != k_modes * nt * m {
        return Err(Error::shape("field", k_modes * nt * m, u.values().len()));
    }
    if h.len() != nt * m {
        return Err(Error::shape("h samples", nt * m, h.len()));
    }
    let eig = problem.basis.eigenvalues();
    let xw = space.weights();
    let tw = math::trapezoid_weights(nt, time.step());
    let dx = space.step();
    let alpha = problem.alpha.value();
    let t_final = time.final_time();
    let c_eps = report.c_epsilon_upper().unwrap_or(f64::INFINITY);
    let f0_sq = report.f0 * report.f0;
    let coupling = c_eps * f0_sq * report.grad_omega_sq * report.f_omega_norm_max;
    let initial_factor = math::gamma(alpha) * math::powf(t_final, 1.0 - alpha) / 2.0;

    let tau = u.weighted_norm_sq(eig, report.two_tau).into_iter().fold(0.0, f64::max);
    let first = EstimateCheck::new("u_tau_energy", tau, 2.0 * report.a0);

    let mut grad = vec![0.0; nt];
    for k in 0..k_modes {
        let block = u.mode(k);
        for (n, g) in grad.iter_mut().enumerate() {
            let row = &block[n * m..(n + 1) * m];
            let gx: f64 = row.windows(2).map(|p| (p[1] - p[0]) * (p[1] - p[0])).sum::<f64>() / dx;
            let gy: f64 = row.iter().zip(&xw).map(|(v, w)| w * v * v).sum::<f64>();
            *g += gx + eig[k] * gy;
        }
    }
    let grad_lhs: f64 = grad.iter().zip(&tw).map(|(g, w)| g * w).sum();
    let grad_rhs = initial_factor * report.phi_norm_sq
        + 3.0 * report.a0 * t_final
        + 0.5 * t_final * report.a1
        + t_final * report.a0 * coupling;
    let second = EstimateCheck::new("gradient_energy", grad_lhs, grad_rhs);

    let mut caputo_lhs = 0.0;
    for k in 0..k_modes {
        let d = caputo_columns(u.mode(k), problem.alpha, time, m);
        for (n, tw_n) in tw.iter().enumerate() {
            let row = &d[n * m..(n + 1) * m];
            caputo_lhs += tw_n * row.iter().zip(&xw).map(|(v, w)| w * v * v).sum::<f64>();
        }
    }
    let source = f0_sq * (report.psi0 + report.g0) * (report.psi0 + report.g0);
    let forcing = (0..nt)
        .map(|n| {
            let f: f64 = problem.f_norm_sq[n * m..(n + 1) * m].iter().zip(&xw).map(|(v, w)| v * w).sum();
            let g: f64 = problem.g_norm_sq[n * m..(n + 1) * m].iter().zip(&xw).map(|(v, w)| v * w).sum();
            source * f + g
        })
        .fold(0.0, f64::max);
    let caputo_rhs = initial_factor * (report.phi_grad_x_sq + report.phi_grad_y_sq)
        + t_final * forcing
        + 2.0 * report.a0 * coupling;
    let third = EstimateCheck::new("caputo_energy", caputo_lhs, caputo_rhs);

    let h_lhs = h
        .chunks_exact(m)
        .map(|row| row.iter().zip(&xw).map(|(v, w)| w * v * v).sum::<f64>())
        .fold(0.0, f64::max);
    // |G| = 1
    let h_rhs = 4.0 * f0_sq * (report.psi0 * report.psi0 + 2.0 * report.a0 * c_eps * report.grad_omega_sq)
        + 2.0 * report.g0 * report.g0;
    let fourth = EstimateCheck::new("h_l2", h_lhs, h_rhs);

    Ok(vec![first, second, third, fourth])
}
