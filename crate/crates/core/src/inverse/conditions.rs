use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::forward::SampledProblem;
use crate::fracops::mittag_leffler;
use crate::math;
use crate::spectral::{c_epsilon, tau_tail_fraction, two_tau, CEpsilon};
use crate::Result;

/// Relative mismatch between `∫φω dy` and `ψ(0,·)` tolerated as compatible.
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-6;

/// Where the computed contraction constant `κ` falls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum KappaClass {
    /// `κ ≤ 1/2`.
    Guaranteed,
    /// `1/2 < κ ≤ 1`.
    Marginal,
    /// `κ > 1`.
    Violated,
    /// `κ` could not be formed (`ε ≤ 0` or a vanishing denominator).
    Undefined,
}

impl KappaClass {
    pub fn of(kappa: Option<f64>) -> Self {
        match kappa {
            Some(k) if k <= 0.5 => Self::Guaranteed,
            Some(k) if k <= 1.0 => Self::Marginal,
            Some(k) if k.is_finite() => Self::Violated,
            _ => Self::Undefined,
        }
    }
}

/// Pass/fail of each solvability condition that can be checked on data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionFlags {
    /// `(f(t,x,·), ω)` stays above the guard everywhere.
    pub denominator: bool,
    pub epsilon_positive: bool,
    /// `κ ≤ 1`.
    pub contraction: bool,
    /// `∫φω dy = ψ(0,·)` within tolerance.
    pub compatibility: bool,
    /// `ω` vanishes on `∂Ω`.
    pub omega_boundary: bool,
}

/// Constants of the solvability theorem evaluated on sampled data.
///
/// Non-finite entries (for instance `f₀` when `(f, ω)` vanishes) serialize
/// as `null`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionsReport {
    pub alpha: f64,
    pub final_time: f64,
    pub epsilon: f64,
    pub two_tau: f64,
    /// `max |1/(f,ω)|`.
    pub f0: f64,
    /// `max |(g,ω)|`.
    pub g0: f64,
    /// `max (|D^α ψ| + |Δ_x ψ|)`.
    pub psi0: f64,
    pub c_epsilon: Option<CEpsilon>,
    /// `max(E_α(3T^α), Γ(α)E_{α,α}(3T^α))`.
    pub m: f64,
    /// `M·T^α`.
    pub m_alpha: f64,
    /// `‖∇ω‖²_{L₂(Ω)}`.
    pub grad_omega_sq: f64,
    /// `max_{t,x} ‖f(t,x,·)‖²_τ`.
    pub f_tau_max: f64,
    /// `max_t ‖f(t)‖²_{τ,G}`.
    pub f_star: f64,
    /// `max_t ‖g(t)‖²_{τ,G}`.
    pub g_star: f64,
    /// `‖φ‖²_{τ,G}`.
    pub phi_star: f64,
    /// `M_α·C_ε·f₀²·‖∇ω‖²·max_{t,x}‖f‖²_τ` with the upper bound of `C_ε`.
    pub kappa: Option<f64>,
    pub kappa_class: KappaClass,
    pub a0: f64,
    pub a1: f64,
    /// `max_x |∫φ(x,y)ω(y)dy − ψ(0,x)|`.
    pub compatibility_residual: f64,
    pub compatibility_relative: f64,
    pub phi_norm_sq: f64,
    pub phi_grad_x_sq: f64,
    pub phi_grad_y_sq: f64,
    /// `max_t ‖f(t)‖²_{L₂(D)}`.
    pub f_l2_max: f64,
    pub g_l2_max: f64,
    /// `max_{t,x} ‖f(t,x,·)‖²_{L₂(Ω)}`.
    pub f_omega_norm_max: f64,
    pub min_abs_f_omega: f64,
    pub denominator_guard: f64,
    /// Share of the `τ`-weighted energy in the top quarter of modes.
    pub f_tau_tail: f64,
    pub g_tau_tail: f64,
    pub phi_tau_tail: f64,
    pub omega_boundary_residual: f64,
    pub psi_caputo_from_l1: bool,
    pub flags: ConditionFlags,
    pub violations: Vec<String>,
}

impl ConditionsReport {
    /// Upper bound on `C_ε` (partial sum plus tail), if defined.
    pub fn c_epsilon_upper(&self) -> Option<f64> {
        self.c_epsilon.map(|c| c.upper())
    }

    /// Conditions without which the iteration is not attempted.
    pub fn hard_requirements_met(&self) -> bool {
        self.flags.denominator && self.flags.epsilon_positive && self.flags.compatibility
    }
}

/// Default guard for `|(f, ω)|`: `1e−8 · max_{t,x} ‖f(t,x,·)‖·‖ω‖`, the
/// Cauchy–Schwarz scale of the pairing.
pub fn default_denominator_guard(problem: &SampledProblem) -> f64 {
    let f_norm_sq = problem.f_norm_sq.iter().fold(0.0_f64, |m, v| m.max(*v));
    1e-8 * math::sqrt(f_norm_sq * problem.omega_norm_sq)
}

/// Evaluate every constant of the solvability theorem on sampled data.
pub fn check_conditions(
    problem: &SampledProblem,
    epsilon: f64,
    guard: Option<f64>,
) -> Result<ConditionsReport> {
    let alpha = problem.alpha.value();
    let t_final = problem.time.final_time();
    let nt = problem.time.len();
    let m = problem.space.len();
    let k_modes = problem.modes();
    let n_dim = problem.basis.domain().dimension();
    let s = two_tau(n_dim, epsilon);
    let eig = problem.basis.eigenvalues();
    let xw = problem.space.weights();

    let min_abs_f_omega = problem.f_omega.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    let guard = guard.unwrap_or_else(|| default_denominator_guard(problem));
    let f0 = 1.0 / min_abs_f_omega;
    let g0 = max_abs(&problem.g_omega);
    let psi0 = problem
        .psi_caputo
        .iter()
        .zip(&problem.psi_laplacian)
        .fold(0.0_f64, |a, (d, l)| a.max(d.abs() + l.abs()));

    let c_eps = c_epsilon(problem.basis.spectrum(), epsilon).ok();

    let z = 3.0 * math::powf(t_final, alpha);
    let m_const = mittag_leffler(alpha, 1.0, z)?
        .max(math::gamma(alpha) * mittag_leffler(alpha, alpha, z)?);
    let m_alpha = m_const * math::powf(t_final, alpha);

    let powers: Vec<f64> = eig.iter().map(|l| math::powf(*l, s)).collect();
    let tail_from = k_modes - k_modes / 4;
    let mut f_tau_max = 0.0_f64;
    let mut f_star = 0.0_f64;
    let mut g_star = 0.0_f64;
    let mut f_tail = 0.0_f64;
    let mut g_tail = 0.0_f64;
    let mut fk = alloc::vec![0.0; k_modes];
    let mut gk = alloc::vec![0.0; k_modes];
    for n in 0..nt {
        let mut f_g = 0.0;
        let mut g_g = 0.0;
        for j in 0..m {
            for k in 0..k_modes {
                fk[k] = problem.f_mode(k)[n * m + j];
                gk[k] = problem.g_mode(k)[n * m + j];
            }
            let fn_ = fk.iter().zip(&powers).map(|(c, p)| p * c * c).sum::<f64>();
            let gn = gk.iter().zip(&powers).map(|(c, p)| p * c * c).sum::<f64>();
            f_tau_max = f_tau_max.max(fn_);
            f_g += xw[j] * fn_;
            g_g += xw[j] * gn;
            f_tail = f_tail.max(tau_tail_fraction(&fk, eig, s, tail_from));
            g_tail = g_tail.max(tau_tail_fraction(&gk, eig, s, tail_from));
        }
        f_star = f_star.max(f_g);
        g_star = g_star.max(g_g);
    }
    let mut phi_star = 0.0;
    let mut phi_tail = 0.0_f64;
    for j in 0..m {
        for (k, c) in fk.iter_mut().enumerate() {
            *c = problem.phi_mode(k)[j];
        }
        phi_star += xw[j] * fk.iter().zip(&powers).map(|(c, p)| p * c * c).sum::<f64>();
        phi_tail = phi_tail.max(tau_tail_fraction(&fk, eig, s, tail_from));
    }

    let grad_omega_sq = problem.omega.grad_norm_sq;
    let kappa = c_eps
        .filter(|_| f0.is_finite())
        .map(|c| m_alpha * c.upper() * f0 * f0 * grad_omega_sq * f_tau_max);
    let kappa_class = KappaClass::of(kappa);

    let source = f0 * f0 * (psi0 + g0) * (psi0 + g0);
    let a0 = m_const * phi_star + m_alpha * source * f_star + m_alpha * g_star;
    let time_max = |a: &[f64]| -> f64 {
        (0..nt)
            .map(|n| {
                a[n * m..(n + 1) * m]
                    .iter()
                    .zip(&xw)
                    .map(|(v, w)| v * w)
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    };
    let f_l2_max = time_max(&problem.f_norm_sq);
    let g_l2_max = time_max(&problem.g_norm_sq);
    let a1 = source * f_l2_max + g_l2_max;

    let mut compat = 0.0_f64;
    let mut compat_scale = 0.0_f64;
    for j in 0..m {
        compat = compat.max((problem.phi_omega[j] - problem.psi[j]).abs());
        compat_scale = compat_scale
            .max(problem.phi_omega[j].abs())
            .max(problem.psi[j].abs());
    }
    let compat_rel = if compat_scale > 0.0 { compat / compat_scale } else { 0.0 };

    let flags = ConditionFlags {
        denominator: min_abs_f_omega > guard,
        epsilon_positive: epsilon.is_finite() && epsilon > 0.0,
        contraction: kappa.is_some_and(|k| k <= 1.0),
        compatibility: compat_rel <= COMPATIBILITY_TOLERANCE,
        omega_boundary: !problem.omega.boundary_warning,
    };
    let mut violations = Vec::new();
    if !flags.denominator {
        violations.push(format!(
            "condition 1: min |(f, omega)| = {min_abs_f_omega:e} is not above the guard {guard:e}"
        ));
    }
    if !flags.epsilon_positive {
        violations.push(format!(
            "epsilon = {epsilon} must be positive: the C_eps series diverges"
        ));
    }
    if !flags.contraction {
        match kappa {
            Some(k) => violations.push(format!("condition 4: kappa = {k:e} exceeds 1")),
            None => violations.push(String::from("condition 4: kappa is undefined")),
        }
    }
    if !flags.compatibility {
        violations.push(format!(
            "condition 7: |int phi omega dy - psi(0, .)| = {compat:e} (relative {compat_rel:e})"
        ));
    }
    if !flags.omega_boundary {
        violations.push(format!(
            "condition 7: omega does not vanish on the boundary (relative {:e})",
            problem.omega.boundary_residual
        ));
    }

    Ok(ConditionsReport {
        alpha,
        final_time: t_final,
        epsilon,
        two_tau: s,
        f0,
        g0,
        psi0,
        c_epsilon: c_eps,
        m: m_const,
        m_alpha,
        grad_omega_sq,
        f_tau_max,
        f_star,
        g_star,
        phi_star,
        kappa,
        kappa_class,
        a0,
        a1,
        compatibility_residual: compat,
        compatibility_relative: compat_rel,
        phi_norm_sq: problem.phi_norm_sq,
        phi_grad_x_sq: problem.phi_grad_x_sq,
        phi_grad_y_sq: problem.phi_grad_y_sq,
        f_l2_max,
        g_l2_max,
        f_omega_norm_max: max_abs(&problem.f_norm_sq),
        min_abs_f_omega,
        denominator_guard: guard,
        f_tau_tail: f_tail,
        g_tau_tail: g_tail,
        phi_tau_tail: phi_tail,
        omega_boundary_residual: problem.omega.boundary_residual,
        psi_caputo_from_l1: problem.psi_caputo_from_l1,
        flags,
        violations,
    })
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}
