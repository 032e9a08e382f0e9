//! Recovery of the source factor `h(t, x)` from the integral measurement
//! `ψ(t, x) = ∫_Ω u ω dy` by successive approximations.
//!
//! Pairing the equation with `ω` and using `(Δ_y u, ω) = −Σ_j λ_j ω_j u_j`
//! gives
//!
//! ```text
//! h = [D^α ψ − ∂²_x ψ − (g, ω) + Σ_j λ_j ω_j u_j] / (f, ω),
//! ```
//!
//! which couples every mode. Iterate `i` solves each mode with `h` built from
//! iterate `i − 1`, starting from `u⁰ = 0`.

mod conditions;

pub use conditions::{
    check_conditions, default_denominator_guard, ConditionFlags, ConditionsReport, KappaClass,
    COMPATIBILITY_TOLERANCE,
};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::forward::{forward_solve, ProblemData, SampledProblem, SpectralField};
use crate::spectral::{dirichlet_eigenpairs, two_tau};
use crate::{Error, Result};

/// Ratios above one in a row that count as divergence.
const DIVERGENCE_RUN: usize = 3;

/// Truncation and stopping parameters of the inverse solve.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    /// Number of eigenmodes `K`.
    pub modes: usize,
    /// Regularity parameter `ε` of the `τ`-norm.
    pub epsilon: f64,
    pub max_iters: usize,
    /// Stop once `W_i / W_1` falls to this value.
    pub tol_rel: f64,
    /// Floor for `|(f, ω)|`; [`default_denominator_guard`] when `None`.
    pub denominator_guard: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            modes: 16,
            epsilon: 0.5,
            max_iters: 50,
            tol_rel: 1e-8,
            denominator_guard: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::domain("modes", 0.0, "K >= 1"));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::SeriesDivergence {
                epsilon: self.epsilon,
            });
        }
        if self.max_iters == 0 {
            return Err(Error::domain("max_iters", 0.0, "max_iters >= 1"));
        }
        if !(self.tol_rel.is_finite() && self.tol_rel > 0.0) {
            return Err(Error::domain("tol_rel", self.tol_rel, "tol_rel > 0"));
        }
        if let Some(d) = self.denominator_guard {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::domain("denominator_guard", d, "guard > 0"));
            }
        }
        Ok(())
    }
}

/// One iterate of the successive approximations.
#[derive(Debug, Clone)]
pub struct IterationState {
    pub index: usize,
    pub current: SpectralField,
    pub previous: SpectralField,
    /// `max_t Σ_k λ_k^{2τ} ‖u_k^i − u_k^{i−1}‖²_{L₂(G)}`.
    pub w: f64,
    /// `h` that produced `current` (`N × M`).
    pub h: Vec<f64>,
}

impl IterationState {
    /// `u⁰ ≡ 0`.
    pub fn initial(problem: &SampledProblem) -> Self {
        let zero = SpectralField::zeros(problem.time, problem.space, problem.modes());
        Self {
            index: 0,
            current: zero.clone(),
            previous: zero,
            w: 0.0,
            h: alloc::vec![0.0; problem.time.len() * problem.space.len()],
        }
    }
}

/// Evaluate `h` at every `(t_n, x_j)` from the mode coefficients of `u`.
///
/// Fails when `|(f, ω)| ≤ guard` at some node.
pub fn reconstruct_h(problem: &SampledProblem, u: &SpectralField, guard: f64) -> Result<Vec<f64>> {
    let m = problem.space.len();
    let size = problem.time.len() * m;
    if u.modes() != problem.modes() || u.values().len() != size * problem.modes() {
        return Err(Error::shape(
            "field for h reconstruction",
            size * problem.modes(),
            u.values().len(),
        ));
    }
    let coupling = u.contract(&problem.omega.gamma);
    let mut h = Vec::with_capacity(size);
    for i in 0..size {
        let den = problem.f_omega[i];
        if !(den.abs() > guard) {
            return Err(Error::DenominatorDegenerate {
                t: problem.time.node(i / m),
                x: problem.space.node(i % m),
                value: den,
                guard,
            });
        }
        let num = problem.psi_caputo[i] - problem.psi_laplacian[i] - problem.g_omega[i] + coupling[i];
        h.push(num / den);
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::IterationDivergence {
            ratios: Vec::new(),
        });
    }
    Ok(h)
}

/// `u^{i+1}` from `u^i`: rebuild `h`, then solve every mode with `g_k + f_k h`.
pub fn picard_step(state: &IterationState, problem: &SampledProblem, guard: f64, s: f64) -> Result<IterationState> {
    let h = reconstruct_h(problem, &state.current, guard)?;
    let next = match forward_solve(&h, problem) {
        Err(Error::NonFinite(_)) => {
            return Err(Error::IterationDivergence {
                ratios: Vec::new(),
            })
        }
        other => other?,
    };
    let w = next
        .weighted_diff_norm_sq(Some(&state.current), problem.basis.eigenvalues(), s)
        .into_iter()
        .fold(0.0, f64::max);
    if !w.is_finite() {
        return Err(Error::IterationDivergence {
            ratios: Vec::new(),
        });
    }
    Ok(IterationState {
        index: state.index + 1,
        previous: state.current.clone(),
        current: next,
        w,
        h,
    })
}

/// Iteration history and the solvability report of one inverse solve.
#[derive(Debug, Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Diagnostics {
    pub iterations: usize,
    /// `W_1, …, W_I`.
    pub w_history: Vec<f64>,
    /// `W_{i+1} / W_i`.
    pub ratios: Vec<f64>,
    pub report: ConditionsReport,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct InverseSolution {
    pub u: SpectralField,
    /// `h(t_n, x_j)`, `N × M`.
    pub h: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// Sample `data` on `config.modes` eigenmodes and solve.
pub fn inverse_solve(data: &ProblemData, config: &SolverConfig) -> Result<InverseSolution> {
    config.validate()?;
    let basis = dirichlet_eigenpairs(&data.domain, config.modes)?;
    let problem = SampledProblem::new(data, basis)?;
    inverse_solve_sampled(&problem, config)
}

/// Solve on an already sampled problem; `config.modes` is taken from its basis.
pub fn inverse_solve_sampled(problem: &SampledProblem, config: &SolverConfig) -> Result<InverseSolution> {
    config.validate()?;
    let report = check_conditions(problem, config.epsilon, config.denominator_guard)?;
    let guard = report.denominator_guard;
    if !report.flags.denominator {
        // reconstruct_h names the offending node
        reconstruct_h(problem, &SpectralField::zeros(problem.time, problem.space, problem.modes()), guard)?;
    }
    if !report.flags.compatibility {
        return Err(Error::ConditionViolation(format!(
            "compatibility of phi and psi(0, .) fails: residual {:e} (relative {:e})",
            report.compatibility_residual, report.compatibility_relative
        )));
    }
    let mut warnings = Vec::new();
    match report.kappa_class {
        KappaClass::Guaranteed => {}
        KappaClass::Marginal => warnings.push(format!(
            "kappa = {:e} lies in (1/2, 1]: contraction is not guaranteed",
            report.kappa.unwrap_or(f64::NAN)
        )),
        KappaClass::Violated => warnings.push(format!(
            "kappa = {:e} exceeds 1: the contraction condition is violated",
            report.kappa.unwrap_or(f64::NAN)
        )),
        KappaClass::Undefined => warnings.push(String::from("kappa is undefined")),
    }
    if !report.flags.omega_boundary {
        warnings.push(format!(
            "omega does not vanish on the boundary (relative {:e})",
            report.omega_boundary_residual
        ));
    }

    let s = two_tau(problem.basis.domain().dimension(), config.epsilon);
    let mut state = IterationState::initial(problem);
    let mut w_history: Vec<f64> = Vec::new();
    let mut ratios: Vec<f64> = Vec::new();
    let mut above_one = 0;
    loop {
        state = match picard_step(&state, problem, guard, s) {
            Err(Error::IterationDivergence { .. }) => {
                return Err(Error::IterationDivergence { ratios });
            }
            other => other?,
        };
        if let Some(prev) = w_history.last() {
            let r = if *prev > 0.0 { state.w / prev } else { f64::INFINITY };
            ratios.push(r);
            above_one = if r > 1.0 { above_one + 1 } else { 0 };
        }
        w_history.push(state.w);
        let w1 = w_history[0];
        if w1 == 0.0 || state.w <= config.tol_rel * w1 {
            break;
        }
        if above_one >= DIVERGENCE_RUN {
            return Err(Error::IterationDivergence { ratios });
        }
        if state.index >= config.max_iters {
            return Err(Error::NoConvergence {
                iterations: state.index,
                last_w: state.w,
            });
        }
    }
    let h = reconstruct_h(problem, &state.current, guard)?;
    Ok(InverseSolution {
        u: state.current,
        h,
        diagnostics: Diagnostics {
            iterations: state.index,
            w_history,
            ratios,
            report,
            warnings,
        },
    })
}
