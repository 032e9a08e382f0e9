use alloc::vec;
use alloc::vec::Vec;

use super::{EigenBasis, Spectrum};
use crate::math::{self, CompensatedSum};
use crate::{Error, Result};

/// `Σ_k λ_k^{−n/2−ε}` split into the computed partial sum and bounds on the
/// tail beyond `K`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CEpsilon {
    pub partial: f64,
    pub tail_lower: f64,
    pub tail_upper: f64,
}

impl CEpsilon {
    /// Guaranteed upper bound on the full series.
    pub fn upper(&self) -> f64 {
        self.partial + self.tail_upper
    }

    pub fn lower(&self) -> f64 {
        self.partial + self.tail_lower
    }
}

/// The series `C_ε = Σ λ_k^{−n/2−ε}` over the spectrum plus tail bounds.
///
/// On an interval the tail is bracketed by integral comparison of
/// `Σ_{k>K} k^{−1−2ε}`. On boxes the upper bound uses the Li–Yau inequality
/// `λ_k ≥ c·k^{2/n}` and the lower bound is 0.
pub fn c_epsilon(spectrum: &Spectrum, epsilon: f64) -> Result<CEpsilon> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::SeriesDivergence { epsilon });
    }
    let domain = spectrum.domain();
    let n = domain.dimension() as f64;
    let a = n / 2.0 + epsilon;
    let mut s = CompensatedSum::new();
    for lam in spectrum.eigenvalues().iter().rev() {
        s.add(math::powf(*lam, -a));
    }
    let k = spectrum.len() as f64;
    let (tail_lower, tail_upper) = if domain.dimension() == 1 {
        let c = math::powf(domain.lengths()[0] / math::PI, 2.0 * a);
        let p = 2.0 * a - 1.0;
        (
            c * math::powf(k + 1.0, -p) / p,
            c * math::powf(k, -p) / p,
        )
    } else {
        let c = domain.li_yau_constant();
        (
            0.0,
            math::powf(c, -a) * math::powf(k, -2.0 * epsilon / n) * n / (2.0 * epsilon),
        )
    };
    Ok(CEpsilon {
        partial: s.value(),
        tail_lower,
        tail_upper,
    })
}

/// `2τ = n/2 + 1 + ε`.
#[inline]
pub fn two_tau(dimension: usize, epsilon: f64) -> f64 {
    dimension as f64 / 2.0 + 1.0 + epsilon
}

/// `Σ λ_k^{s} p_k²`.
pub fn weighted_norm_sq(coeffs: &[f64], eigenvalues: &[f64], s: f64) -> f64 {
    coeffs
        .iter()
        .zip(eigenvalues)
        .map(|(p, lam)| math::powf(*lam, s) * p * p)
        .sum()
}

/// `‖p‖²_τ = Σ λ_k^{2τ} p_k²` with `2τ = n/2 + 1 + ε`.
pub fn tau_norm_sq(coeffs: &[f64], spectrum: &Spectrum, epsilon: f64) -> Result<f64> {
    if coeffs.len() > spectrum.len() {
        return Err(Error::shape("coefficients", spectrum.len(), coeffs.len()));
    }
    Ok(weighted_norm_sq(
        coeffs,
        spectrum.eigenvalues(),
        two_tau(spectrum.domain().dimension(), epsilon),
    ))
}

/// `‖p‖²_{τ,G} = ∫_G Σ λ_k^{s} p_k(x)² dx` for coefficients stored row-wise
/// per x-node (`coeffs.len() = weights.len()·K`).
pub fn tau_norm_sq_over(coeffs: &[f64], weights: &[f64], eigenvalues: &[f64], s: f64) -> f64 {
    let k = eigenvalues.len();
    let powers: Vec<f64> = eigenvalues.iter().map(|l| math::powf(*l, s)).collect();
    coeffs
        .chunks_exact(k)
        .zip(weights)
        .map(|(row, w)| w * row.iter().zip(&powers).map(|(p, l)| l * p * p).sum::<f64>())
        .sum()
}

/// Share of `Σ λ_k^{s} p_k²` carried by modes `k ≥ from`. A value that stays
/// small under increasing `K` indicates membership in `D(A^{s/2})`.
pub fn tau_tail_fraction(coeffs: &[f64], eigenvalues: &[f64], s: f64, from: usize) -> f64 {
    let total = weighted_norm_sq(coeffs, eigenvalues, s);
    if total == 0.0 {
        return 0.0;
    }
    let from = from.min(coeffs.len());
    weighted_norm_sq(&coeffs[from..], &eigenvalues[from..], s) / total
}

/// Coupling coefficients `γ_k = (∇v_k, ∇ω) = λ_k (v_k, ω)` and `‖∇ω‖²`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradientPairing {
    pub omega_coeffs: Vec<f64>,
    pub gamma: Vec<f64>,
    pub grad_norm_sq: f64,
    /// Largest `|ω|` on `∂Ω` relative to `max |ω|`.
    pub boundary_residual: f64,
    /// `ω` does not vanish on `∂Ω` within `1e−8`.
    pub boundary_warning: bool,
}

const BOUNDARY_TOLERANCE: f64 = 1e-8;

/// Gradient pairing for a weight `ω` given as a function of `y`.
///
/// `‖∇ω‖²` is the quadrature of a fourth-order central-difference gradient.
pub fn gradient_pairing<F: Fn(&[f64]) -> f64>(basis: &EigenBasis, omega: F) -> Result<GradientPairing> {
    let samples = basis.sample(&omega);
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("omega"));
    }
    let mut omega_coeffs = vec![0.0; basis.len()];
    basis.project_into(&samples, &mut omega_coeffs);
    let gamma = omega_coeffs
        .iter()
        .zip(basis.eigenvalues())
        .map(|(c, l)| c * l)
        .collect();

    let domain = basis.domain();
    let n = domain.dimension();
    let mut grad_sq = vec![0.0; basis.quadrature_len()];
    let mut y = vec![0.0; n];
    for (g, p) in grad_sq.iter_mut().zip(basis.points()) {
        for a in 0..n {
            let h = 1e-3 * domain.lengths()[a];
            y.copy_from_slice(p);
            let mut at = |d: f64| {
                y[a] = p[a] + d;
                omega(&y)
            };
            let d = (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
            *g += d * d;
        }
    }
    let ones = vec![1.0; basis.quadrature_len()];
    let grad_norm_sq = basis.inner(&grad_sq, &ones);

    let scale = samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut boundary = 0.0_f64;
    for (s, p) in samples.iter().zip(basis.points()) {
        let on_boundary = p
            .iter()
            .zip(domain.lengths())
            .any(|(c, l)| *c == 0.0 || *c == *l);
        if on_boundary {
            boundary = boundary.max(s.abs());
        }
    }
    let boundary_residual = if scale > 0.0 { boundary / scale } else { 0.0 };
    Ok(GradientPairing {
        omega_coeffs,
        gamma,
        grad_norm_sq,
        boundary_residual,
        boundary_warning: boundary_residual > BOUNDARY_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dirichlet_eigenpairs, YDomain};
    use crate::math::PI;
    use approx::assert_relative_eq;

    fn unit_interval_pi(k: usize) -> EigenBasis {
        dirichlet_eigenpairs(&YDomain::interval(PI).unwrap(), k).unwrap()
    }

    #[test]
    fn basel_sum_with_tail() {
        let s = Spectrum::new(&YDomain::interval(PI).unwrap(), 1000).unwrap();
        let c = c_epsilon(&s, 0.5).unwrap();
        let zeta2 = PI * PI / 6.0;
        assert!(c.lower() <= zeta2 && zeta2 <= c.upper(), "{c:?}");
        assert!(c.tail_upper <= 1.0 / 1000.0 + 1e-15);
        let c4 = c_epsilon(&s, 1.5).unwrap();
        let zeta4 = PI.powi(4) / 90.0;
        assert!(c4.lower() <= zeta4 && zeta4 <= c4.upper());
        assert_relative_eq!(c4.partial, 1.082_323, epsilon = 1e-6);
    }

    #[test]
    fn nonpositive_epsilon_diverges() {
        let s = Spectrum::new(&YDomain::interval(PI).unwrap(), 10).unwrap();
        for eps in [0.0, -0.1, f64::NAN] {
            assert!(matches!(c_epsilon(&s, eps), Err(Error::SeriesDivergence { .. })));
        }
    }

    #[test]
    fn partial_sums_grow_and_stay_bracketed() {
        for domain in [
            YDomain::interval(1.3).unwrap(),
            YDomain::cuboid(vec![1.0, 2.0]).unwrap(),
            YDomain::cuboid(vec![1.0, 1.0, 1.0]).unwrap(),
        ] {
            let big = Spectrum::new(&domain, 3000).unwrap();
            let limit = c_epsilon(&big, 0.5).unwrap().partial;
            let mut prev = 0.0;
            for k in [1, 2, 5, 10, 50, 200, 1000] {
                let c = c_epsilon(&Spectrum::new(&domain, k).unwrap(), 0.5).unwrap();
                assert!(c.partial > prev);
                assert!(c.upper() >= limit, "K={k}: {c:?} vs {limit}");
                prev = c.partial;
            }
        }
    }

    #[test]
    fn tau_norm_examples() {
        let b = unit_interval_pi(4);
        let s = b.spectrum();
        assert_relative_eq!(two_tau(1, 0.5), 2.0);
        for eps in [0.1, 0.5, 3.0] {
            assert_relative_eq!(tau_norm_sq(&[1.0, 0.0, 0.0], s, eps).unwrap(), 1.0);
        }
        assert_relative_eq!(tau_norm_sq(&[0.0, 1.0], s, 0.5).unwrap(), 16.0, max_relative = 1e-14);
        assert_eq!(tau_norm_sq(&[0.0; 4], s, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn tau_norm_over_g_uses_x_weights() {
        let b = unit_interval_pi(2);
        let w = [0.25, 0.5, 0.25];
        // rows: p(x_j) = (1, 1) everywhere
        let c = [1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        let v = tau_norm_sq_over(&c, &w, b.eigenvalues(), 2.0);
        assert_relative_eq!(v, 17.0, max_relative = 1e-14);
    }

    #[test]
    fn tail_fraction() {
        let lam = [1.0, 4.0, 9.0];
        assert_eq!(tau_tail_fraction(&[0.0; 3], &lam, 2.0, 1), 0.0);
        assert_relative_eq!(tau_tail_fraction(&[1.0, 0.0, 1.0], &lam, 1.0, 2), 0.9);
    }

    #[test]
    fn sine_weight_pairs_with_first_mode() {
        let b = unit_interval_pi(6);
        let g = gradient_pairing(&b, |y| math::sin(y[0])).unwrap();
        assert_relative_eq!(g.gamma[0], math::sqrt(PI / 2.0), epsilon = 1e-12);
        assert!(g.gamma[1..].iter().all(|x| x.abs() < 1e-12));
        assert_relative_eq!(g.grad_norm_sq, PI / 2.0, max_relative = 1e-9);
        assert!(!g.boundary_warning);
    }

    #[test]
    fn pairing_matches_direct_gradient_quadrature() {
        let b = EigenBasis::new(&YDomain::interval(PI).unwrap(), 8, 513).unwrap();
        let omega = |y: f64| y * (PI - y) * math::exp(0.3 * y);
        let domega = |y: f64| ((PI - 2.0 * y) + 0.3 * y * (PI - y)) * math::exp(0.3 * y);
        let g = gradient_pairing(&b, |y| omega(y[0])).unwrap();
        let slope: Vec<f64> = b.points().map(|y| domega(y[0])).collect();
        for k in 0..b.len() {
            let j = b.spectrum().multi_index(k)[0] as f64;
            let dv: Vec<f64> = b
                .points()
                .map(|y| math::sqrt(2.0 / PI) * j * math::cos(j * y[0]))
                .collect();
            assert!((b.inner(&dv, &slope) - g.gamma[k]).abs() <= 1e-6, "k={k}");
        }
        let ones = vec![1.0; b.quadrature_len()];
        let sq: Vec<f64> = slope.iter().map(|s| s * s).collect();
        assert_relative_eq!(g.grad_norm_sq, b.inner(&sq, &ones), max_relative = 1e-9);
    }

    #[test]
    fn incompatible_weight_is_flagged() {
        let b = unit_interval_pi(4);
        let g = gradient_pairing(&b, |y| 1.0 + y[0]).unwrap();
        assert!(g.boundary_warning);
    }

    #[test]
    fn gradient_energy_and_orthogonality_of_modes() {
        for domain in [YDomain::interval(2.0).unwrap(), YDomain::cuboid(vec![1.0, 1.5]).unwrap()] {
            let b = dirichlet_eigenpairs(&domain, 6).unwrap();
            let n = domain.dimension();
            // analytic gradients of the tensor sines
            let grad = |k: usize, y: &[f64]| -> Vec<f64> {
                let idx = b.spectrum().multi_index(k);
                (0..n)
                    .map(|a| {
                        (0..n)
                            .map(|c| {
                                let l = domain.lengths()[c];
                                let w = idx[c] as f64 * PI / l;
                                let amp = math::sqrt(2.0 / l);
                                if c == a {
                                    amp * w * math::cos(w * y[c])
                                } else {
                                    amp * math::sin(w * y[c])
                                }
                            })
                            .product()
                    })
                    .collect()
            };
            for i in 0..b.len() {
                for j in 0..b.len() {
                    let pair: Vec<f64> = b
                        .points()
                        .map(|y| grad(i, y).iter().zip(grad(j, y)).map(|(p, q)| p * q).sum())
                        .collect();
                    let ones = vec![1.0; pair.len()];
                    let want = if i == j { b.eigenvalues()[i] } else { 0.0 };
                    assert!((b.inner(&pair, &ones) - want).abs() <= 1e-6, "({i},{j})");
                }
            }
        }
    }
}
