
use crate::forward::{caputo_columns, SampledProblem, SpectralField};
use crate::{Error, Result};

/// Largest defect of the discrete weak identity over the test pairs
/// `w_j(x)·v_k(y)`, `w_j` the hat function at interior node `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeakResidual {
    pub max_abs: f64,
    /// Largest magnitude among the individual terms, for scale.
    pub scale: f64,
}

impl WeakResidual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.max_abs / self.scale
        } else {
            self.max_abs
        }
    }
}

/// With lumped mass the pairing against `w_j v_k` reads
/// `Δx·[D^α u_k − ∂²_x u_k + λ_k u_k − g_k − f_k h](t_n, x_j)`; this is its
/// maximum over `k`, `t_1..t_{N−1}` and interior `j`.
pub fn weak_residual(u: &SpectralField, h: &[f64], problem: &SampledProblem) -> Result<WeakResidual> {
    let (nt, m, k_modes) = (problem.time.len(), problem.space.len(), problem.modes());
    if u.modes() != k_modes || u.values().len() != k_modes * nt * m {
        return Err(Error::shape("field", k_modes * nt * m, u.values().len()));
    }
    if h.len() != nt * m {
        return Err(Error::shape("h samples", nt * m, h.len()));
    }
    let dx = problem.space.step();
    let h2 = dx * dx;
    let eig = problem.basis.eigenvalues();
    let mut max_abs = 0.0_f64;
    let mut scale = 0.0_f64;
    let mut terms = [0.0; 5];
    for k in 0..k_modes {
        let uk = u.mode(k);
        let dk = caputo_columns(uk, problem.alpha, problem.time, m);
        let (fk, gk) = (problem.f_mode(k), problem.g_mode(k));
        for n in 1..nt {
            for j in 1..m - 1 {
                let i = n * m + j;
                terms[0] = dk[i];
                terms[1] = -(uk[i + 1] - 2.0 * uk[i] + uk[i - 1]) / h2;
                terms[2] = eig[k] * uk[i];
                terms[3] = -gk[i];
                terms[4] = -fk[i] * h[i];
                let r: f64 = terms.iter().sum();
                max_abs = max_abs.max(dx * r.abs());
                scale = terms.iter().fold(scale, |s, t| s.max(dx * t.abs()));
            }
        }
    }
    Ok(WeakResidual { max_abs, scale })
}
