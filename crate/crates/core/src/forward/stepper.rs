use alloc::vec;
use alloc::vec::Vec;

use super::XGrid;
use crate::fracops::{l1_scale, l1_weights, FractionalOrder, TimeGrid};
use crate::{Error, Result};

/// Implicit L1 / central-difference integrator for a single mode.
///
/// Each step solves `(c + λ − D_xx) u^n = r^n + c·u^{n−1} − c·Σ_{m≥1} b_m Δu^{n−m}`
/// with `c = Δt^{−α}/Γ(2−α)` and Dirichlet ends; the tridiagonal matrix is
/// constant and factored once.
#[derive(Debug, Clone)]
pub struct ModeStepper {
    time: TimeGrid,
    space: XGrid,
    classical: bool,
    scale: f64,
    weights: Vec<f64>,
    off: f64,
    // Thomas factors for the interior unknowns
    upper: Vec<f64>,
    pivot_inv: Vec<f64>,
}

impl ModeStepper {
    pub fn new(alpha: FractionalOrder, time: TimeGrid, space: XGrid, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain("lambda", lambda, "lambda > 0"));
        }
        let scale = l1_scale(alpha, time.step());
        let h2 = space.step() * space.step();
        let diag = scale + lambda + 2.0 / h2;
        let off = -1.0 / h2;
        let interior = space.len() - 2;
        let mut upper = vec![0.0; interior];
        let mut pivot_inv = vec![0.0; interior];
        let mut prev_upper = 0.0;
        for i in 0..interior {
            let pivot = diag - off * prev_upper;
            if !(pivot.is_finite() && pivot > 0.0) {
                return Err(Error::SingularSystem);
            }
            pivot_inv[i] = 1.0 / pivot;
            upper[i] = off / pivot;
            prev_upper = upper[i];
        }
        Ok(Self {
            time,
            space,
            classical: alpha.is_classical(),
            scale,
            weights: l1_weights(alpha, time.len()),
            off,
            upper,
            pivot_inv,
        })
    }

    /// Integrate from `initial` (length `M`) with forcing `rhs` (`N × M`)
    /// into `out` (`N × M`). Boundary entries of `initial` and `rhs` are
    /// ignored; the solution is zero there.
    pub fn solve(&self, rhs: &[f64], initial: &[f64], out: &mut [f64]) -> Result<()> {
        let n_t = self.time.len();
        let m = self.space.len();
        if rhs.len() != n_t * m {
            return Err(Error::shape("mode right-hand side", n_t * m, rhs.len()));
        }
        if initial.len() != m {
            return Err(Error::shape("mode initial data", m, initial.len()));
        }
        if out.len() != n_t * m {
            return Err(Error::shape("mode output", n_t * m, out.len()));
        }
        out[..m].copy_from_slice(initial);
        out[0] = 0.0;
        out[m - 1] = 0.0;
        // increments Δu^n = u^n − u^{n−1}, row n−1 holds step n
        let mut incr = vec![0.0; if self.classical { 0 } else { (n_t - 1) * m }];
        let mut b = vec![0.0; m];
        for n in 1..n_t {
            let (done, rest) = out.split_at_mut(n * m);
            let prev = &done[(n - 1) * m..];
            let cur = &mut rest[..m];
            for j in 1..m - 1 {
                b[j] = rhs[n * m + j] + self.scale * prev[j];
            }
            if !self.classical {
                for step in 1..n {
                    let w = self.scale * self.weights[step];
                    let d = &incr[(n - step - 1) * m..(n - step) * m];
                    for j in 1..m - 1 {
                        b[j] -= w * d[j];
                    }
                }
            }
            self.tridiagonal(&b, cur);
            if !self.classical {
                let d = &mut incr[(n - 1) * m..n * m];
                for j in 0..m {
                    d[j] = cur[j] - prev[j];
                }
            }
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mode solve"));
        }
        Ok(())
    }

    fn tridiagonal(&self, b: &[f64], x: &mut [f64]) {
        let m = x.len();
        let interior = m - 2;
        x[0] = 0.0;
        x[m - 1] = 0.0;
        let mut prev = 0.0;
        for i in 0..interior {
            let v = (b[i + 1] - self.off * prev) * self.pivot_inv[i];
            x[i + 1] = v;
            prev = v;
        }
        for i in (0..interior.saturating_sub(1)).rev() {
            x[i + 1] -= self.upper[i] * x[i + 2];
        }
    }
}

/// Solve `D^α u − ∂²_x u + λ u = r`, `u(0,·) = φ`, for one mode.
pub fn solve_mode(
    lambda: f64,
    rhs: &[f64],
    initial: &[f64],
    alpha: FractionalOrder,
    time: TimeGrid,
    space: XGrid,
) -> Result<Vec<f64>> {
    let stepper = ModeStepper::new(alpha, time, space, lambda)?;
    let mut out = vec![0.0; time.len() * space.len()];
    stepper.solve(rhs, initial, &mut out)?;
    Ok(out)
}
