//! Forward problem for known `h`: one time-fractional reaction–diffusion
//! equation in `x` per eigenmode of `Ω`,
//!
//! ```text
//! D_t^α u_k − ∂²_x u_k + λ_k u_k = g_k + f_k·h,   u_k(0,·) = φ_k,
//! ```
//!
//! discretized by implicit L1 stepping in `t` and central differences in `x`.

mod sampled;
mod stepper;

pub use sampled::{FieldFn, InitialFn, ProblemData, SampledProblem, SurfaceFn, WeightFn};
pub(crate) use sampled::caputo_columns;
pub use stepper::{solve_mode, ModeStepper};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::fracops::TimeGrid;
use crate::math;
use crate::parallel;
use crate::{Error, Result};

/// Uniform grid on `G = (0, 1)` including both Dirichlet end points.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XGrid {
    nodes: usize,
}

impl XGrid {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 3 {
            return Err(Error::InvalidGrid(format!(
                "x grid needs at least 3 nodes, got {nodes}"
            )));
        }
        Ok(Self { nodes })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn step(&self) -> f64 {
        1.0 / (self.nodes - 1) as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        if j + 1 == self.nodes {
            1.0
        } else {
            j as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes).map(move |j| self.node(j))
    }

    /// Trapezoid weights for `∫_G · dx`.
    pub fn weights(&self) -> Vec<f64> {
        math::trapezoid_weights(self.nodes, self.step())
    }

    pub fn coarsened(&self) -> Option<Self> {
        ((self.nodes - 1) % 2 == 0 && self.nodes >= 5).then(|| Self {
            nodes: (self.nodes - 1) / 2 + 1,
        })
    }
}

/// Mode coefficients `u_k(t_n, x_j)` stored mode-major: index
/// `(k·N + n)·M + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    time: TimeGrid,
    space: XGrid,
    modes: usize,
    values: Vec<f64>,
}

impl SpectralField {
    pub fn zeros(time: TimeGrid, space: XGrid, modes: usize) -> Self {
        Self {
            time,
            space,
            modes,
            values: vec![0.0; modes * time.len() * space.len()],
        }
    }

    pub fn from_values(time: TimeGrid, space: XGrid, modes: usize, values: Vec<f64>) -> Result<Self> {
        let expected = modes * time.len() * space.len();
        if values.len() != expected {
            return Err(Error::shape("spectral field", expected, values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("spectral field"));
        }
        Ok(Self {
            time,
            space,
            modes,
            values,
        })
    }

    /// Field whose mode `k` is `coeff(k, t, x)`.
    pub fn from_fn<F: FnMut(usize, f64, f64) -> f64>(
        time: TimeGrid,
        space: XGrid,
        modes: usize,
        mut coeff: F,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(modes * time.len() * space.len());
        for k in 0..modes {
            for t in time.nodes() {
                for x in space.nodes() {
                    values.push(coeff(k, t, x));
                }
            }
        }
        Self::from_values(time, space, modes, values)
    }

    #[inline]
    pub fn time(&self) -> TimeGrid {
        self.time
    }

    #[inline]
    pub fn space(&self) -> XGrid {
        self.space
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.modes
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    fn block(&self) -> usize {
        self.time.len() * self.space.len()
    }

    /// Trajectory of mode `k` as an `N × M` row-major block.
    #[inline]
    pub fn mode(&self, k: usize) -> &[f64] {
        let b = self.block();
        &self.values[k * b..(k + 1) * b]
    }

    #[inline]
    pub fn mode_mut(&mut self, k: usize) -> &mut [f64] {
        let b = self.block();
        &mut self.values[k * b..(k + 1) * b]
    }

    #[inline]
    pub fn get(&self, k: usize, n: usize, j: usize) -> f64 {
        self.values[(k * self.time.len() + n) * self.space.len() + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `Σ_k w_k u_k(t_n, x_j)` at every node (`N × M`).
    pub fn contract(&self, weights: &[f64]) -> Vec<f64> {
        let b = self.block();
        let mut out = vec![0.0; b];
        for (k, w) in weights.iter().enumerate().take(self.modes) {
            if *w == 0.0 {
                continue;
            }
            for (o, u) in out.iter_mut().zip(self.mode(k)) {
                *o += w * u;
            }
        }
        out
    }

    /// `∫_G Σ_k λ_k^s u_k(t_n, x)² dx` at every time node.
    pub fn weighted_norm_sq(&self, eigenvalues: &[f64], s: f64) -> Vec<f64> {
        self.weighted_diff_norm_sq(None, eigenvalues, s)
    }

    /// Same as [`weighted_norm_sq`](Self::weighted_norm_sq) for `self − other`.
    pub fn weighted_diff_norm_sq(
        &self,
        other: Option<&SpectralField>,
        eigenvalues: &[f64],
        s: f64,
    ) -> Vec<f64> {
        let m = self.space.len();
        let xw = self.space.weights();
        let mut out = vec![0.0; self.time.len()];
        for k in 0..self.modes {
            let lw = math::powf(eigenvalues[k], s);
            let a = self.mode(k);
            let b = other.map(|o| o.mode(k));
            for (n, acc) in out.iter_mut().enumerate() {
                let row = &a[n * m..(n + 1) * m];
                let mut sum = 0.0;
                match b {
                    Some(b) => {
                        for ((u, v), w) in row.iter().zip(&b[n * m..(n + 1) * m]).zip(&xw) {
                            sum += w * (u - v) * (u - v);
                        }
                    }
                    None => {
                        for (u, w) in row.iter().zip(&xw) {
                            sum += w * u * u;
                        }
                    }
                }
                *acc += lw * sum;
            }
        }
        out
    }
}

/// Solve the forward problem for given `h(t_n, x_j)` (`N × M` row-major).
pub fn forward_solve(h: &[f64], problem: &SampledProblem) -> Result<SpectralField> {
    let n = problem.time.len();
    let m = problem.space.len();
    if h.len() != n * m {
        return Err(Error::shape("h samples", n * m, h.len()));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("h samples"));
    }
    let k_modes = problem.modes();
    let mut field = SpectralField::zeros(problem.time, problem.space, k_modes);
    let eigenvalues = problem.basis.eigenvalues();
    parallel::try_for_each_chunk(&mut field.values, n * m, |k, out| {
        let stepper = ModeStepper::new(
            problem.alpha,
            problem.time,
            problem.space,
            eigenvalues[k],
        )?;
        let fk = problem.f_mode(k);
        let gk = problem.g_mode(k);
        let rhs: Vec<f64> = gk
            .iter()
            .zip(fk)
            .zip(h)
            .map(|((g, f), h)| g + f * h)
            .collect();
        stepper.solve(&rhs, problem.phi_mode(k), out)
    })?;
    Ok(field)
}

/// `ψ̂(t_n, x_j) = Σ_k u_k(t_n, x_j)·ω_k`, the Parseval form of `∫_Ω u ω dy`.
pub fn evaluate_overdetermination(u: &SpectralField, omega_coeffs: &[f64]) -> Result<Vec<f64>> {
    if omega_coeffs.len() != u.modes() {
        return Err(Error::shape("omega coefficients", u.modes(), omega_coeffs.len()));
    }
    Ok(u.contract(omega_coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_grid_basics() {
        let g = XGrid::new(5).unwrap();
        assert_eq!(g.step(), 0.25);
        assert_eq!(g.node(4), 1.0);
        let w: f64 = g.weights().iter().sum();
        assert!((w - 1.0).abs() < 1e-15);
        assert_eq!(g.coarsened().unwrap().len(), 3);
        assert!(XGrid::new(2).is_err());
    }

    #[test]
    fn field_layout_and_norms() {
        let t = TimeGrid::new(1.0, 3).unwrap();
        let x = XGrid::new(5).unwrap();
        let f = SpectralField::from_fn(t, x, 2, |k, t, x| (k + 1) as f64 * t * x).unwrap();
        assert_eq!(f.get(1, 2, 4), 2.0);
        assert_eq!(f.mode(1)[2 * 5 + 4], 2.0);
        let w = f.weighted_norm_sq(&[1.0, 4.0], 1.0);
        assert_eq!(w[0], 0.0);
        // t = 1: ∫x² (trapezoid, h = 1/4) · (1 + 4·4)
        let trap = 0.25 * (0.0625 + 0.25 + 0.5625) + 0.125;
        assert!((w[2] - 17.0 * trap).abs() < 1e-14);
        let c = f.contract(&[1.0, -0.5]);
        assert!(c.iter().all(|v| v.abs() < 1e-15));
    }
}
