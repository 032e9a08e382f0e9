use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::XGrid;
use crate::fracops::{caputo_l1_into, l1_scale, l1_weights, FractionalOrder, TimeGrid};
use crate::parallel;
use crate::spectral::{gradient_pairing, EigenBasis, GradientPairing, YDomain};
use crate::{Error, Result};

/// `(t, x, y) ↦ value`.
pub type FieldFn = Box<dyn Fn(f64, f64, &[f64]) -> f64 + Send + Sync>;
/// `(x, y) ↦ value`.
pub type InitialFn = Box<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
/// `y ↦ value`.
pub type WeightFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// `(t, x) ↦ value`.
pub type SurfaceFn = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Coefficients, initial data, weight and measurement of one problem
/// instance, together with the grids it is solved on.
pub struct ProblemData {
    pub alpha: FractionalOrder,
    pub time: TimeGrid,
    pub space: XGrid,
    pub domain: YDomain,
    pub f: FieldFn,
    pub g: FieldFn,
    pub phi: InitialFn,
    pub omega: WeightFn,
    pub psi: SurfaceFn,
    /// Exact `D_t^α ψ`; the L1 scheme is used when absent.
    pub psi_caputo: Option<SurfaceFn>,
    /// Exact `∂²_x ψ`; finite differences are used when absent.
    pub psi_laplacian: Option<SurfaceFn>,
}

impl core::fmt::Debug for ProblemData {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ProblemData")
            .field("alpha", &self.alpha)
            .field("time", &self.time)
            .field("space", &self.space)
            .field("domain", &self.domain)
            .field("psi_caputo", &self.psi_caputo.is_some())
            .field("psi_laplacian", &self.psi_laplacian.is_some())
            .finish_non_exhaustive()
    }
}

/// [`ProblemData`] evaluated on the grids and projected on the eigenbasis.
///
/// Per-mode arrays are mode-major (`(k·N + n)·M + j`); surface arrays are
/// `N × M` row-major.
#[derive(Debug, Clone)]
pub struct SampledProblem {
    pub alpha: FractionalOrder,
    pub time: TimeGrid,
    pub space: XGrid,
    pub basis: EigenBasis,
    pub f_coeffs: Vec<f64>,
    pub g_coeffs: Vec<f64>,
    /// `φ_k(x_j)`, `K × M`.
    pub phi_coeffs: Vec<f64>,
    /// `(f(t,x,·), ω)`.
    pub f_omega: Vec<f64>,
    /// `(g(t,x,·), ω)`.
    pub g_omega: Vec<f64>,
    /// `‖f(t,x,·)‖²_{L₂(Ω)}` by direct quadrature.
    pub f_norm_sq: Vec<f64>,
    pub g_norm_sq: Vec<f64>,
    pub psi: Vec<f64>,
    pub psi_caputo: Vec<f64>,
    pub psi_laplacian: Vec<f64>,
    /// `D^α ψ` came from the L1 scheme (its `t_0` row copies `t_1`).
    pub psi_caputo_from_l1: bool,
    pub psi_laplacian_from_differences: bool,
    /// `∫_Ω φ(x_j, y) ω(y) dy`.
    pub phi_omega: Vec<f64>,
    pub phi_norm_sq: f64,
    pub phi_grad_x_sq: f64,
    pub phi_grad_y_sq: f64,
    pub omega: GradientPairing,
    /// `‖ω‖²_{L₂(Ω)}` by direct quadrature.
    pub omega_norm_sq: f64,
}

struct FieldSamples {
    coeffs: Vec<f64>,
    omega: Vec<f64>,
    norm_sq: Vec<f64>,
}

impl SampledProblem {
    pub fn new(data: &ProblemData, basis: EigenBasis) -> Result<Self> {
        if basis.domain() != &data.domain {
            return Err(Error::UnsupportedDomain(alloc::string::String::from(
                "eigenbasis was built for a different y-domain",
            )));
        }
        let time = data.time;
        let space = data.space;
        let (nt, m, k) = (time.len(), space.len(), basis.len());
        let omega = gradient_pairing(&basis, &data.omega)?;
        let omega_samples = basis.sample(&data.omega);
        let omega_norm_sq = basis.inner(&omega_samples, &omega_samples);

        let f = sample_field(&data.f, &basis, &omega_samples, time, space)?;
        let g = sample_field(&data.g, &basis, &omega_samples, time, space)?;

        let mut phi_coeffs = vec![0.0; k * m];
        let mut phi_omega = vec![0.0; m];
        let mut phi_rows: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut buf = vec![0.0; k];
        for (j, x) in space.nodes().enumerate() {
            let s: Vec<f64> = basis.points().map(|y| (data.phi)(x, y)).collect();
            if s.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("phi samples"));
            }
            basis.project_into(&s, &mut buf);
            for (kk, c) in buf.iter().enumerate() {
                phi_coeffs[kk * m + j] = *c;
            }
            phi_omega[j] = basis.inner(&s, &omega_samples);
            phi_rows.push(s);
        }
        let xw = space.weights();
        let ones = vec![1.0; basis.quadrature_len()];
        let mut phi_norm_sq = 0.0;
        for (row, w) in phi_rows.iter().zip(&xw) {
            phi_norm_sq += w * basis.inner(row, row);
        }
        let dx = space.step();
        let mut phi_grad_x_sq = 0.0;
        for pair in phi_rows.windows(2) {
            let d: Vec<f64> = pair[1].iter().zip(&pair[0]).map(|(a, b)| (a - b) / dx).collect();
            let sq: Vec<f64> = d.iter().map(|v| v * v).collect();
            phi_grad_x_sq += dx * basis.inner(&sq, &ones);
        }
        let mut phi_grad_y_sq = 0.0;
        for (kk, lam) in basis.eigenvalues().iter().enumerate() {
            let row = &phi_coeffs[kk * m..(kk + 1) * m];
            phi_grad_y_sq += lam * row.iter().zip(&xw).map(|(p, w)| w * p * p).sum::<f64>();
        }

        let mut psi = vec![0.0; nt * m];
        for (n, t) in time.nodes().enumerate() {
            for (j, x) in space.nodes().enumerate() {
                psi[n * m + j] = (data.psi)(t, x);
            }
        }
        if psi.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("psi samples"));
        }
        let psi_caputo = match &data.psi_caputo {
            Some(d) => surface(d, time, space),
            None => caputo_columns(&psi, data.alpha, time, m),
        };
        let psi_laplacian = match &data.psi_laplacian {
            Some(d) => surface(d, time, space),
            None => second_difference_rows(&psi, m, dx),
        };
        if psi_caputo.iter().chain(&psi_laplacian).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("psi derivatives"));
        }

        Ok(Self {
            alpha: data.alpha,
            time,
            space,
            basis,
            f_coeffs: f.coeffs,
            g_coeffs: g.coeffs,
            phi_coeffs,
            f_omega: f.omega,
            g_omega: g.omega,
            f_norm_sq: f.norm_sq,
            g_norm_sq: g.norm_sq,
            psi,
            psi_caputo,
            psi_laplacian,
            psi_caputo_from_l1: data.psi_caputo.is_none(),
            psi_laplacian_from_differences: data.psi_laplacian.is_none(),
            phi_omega,
            phi_norm_sq,
            phi_grad_x_sq,
            phi_grad_y_sq,
            omega,
            omega_norm_sq,
        })
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.basis.len()
    }

    #[inline]
    fn block(&self) -> usize {
        self.time.len() * self.space.len()
    }

    /// `f_k(t_n, x_j)` as an `N × M` block.
    #[inline]
    pub fn f_mode(&self, k: usize) -> &[f64] {
        let b = self.block();
        &self.f_coeffs[k * b..(k + 1) * b]
    }

    #[inline]
    pub fn g_mode(&self, k: usize) -> &[f64] {
        let b = self.block();
        &self.g_coeffs[k * b..(k + 1) * b]
    }

    #[inline]
    pub fn phi_mode(&self, k: usize) -> &[f64] {
        let m = self.space.len();
        &self.phi_coeffs[k * m..(k + 1) * m]
    }

    /// Scale `φ`, `g` and `ψ` (with its derivatives) by `c`.
    pub fn scale_data(&mut self, c: f64) {
        for v in self
            .phi_coeffs
            .iter_mut()
            .chain(&mut self.g_coeffs)
            .chain(&mut self.g_omega)
            .chain(&mut self.psi)
            .chain(&mut self.psi_caputo)
            .chain(&mut self.psi_laplacian)
            .chain(&mut self.phi_omega)
        {
            *v *= c;
        }
        for v in [&mut self.phi_norm_sq, &mut self.phi_grad_x_sq, &mut self.phi_grad_y_sq] {
            *v *= c * c;
        }
        for v in &mut self.g_norm_sq {
            *v *= c * c;
        }
    }
}

fn sample_field(
    field: &FieldFn,
    basis: &EigenBasis,
    omega: &[f64],
    time: TimeGrid,
    space: XGrid,
) -> Result<FieldSamples> {
    let (nt, m, k) = (time.len(), space.len(), basis.len());
    let ones = vec![1.0; basis.quadrature_len()];
    // one time row per task: (coefficients M×K, (·,ω) M, ‖·‖² M)
    let rows = parallel::map_indices(nt, |n| {
        let t = time.node(n);
        let mut coeffs = vec![0.0; m * k];
        let mut om = vec![0.0; m];
        let mut nrm = vec![0.0; m];
        let mut s = vec![0.0; basis.quadrature_len()];
        for (j, x) in space.nodes().enumerate() {
            for (v, y) in s.iter_mut().zip(basis.points()) {
                *v = field(t, x, y);
            }
            if s.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("coefficient samples"));
            }
            basis.project_into(&s, &mut coeffs[j * k..(j + 1) * k]);
            om[j] = basis.inner(&s, omega);
            let sq: Vec<f64> = s.iter().map(|v| v * v).collect();
            nrm[j] = basis.inner(&sq, &ones);
        }
        Ok((coeffs, om, nrm))
    });
    let mut out = FieldSamples {
        coeffs: vec![0.0; k * nt * m],
        omega: vec![0.0; nt * m],
        norm_sq: vec![0.0; nt * m],
    };
    for (n, row) in rows.into_iter().enumerate() {
        let (coeffs, om, nrm) = row?;
        for j in 0..m {
            for kk in 0..k {
                out.coeffs[(kk * nt + n) * m + j] = coeffs[j * k + kk];
            }
        }
        out.omega[n * m..(n + 1) * m].copy_from_slice(&om);
        out.norm_sq[n * m..(n + 1) * m].copy_from_slice(&nrm);
    }
    Ok(out)
}

fn surface(d: &SurfaceFn, time: TimeGrid, space: XGrid) -> Vec<f64> {
    let mut out = Vec::with_capacity(time.len() * space.len());
    for t in time.nodes() {
        for x in space.nodes() {
            out.push(d(t, x));
        }
    }
    out
}

/// L1 derivative in `t` of each `x` column of an `N × M` array.
pub(crate) fn caputo_columns(a: &[f64], alpha: FractionalOrder, time: TimeGrid, m: usize) -> Vec<f64> {
    let nt = time.len();
    let w = l1_weights(alpha, nt);
    let c = l1_scale(alpha, time.step());
    let mut out = vec![0.0; nt * m];
    let mut col = vec![0.0; nt];
    let mut d = vec![0.0; nt];
    for j in 0..m {
        for n in 0..nt {
            col[n] = a[n * m + j];
        }
        caputo_l1_into(&col, c, &w, &mut d);
        for n in 0..nt {
            out[n * m + j] = d[n];
        }
    }
    out
}

/// `∂²_x` of each row: central differences inside, one-sided second-order
/// stencils `(2u₀ − 5u₁ + 4u₂ − u₃)/h²` at the ends.
pub(crate) fn second_difference_rows(a: &[f64], m: usize, dx: f64) -> Vec<f64> {
    let h2 = dx * dx;
    let mut out = vec![0.0; a.len()];
    for (row, o) in a.chunks_exact(m).zip(out.chunks_exact_mut(m)) {
        for j in 1..m - 1 {
            o[j] = (row[j + 1] - 2.0 * row[j] + row[j - 1]) / h2;
        }
        if m >= 4 {
            o[0] = (2.0 * row[0] - 5.0 * row[1] + 4.0 * row[2] - row[3]) / h2;
            o[m - 1] = (2.0 * row[m - 1] - 5.0 * row[m - 2] + 4.0 * row[m - 3] - row[m - 4]) / h2;
        } else {
            o[0] = o[1];
            o[m - 1] = o[m - 2];
        }
    }
    out
}
