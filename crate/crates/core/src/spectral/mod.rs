//! Dirichlet-Laplacian eigenbases on intervals and boxes.
//!
//! Eigenpairs are closed form: on `(0, L₁)×…×(0, Lₙ)`
//! `λ = Σ (jᵢπ/Lᵢ)²` and `v = Π √(2/Lᵢ) sin(jᵢπyᵢ/Lᵢ)`. Inner products on
//! `Ω` use tensor-product composite Simpson quadrature.

mod norms;

pub use norms::{
    c_epsilon, gradient_pairing, tau_norm_sq, tau_norm_sq_over, tau_tail_fraction, two_tau,
    weighted_norm_sq, CEpsilon, GradientPairing,
};

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::{self, PI};
use crate::{Error, Result};

/// Relative tolerance under which two eigenvalues count as degenerate.
const TIE_TOLERANCE: f64 = 1e-12;

/// Spatial domain `Ω` of the `y` variable: an interval `(0, L)` or a box.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct YDomain {
    lengths: Vec<f64>,
}

impl YDomain {
    pub fn interval(length: f64) -> Result<Self> {
        Self::cuboid(vec![length])
    }

    pub fn cuboid(lengths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::UnsupportedDomain(String::from(
                "domain needs at least one axis",
            )));
        }
        if let Some(&l) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::domain("edge length", l, "length > 0"));
        }
        Ok(Self { lengths })
    }

    /// Build from a kind tag, `"interval"` or `"box"`.
    pub fn from_kind(kind: &str, lengths: Vec<f64>) -> Result<Self> {
        match kind {
            "interval" if lengths.len() == 1 => Self::cuboid(lengths),
            "interval" => Err(Error::UnsupportedDomain(format!(
                "interval takes one length, got {}",
                lengths.len()
            ))),
            "box" => Self::cuboid(lengths),
            other => Err(Error::UnsupportedDomain(format!(
                "unknown domain kind `{other}`"
            ))),
        }
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.lengths.len()
    }

    #[inline]
    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn volume(&self) -> f64 {
        self.lengths.iter().product()
    }

    /// Weyl constant `C` in `λ_k ~ C·k^{2/n}`: `4π²(B_n|Ω|)^{−2/n}`.
    pub fn weyl_constant(&self) -> f64 {
        let n = self.dimension() as f64;
        4.0 * PI * PI * math::powf(unit_ball_volume(self.dimension()) * self.volume(), -2.0 / n)
    }

    /// Li–Yau lower bound `λ_k ≥ n/(n+2)·C·k^{2/n}`, valid for every `k`.
    pub fn li_yau_constant(&self) -> f64 {
        let n = self.dimension() as f64;
        n / (n + 2.0) * self.weyl_constant()
    }
}

fn unit_ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    math::powf(PI, h) / math::gamma(h + 1.0)
}

/// The first `K` Dirichlet eigenvalues with their multi-indices, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    domain: YDomain,
    eigenvalues: Vec<f64>,
    indices: Vec<usize>,
}

impl Spectrum {
    pub fn new(domain: &YDomain, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::domain("K", 0.0, "K >= 1"));
        }
        let n = domain.dimension();
        let (eigenvalues, indices) = if n == 1 {
            let w = PI / domain.lengths[0];
            let ev = (1..=count).map(|k| (k as f64 * w) * (k as f64 * w)).collect();
            (ev, (1..=count).collect())
        } else {
            enumerate_box(domain, count)
        };
        Ok(Self {
            domain: domain.clone(),
            eigenvalues,
            indices,
        })
    }

    #[inline]
    pub fn domain(&self) -> &YDomain {
        &self.domain
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    #[inline]
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Multi-index `(j₁, …, jₙ)` of mode `k` (0-based `k`).
    pub fn multi_index(&self, k: usize) -> &[usize] {
        let n = self.domain.dimension();
        &self.indices[k * n..(k + 1) * n]
    }
}

fn enumerate_box(domain: &YDomain, count: usize) -> (Vec<f64>, Vec<usize>) {
    let n = domain.dimension();
    let w2: Vec<f64> = domain.lengths.iter().map(|l| (PI / l) * (PI / l)).collect();
    let base: f64 = w2.iter().sum();
    // Weyl-law guess for λ_K, then grow until enough modes fit below it.
    let mut bound = base
        + math::powf(
            count as f64 / (unit_ball_volume(n) * domain.volume()),
            2.0 / n as f64,
        ) * 4.0
            * PI
            * PI;
    let mut found: Vec<(f64, Vec<usize>)>;
    loop {
        found = Vec::new();
        let mut idx = vec![1usize; n];
        collect_below(&w2, bound, 0, 0.0, &mut idx, &mut found);
        if found.len() >= count {
            break;
        }
        bound *= 1.5;
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    // Degenerate eigenvalues that differ only by rounding share the run's
    // smallest value and are ordered lexicographically by multi-index.
    let mut start = 0;
    while start < found.len() {
        let lead = found[start].0;
        let mut end = start + 1;
        while end < found.len() && found[end].0 - lead <= TIE_TOLERANCE * lead {
            end += 1;
        }
        found[start..end].sort_by(|a, b| a.1.cmp(&b.1));
        for entry in &mut found[start..end] {
            entry.0 = lead;
        }
        start = end;
    }
    found.truncate(count);
    let mut eigenvalues = Vec::with_capacity(count);
    let mut indices = Vec::with_capacity(count * n);
    for (lam, idx) in found {
        eigenvalues.push(lam);
        indices.extend(idx);
    }
    (eigenvalues, indices)
}

fn collect_below(
    w2: &[f64],
    bound: f64,
    axis: usize,
    partial: f64,
    idx: &mut Vec<usize>,
    out: &mut Vec<(f64, Vec<usize>)>,
) {
    let rest: f64 = w2[axis + 1..].iter().sum();
    let mut j = 1usize;
    loop {
        let jf = j as f64;
        let here = partial + jf * jf * w2[axis];
        if here + rest > bound {
            break;
        }
        idx[axis] = j;
        if axis + 1 == w2.len() {
            out.push((here, idx.clone()));
        } else {
            collect_below(w2, bound, axis + 1, here, idx, out);
        }
        j += 1;
    }
    idx[axis] = 1;
}

/// Eigenpairs plus the tensor Simpson quadrature they are sampled on.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    spectrum: Spectrum,
    axis_nodes: Vec<usize>,
    points: Vec<f64>,
    weights: Vec<f64>,
    modes: Vec<f64>,
}

/// Eigenpairs of `−Δ` on `domain` with homogeneous Dirichlet conditions,
/// sampled on `8·j_max + 1` Simpson nodes per axis.
pub fn dirichlet_eigenpairs(domain: &YDomain, count: usize) -> Result<EigenBasis> {
    EigenBasis::new(domain, count, 0)
}

impl EigenBasis {
    /// `min_nodes` raises the per-axis node count above the default
    /// `8·j_max + 1` (rounded up to an odd number).
    pub fn new(domain: &YDomain, count: usize, min_nodes: usize) -> Result<Self> {
        let spectrum = Spectrum::new(domain, count)?;
        let n = domain.dimension();
        let mut jmax = vec![1usize; n];
        for k in 0..count {
            for (m, &j) in jmax.iter_mut().zip(spectrum.multi_index(k)) {
                *m = (*m).max(j);
            }
        }
        let axis_nodes: Vec<usize> = jmax
            .iter()
            .map(|&j| {
                let q = (8 * j + 1).max(min_nodes);
                q + (q + 1) % 2
            })
            .collect();
        let axis_coords: Vec<Vec<f64>> = axis_nodes
            .iter()
            .zip(&domain.lengths)
            .map(|(&q, &l)| (0..q).map(|i| l * i as f64 / (q - 1) as f64).collect())
            .collect();
        let axis_weights: Vec<Vec<f64>> = axis_nodes
            .iter()
            .zip(&domain.lengths)
            .map(|(&q, &l)| math::simpson_weights(q, l / (q - 1) as f64))
            .collect();
        let total: usize = axis_nodes.iter().product();
        let mut points = Vec::with_capacity(total * n);
        let mut weights = Vec::with_capacity(total);
        let mut pos = vec![0usize; n];
        for _ in 0..total {
            let mut w = 1.0;
            for a in 0..n {
                points.push(axis_coords[a][pos[a]]);
                w *= axis_weights[a][pos[a]];
            }
            weights.push(w);
            // last axis varies fastest
            for a in (0..n).rev() {
                pos[a] += 1;
                if pos[a] < axis_nodes[a] {
                    break;
                }
                pos[a] = 0;
            }
        }
        let mut modes = Vec::with_capacity(count * total);
        for k in 0..count {
            let idx = spectrum.multi_index(k);
            for y in points.chunks_exact(n) {
                modes.push(eval_mode(domain, idx, y));
            }
        }
        Ok(Self {
            spectrum,
            axis_nodes,
            points,
            weights,
            modes,
        })
    }

    #[inline]
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    #[inline]
    pub fn domain(&self) -> &YDomain {
        self.spectrum.domain()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.spectrum.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.spectrum.is_empty()
    }

    #[inline]
    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    /// Quadrature nodes per axis.
    #[inline]
    pub fn axis_nodes(&self) -> &[usize] {
        &self.axis_nodes
    }

    /// Number of quadrature points in `Ω`.
    #[inline]
    pub fn quadrature_len(&self) -> usize {
        self.weights.len()
    }

    /// Quadrature points, `dimension` coordinates each.
    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.domain().dimension())
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `v_k` at every quadrature point (0-based `k`).
    #[inline]
    pub fn mode(&self, k: usize) -> &[f64] {
        let q = self.quadrature_len();
        &self.modes[k * q..(k + 1) * q]
    }

    /// `v_k(y)` at an arbitrary point.
    pub fn eval(&self, k: usize, y: &[f64]) -> f64 {
        eval_mode(self.domain(), self.spectrum.multi_index(k), y)
    }

    /// `∫_Ω a b dy` by quadrature.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut s = math::CompensatedSum::new();
        for ((w, x), y) in self.weights.iter().zip(a).zip(b) {
            s.add(w * x * y);
        }
        s.value()
    }

    /// Samples of `p` at every quadrature point.
    pub fn sample<F: FnMut(&[f64]) -> f64>(&self, p: F) -> Vec<f64> {
        self.points().map(p).collect()
    }

    /// Coefficients `(p, v_k)` written into `out` (length `K`); no checks.
    pub fn project_into(&self, samples: &[f64], out: &mut [f64]) {
        let q = self.quadrature_len();
        let mut weighted = vec![0.0; q];
        for ((wp, w), s) in weighted.iter_mut().zip(&self.weights).zip(samples) {
            *wp = w * s;
        }
        for (k, o) in out.iter_mut().enumerate() {
            *o = dot(&weighted, self.mode(k));
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn eval_mode(domain: &YDomain, idx: &[usize], y: &[f64]) -> f64 {
    idx.iter()
        .zip(&domain.lengths)
        .zip(y)
        .map(|((&j, &l), &yy)| math::sqrt(2.0 / l) * math::sin(j as f64 * PI * yy / l))
        .product()
}

/// Fourier coefficients of a sampled function and how much of its
/// `L₂(Ω)` norm they capture.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Projection {
    pub coeffs: Vec<f64>,
    pub norm_sq: f64,
    /// `‖p‖² − Σ p_k²`: the energy outside the first `K` modes.
    pub parseval_defect: f64,
}

/// `p_k = (p, v_k)` for samples of `p` on the basis quadrature points.
pub fn project(samples: &[f64], basis: &EigenBasis) -> Result<Projection> {
    if samples.len() != basis.quadrature_len() {
        return Err(Error::shape(
            "projection samples",
            basis.quadrature_len(),
            samples.len(),
        ));
    }
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("projection samples"));
    }
    let mut coeffs = vec![0.0; basis.len()];
    basis.project_into(samples, &mut coeffs);
    let norm_sq = basis.inner(samples, samples);
    let captured: f64 = coeffs.iter().map(|c| c * c).sum();
    Ok(Projection {
        coeffs,
        norm_sq,
        parseval_defect: norm_sq - captured,
    })
}

/// Partial sum `Σ p_k v_k(y)` at each point of `points` (flattened,
/// `dimension` coordinates per point).
pub fn reconstruct(coeffs: &[f64], basis: &EigenBasis, points: &[f64]) -> Result<Vec<f64>> {
    let n = basis.domain().dimension();
    if coeffs.len() > basis.len() {
        return Err(Error::shape("coefficients", basis.len(), coeffs.len()));
    }
    if points.len() % n != 0 {
        return Err(Error::shape(
            "reconstruction points",
            n * (points.len() / n + 1),
            points.len(),
        ));
    }
    Ok(points
        .chunks_exact(n)
        .map(|y| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * basis.eval(k, y))
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn interval_eigenvalues() {
        let b = dirichlet_eigenpairs(&YDomain::interval(PI).unwrap(), 3).unwrap();
        assert_eq!(b.eigenvalues().len(), 3);
        for (k, lam) in b.eigenvalues().iter().enumerate() {
            assert_relative_eq!(*lam, ((k + 1) * (k + 1)) as f64, max_relative = 1e-14);
        }
        let y = [0.7];
        assert_relative_eq!(b.eval(1, &y), math::sqrt(2.0 / PI) * math::sin(1.4), epsilon = 1e-15);
        let unit = dirichlet_eigenpairs(&YDomain::interval(1.0).unwrap(), 2).unwrap();
        assert_relative_eq!(unit.eigenvalues()[0], PI * PI, max_relative = 1e-14);
        assert_relative_eq!(unit.eigenvalues()[1], 4.0 * PI * PI, max_relative = 1e-14);
    }

    #[test]
    fn square_eigenvalues_and_tie_order() {
        let b = dirichlet_eigenpairs(&YDomain::cuboid(vec![PI, PI]).unwrap(), 4).unwrap();
        let lam = b.eigenvalues();
        for (got, want) in lam.iter().zip([2.0, 5.0, 5.0, 8.0]) {
            assert_relative_eq!(*got, want, max_relative = 1e-14);
        }
        let s = b.spectrum();
        assert_eq!(s.multi_index(0), &[1, 1]);
        assert_eq!(s.multi_index(1), &[1, 2]);
        assert_eq!(s.multi_index(2), &[2, 1]);
        assert_eq!(s.multi_index(3), &[2, 2]);
    }

    #[test]
    fn eigenfunctions_solve_the_eigenproblem() {
        // −v'' ≈ λ v by a fine central difference at interior points
        let b = dirichlet_eigenpairs(&YDomain::interval(2.0).unwrap(), 5).unwrap();
        let h = 1e-4;
        for k in 0..5 {
            for y in [0.3, 0.9, 1.7] {
                let d2 = (b.eval(k, &[y + h]) - 2.0 * b.eval(k, &[y]) + b.eval(k, &[y - h])) / (h * h);
                assert_relative_eq!(-d2, b.eigenvalues()[k] * b.eval(k, &[y]), epsilon = 1e-5 * b.eigenvalues()[k]);
            }
        }
    }

    #[test]
    fn orthonormal_under_quadrature() {
        for domain in [
            YDomain::interval(PI).unwrap(),
            YDomain::cuboid(vec![1.0, 2.0]).unwrap(),
            YDomain::cuboid(vec![1.0, 1.0, 1.5]).unwrap(),
        ] {
            let b = dirichlet_eigenpairs(&domain, 9).unwrap();
            for i in 0..b.len() {
                for j in 0..b.len() {
                    let g = b.inner(b.mode(i), b.mode(j));
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() < 1e-12, "({i},{j}) -> {g}");
                }
            }
        }
    }

    #[test]
    fn projection_of_a_mode() {
        let b = dirichlet_eigenpairs(&YDomain::interval(PI).unwrap(), 8).unwrap();
        let p = project(b.mode(0), &b).unwrap();
        assert_relative_eq!(p.coeffs[0], 1.0, epsilon = 1e-13);
        assert!(p.coeffs[1..].iter().all(|c| c.abs() < 1e-13));
        let zero = project(&vec![0.0; b.quadrature_len()], &b).unwrap();
        assert!(zero.coeffs.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn parseval_on_a_combination() {
        let b = dirichlet_eigenpairs(&YDomain::interval(PI).unwrap(), 10).unwrap();
        let samples: Vec<f64> = (0..b.quadrature_len())
            .map(|q| 3.0 * b.mode(1)[q] - 5.0 * b.mode(6)[q])
            .collect();
        let p = project(&samples, &b).unwrap();
        assert_relative_eq!(p.coeffs[1], 3.0, epsilon = 1e-12);
        assert_relative_eq!(p.coeffs[6], -5.0, epsilon = 1e-12);
        let energy: f64 = p.coeffs.iter().map(|c| c * c).sum();
        assert!((energy - 34.0).abs() <= 1e-8);
        assert!(p.parseval_defect.abs() <= 1e-8);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let b = dirichlet_eigenpairs(&YDomain::interval(1.0).unwrap(), 4).unwrap();
        assert!(matches!(project(&[1.0, 2.0], &b), Err(Error::Shape { .. })));
        assert!(reconstruct(&[0.0; 5], &b, &[0.5]).is_err());
    }

    #[test]
    fn round_trip_of_a_smooth_profile() {
        let p = |y: f64| math::sin(y) * (PI - y) * y;
        let mut errs = Vec::new();
        for k in [8, 16, 32] {
            let b = dirichlet_eigenpairs(&YDomain::interval(PI).unwrap(), k).unwrap();
            let c = project(&b.sample(|y| p(y[0])), &b).unwrap();
            let ys: Vec<f64> = (1..50).map(|i| PI * i as f64 / 50.0).collect();
            let back = reconstruct(&c.coeffs, &b, &ys).unwrap();
            let e = ys.iter().zip(&back).fold(0.0_f64, |m, (y, r)| m.max((p(*y) - r).abs()));
            errs.push(e);
        }
        // p'' does not vanish at the ends, so coefficients decay like k^{-3}
        // and the sup error like K^{-2}
        for w in errs.windows(2) {
            assert!(w[0] / w[1] > 3.5, "{errs:?}");
        }
        let b = dirichlet_eigenpairs(&YDomain::interval(PI).unwrap(), 4).unwrap();
        assert!(reconstruct(&[0.0; 4], &b, &[0.3, 1.2]).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn weyl_law() {
        let s = Spectrum::new(&YDomain::interval(2.5).unwrap(), 200).unwrap();
        for (k, lam) in s.eigenvalues().iter().enumerate() {
            let kk = (k + 1) as f64;
            assert_relative_eq!(lam / (kk * kk), (PI / 2.5) * (PI / 2.5), max_relative = 1e-13);
        }
        for domain in [
            YDomain::cuboid(vec![PI, PI]).unwrap(),
            YDomain::cuboid(vec![1.0, 1.5]).unwrap(),
            YDomain::cuboid(vec![1.0, 1.0, 1.0]).unwrap(),
        ] {
            let n = domain.dimension() as f64;
            let c = domain.weyl_constant();
            let s = Spectrum::new(&domain, 400).unwrap();
            for (k, lam) in s.eigenvalues().iter().enumerate() {
                let ratio = lam * math::powf((k + 1) as f64, -2.0 / n) / c;
                // low cube modes sit above twice the Weyl asymptote
                if n == 2.0 {
                    assert!((0.5..=2.0).contains(&ratio), "k={k} ratio {ratio}");
                } else {
                    assert!(ratio >= 0.5 && (k < 20 || ratio <= 2.0), "k={k} ratio {ratio}");
                }
                assert!(*lam >= domain.li_yau_constant() * math::powf((k + 1) as f64, 2.0 / n));
            }
            for w in s.eigenvalues().windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn domain_validation() {
        assert!(YDomain::interval(0.0).is_err());
        assert!(matches!(
            YDomain::from_kind("disk", vec![1.0]),
            Err(Error::UnsupportedDomain(_))
        ));
        assert!(YDomain::from_kind("box", vec![1.0, 2.0]).is_ok());
        assert!(Spectrum::new(&YDomain::interval(1.0).unwrap(), 0).is_err());
    }
}
