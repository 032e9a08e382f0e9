//! Manufactured problems on `Ω = (0, π)` with `f = ω = sin y`.
//!
//! Each preset fixes a closed-form pair `(u*, h*)`,
//! `u* = Σ a·p(t)·sin(mπx)·sin(jy)`, `h* = q(t)·sin(πx)`, with `p`, `q`
//! quadratic in `t`, and sets `g = D^α u* − Δu* − f·h*`, `ψ = ∫u*ω dy`.

use std::f64::consts::PI;
use std::sync::Arc;

use fracsource_core::forward::{ProblemData, SpectralField, SurfaceFn, XGrid};
use fracsource_core::fracops::{FractionalOrder, TimeGrid};
use fracsource_core::math::gamma;
use fracsource_core::spectral::{Spectrum, YDomain};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Preset {
    /// `u* = (1+t²) sin πx sin y`, `h* = sin πx`.
    #[serde(rename = "mode1")]
    Mode1,
    /// `u* = (1+t²) sin πx sin y + ½(1+t) sin 2πx sin 3y`, `h* = (1+t) sin πx`.
    #[serde(rename = "two-mode")]
    TwoMode,
    /// All data zero; `(u*, h*) = (0, 0)`.
    #[serde(rename = "zero")]
    Zero,
}

impl std::str::FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "mode1" => Ok(Preset::Mode1),
            "two-mode" => Ok(Preset::TwoMode),
            "zero" => Ok(Preset::Zero),
            other => Err(CliError::Usage(format!("unknown preset '{other}'"))),
        }
    }
}

/// `c₀ + c₁t + c₂t²`.
#[derive(Debug, Clone, Copy)]
struct Quadratic([f64; 3]);

impl Quadratic {
    fn at(self, t: f64) -> f64 {
        let [a, b, c] = self.0;
        a + t * (b + t * c)
    }

    /// Caputo derivative by the power rule.
    fn caputo(self, t: f64, alpha: f64) -> f64 {
        let [_, b, c] = self.0;
        b * t.powf(1.0 - alpha) / gamma(2.0 - alpha) + 2.0 * c * t.powf(2.0 - alpha) / gamma(3.0 - alpha)
    }
}

#[derive(Debug, Clone, Copy)]
struct Term {
    amplitude: f64,
    time: Quadratic,
    x_freq: usize,
    y_index: usize,
}

impl Term {
    fn space(&self, x: f64) -> f64 {
        (self.x_freq as f64 * PI * x).sin()
    }

    fn decay(&self) -> f64 {
        let m = self.x_freq as f64 * PI;
        let j = self.y_index as f64;
        m * m + j * j
    }
}

/// Closed-form solution of a preset.
#[derive(Debug, Clone)]
pub struct Exact {
    terms: Arc<Vec<Term>>,
    h_time: Quadratic,
}

impl Exact {
    pub fn h(&self, t: f64, x: f64) -> f64 {
        self.h_time.at(t) * (PI * x).sin()
    }

    /// `u*_k(t, x) = (u*(t,x,·), v_k)` for the Dirichlet basis of `(0, π)`.
    pub fn coefficient(&self, spectrum: &Spectrum, k: usize, t: f64, x: f64) -> f64 {
        let j = spectrum.multi_index(k)[0];
        let norm = (PI / 2.0).sqrt();
        self.terms
            .iter()
            .filter(|term| term.y_index == j)
            .map(|term| norm * term.amplitude * term.time.at(t) * term.space(x))
            .sum()
    }

    pub fn h_samples(&self, time: TimeGrid, space: XGrid) -> Vec<f64> {
        time.nodes()
            .flat_map(|t| space.nodes().map(move |x| (t, x)).collect::<Vec<_>>())
            .map(|(t, x)| self.h(t, x))
            .collect()
    }

    pub fn field(&self, spectrum: &Spectrum, time: TimeGrid, space: XGrid) -> SpectralField {
        SpectralField::from_fn(time, space, spectrum.len(), |k, t, x| self.coefficient(spectrum, k, t, x))
            .expect("closed-form coefficients are finite")
    }
}

pub struct Manufactured {
    pub data: ProblemData,
    pub exact: Exact,
}

impl std::fmt::Debug for Manufactured {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Manufactured").field("data", &self.data).finish_non_exhaustive()
    }
}

fn terms(preset: Preset) -> (Vec<Term>, Quadratic) {
    match preset {
        Preset::Mode1 => (
            vec![Term {
                amplitude: 1.0,
                time: Quadratic([1.0, 0.0, 1.0]),
                x_freq: 1,
                y_index: 1,
            }],
            Quadratic([1.0, 0.0, 0.0]),
        ),
        Preset::TwoMode => (
            vec![
                Term {
                    amplitude: 1.0,
                    time: Quadratic([1.0, 0.0, 1.0]),
                    x_freq: 1,
                    y_index: 1,
                },
                Term {
                    amplitude: 0.5,
                    time: Quadratic([1.0, 1.0, 0.0]),
                    x_freq: 2,
                    y_index: 3,
                },
            ],
            Quadratic([1.0, 1.0, 0.0]),
        ),
        Preset::Zero => (Vec::new(), Quadratic([0.0; 3])),
    }
}

/// Build the data of `preset` on the given grids.
///
/// With `analytic_derivatives` the exact `D^α ψ` and `∂²_x ψ` are attached;
/// otherwise the solver derives them from the `ψ` samples.
pub fn mms_generate(
    preset: Preset,
    alpha: f64,
    time: TimeGrid,
    space: XGrid,
    analytic_derivatives: bool,
) -> CliResult<Manufactured> {
    let order = FractionalOrder::new(alpha)?;
    let (terms, h_time) = terms(preset);
    let terms = Arc::new(terms);
    let exact = Exact {
        terms: terms.clone(),
        h_time,
    };

    let tg = terms.clone();
    let hx = exact.clone();
    let g = move |t: f64, x: f64, y: &[f64]| {
        let source: f64 = tg
            .iter()
            .map(|term| {
                term.amplitude
                    * term.space(x)
                    * (term.y_index as f64 * y[0]).sin()
                    * (term.time.caputo(t, alpha) + term.decay() * term.time.at(t))
            })
            .sum();
        source - y[0].sin() * hx.h(t, x)
    };
    let tp = terms.clone();
    let phi = move |x: f64, y: &[f64]| -> f64 {
        tp.iter()
            .map(|term| term.amplitude * term.time.at(0.0) * term.space(x) * (term.y_index as f64 * y[0]).sin())
            .sum()
    };
    // ∫ sin(jy) sin y dy over (0, π) = π/2 δ_{j1}
    let paired = |terms: Arc<Vec<Term>>, op: fn(&Term, f64, f64, f64) -> f64| -> SurfaceFn {
        Box::new(move |t, x| {
            terms
                .iter()
                .filter(|term| term.y_index == 1)
                .map(|term| 0.5 * PI * op(term, t, x, alpha))
                .sum()
        })
    };
    let psi = paired(terms.clone(), |term, t, x, _| term.amplitude * term.time.at(t) * term.space(x));
    let (psi_caputo, psi_laplacian) = if analytic_derivatives {
        let d = paired(terms.clone(), |term, t, x, a| term.amplitude * term.time.caputo(t, a) * term.space(x));
        let l = paired(terms.clone(), |term, t, x, _| {
            let m = term.x_freq as f64 * PI;
            -m * m * term.amplitude * term.time.at(t) * term.space(x)
        });
        (Some(d), Some(l))
    } else {
        (None, None)
    };

    Ok(Manufactured {
        data: ProblemData {
            alpha: order,
            time,
            space,
            domain: YDomain::interval(PI)?,
            f: Box::new(|_, _, y| y[0].sin()),
            g: Box::new(g),
            phi: Box::new(phi),
            omega: Box::new(|y| y[0].sin()),
            psi,
            psi_caputo,
            psi_laplacian,
        },
        exact,
    })
}

/// Replace `ψ` by samples read from a `(t, x, value)` CSV on the run grid.
pub fn attach_measurement(data: &mut ProblemData, path: &std::path::Path) -> CliResult<()> {
    let time = data.time;
    let space = data.space;
    let (nt, m) = (time.len(), space.len());
    let mut grid = vec![f64::NAN; nt * m];
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let tol = 1e-9;
    for row in reader.deserialize::<(f64, f64, f64)>() {
        let (t, x, v) = row?;
        let n = (t / time.step()).round();
        let j = (x / space.step()).round();
        if n < 0.0 || j < 0.0 || n as usize >= nt || j as usize >= m {
            return Err(CliError::Usage(format!("psi sample ({t}, {x}) lies outside the grid")));
        }
        let (n, j) = (n as usize, j as usize);
        if (time.node(n) - t).abs() > tol * (1.0 + t.abs()) || (space.node(j) - x).abs() > tol {
            return Err(CliError::Usage(format!("psi sample ({t}, {x}) is not a grid node")));
        }
        grid[n * m + j] = v;
    }
    if let Some(i) = grid.iter().position(|v| v.is_nan()) {
        return Err(CliError::Usage(format!(
            "psi file misses node t = {}, x = {}",
            time.node(i / m),
            space.node(i % m)
        )));
    }
    let (dt, dx) = (time.step(), space.step());
    data.psi = Box::new(move |t, x| {
        let n = ((t / dt).round() as usize).min(nt - 1);
        let j = ((x / dx).round() as usize).min(m - 1);
        grid[n * m + j]
    });
    data.psi_caputo = None;
    data.psi_laplacian = None;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracsource_core::forward::{forward_solve, SampledProblem};
    use fracsource_core::spectral::dirichlet_eigenpairs;

    fn grids(n: usize, m: usize) -> (TimeGrid, XGrid) {
        (TimeGrid::new(1.0, n).unwrap(), XGrid::new(m).unwrap())
    }

    #[test]
    fn mode1_measurement_is_the_closed_form() {
        let (t, x) = grids(5, 5);
        let p = mms_generate(Preset::Mode1, 0.5, t, x, true).unwrap();
        let want = 0.5 * PI * (1.0 + 0.25) * (PI * 0.5).sin();
        assert!(((p.data.psi)(0.5, 0.5) - want).abs() < 1e-15);
        assert_eq!(p.exact.h(0.3, 0.5), 1.0);
    }

    #[test]
    fn forward_solve_reproduces_two_mode() {
        let (t, x) = grids(65, 65);
        let p = mms_generate(Preset::TwoMode, 0.6, t, x, true).unwrap();
        let basis = dirichlet_eigenpairs(&p.data.domain, 4).unwrap();
        let sp = SampledProblem::new(&p.data, basis).unwrap();
        let u = forward_solve(&p.exact.h_samples(t, x), &sp).unwrap();
        let exact = p.exact.field(sp.basis.spectrum(), t, x);
        let err = u
            .values()
            .iter()
            .zip(exact.values())
            .fold(0.0_f64, |e, (a, b)| e.max((a - b).abs()));
        assert!(err < 5e-3, "{err}");
        // modes 1 and 3 carry the solution
        assert!(exact.mode(1).iter().all(|v| *v == 0.0));
        assert!(exact.mode(2).iter().any(|v| v.abs() > 0.1));
    }

    #[test]
    fn unknown_preset() {
        assert!("mode2".parse::<Preset>().is_err());
        assert_eq!("two-mode".parse::<Preset>().unwrap(), Preset::TwoMode);
    }
}
