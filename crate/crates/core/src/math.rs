//! Scalar kernels shared by the solver modules: `libm` wrappers (so the crate
//! builds without `std`), compensated summation, fixed-node quadrature
//! weights and an adaptive Gauss–Kronrod integrator.

use alloc::vec;
use alloc::vec::Vec;

pub use core::f64::consts::PI;

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `ln|Γ(x)|`.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Composite trapezoid weights for `n ≥ 2` uniformly spaced nodes.
pub fn trapezoid_weights(n: usize, step: f64) -> Vec<f64> {
    let mut w = vec![step; n];
    if n > 0 {
        w[0] = 0.5 * step;
        w[n - 1] = 0.5 * step;
    }
    w
}

/// Composite Simpson weights. `n` must be odd and at least 3.
pub fn simpson_weights(n: usize, step: f64) -> Vec<f64> {
    debug_assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd node count");
    let mut w = vec![0.0; n];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        } * step
            / 3.0;
    }
    w
}

/// Composite Simpson when the node count allows it, trapezoid otherwise.
pub fn line_weights(n: usize, step: f64) -> Vec<f64> {
    if n >= 3 && n % 2 == 1 {
        simpson_weights(n, step)
    } else {
        trapezoid_weights(n, step)
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_kronrod = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_kronrod += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    (
        kronrod * half,
        ((kronrod - gauss) * half).abs(),
        abs_kronrod * half.abs(),
    )
}

/// Result of [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    /// `∫|f|`, used by callers to judge cancellation.
    pub magnitude: f64,
    pub converged: bool,
}

/// Globally adaptive G7/K15 quadrature of `f` over the breakpoint-separated
/// intervals `points[0] < points[1] < … `. The interval with the largest
/// error estimate is bisected until `Σ err ≤ max(abs_tol, rel_tol·|I|)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Quadrature {
    const MAX_SEGMENTS: usize = 4000;
    let mut segments: Vec<(f64, f64, f64, f64, f64)> = Vec::with_capacity(64);
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (v, e, m) = gauss_kronrod_15(&f, w[0], w[1]);
            segments.push((w[0], w[1], v, e, m));
        }
    }
    loop {
        let mut total = CompensatedSum::new();
        let mut err = 0.0;
        let mut magnitude = 0.0;
        let mut worst = 0;
        for (i, s) in segments.iter().enumerate() {
            total.add(s.2);
            err += s.3;
            magnitude += s.4;
            if s.3 > segments[worst].3 {
                worst = i;
            }
        }
        let value = total.value();
        let target = abs_tol.max(rel_tol * value.abs());
        let converged = err <= target;
        if converged || segments.len() >= MAX_SEGMENTS || segments.is_empty() {
            return Quadrature {
                value,
                error: err,
                magnitude,
                converged: converged || segments.is_empty(),
            };
        }
        let (a, b, ..) = segments.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // interval exhausted at machine resolution
            return Quadrature {
                value,
                error: err,
                magnitude,
                converged: false,
            };
        }
        let (v1, e1, m1) = gauss_kronrod_15(&f, a, mid);
        let (v2, e2, m2) = gauss_kronrod_15(&f, mid, b);
        segments.push((a, mid, v1, e1, m1));
        segments.push((mid, b, v2, e2, m2));
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_integrates_cubics_exactly() {
        let n = 11;
        let h = 2.0 / (n - 1) as f64;
        let w = simpson_weights(n, h);
        let s: f64 = (0..n)
            .map(|i| {
                let x = i as f64 * h;
                w[i] * (x * x * x - x + 1.0)
            })
            .sum();
        // ∫_0^2 x³ − x + 1 = 4 − 2 + 2
        assert_relative_eq!(s, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        // ∫_0^1 x^{-1/2} dx = 2
        let q = integrate_adaptive(|x| 1.0 / sqrt(x), &[0.0, 1.0], 1e-12, 1e-12);
        assert_relative_eq!(q.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn adaptive_resolves_narrow_peak() {
        // Lorentzian of width 1e-3 centred at 0.3: ∫ = atan((1-0.3)/w) + atan(0.3/w)
        let w = 1e-3;
        let q = integrate_adaptive(
            |x| w / ((x - 0.3) * (x - 0.3) + w * w),
            &[0.0, 0.3, 1.0],
            1e-13,
            1e-13,
        );
        let exact = libm::atan(0.7 / w) + libm::atan(0.3 / w);
        assert_relative_eq!(q.value, exact, epsilon = 1e-11);
    }

    #[test]
    fn compensated_sum_recovers_cancelled_bits() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        s.add(1e-17);
        s.add(-1.0);
        assert_eq!(s.value(), 1e-17);
    }

    #[test]
    fn slope_of_a_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        assert_relative_eq!(fit_slope(&xs, &ys), 2.0, epsilon = 1e-15);
    }
}
