use alloc::vec::Vec;

use super::{mittag_leffler, rl_integral, FractionalOrder, SampledSignal};
use crate::math;
use crate::{Error, Result};

/// Right-hand side of the fractional Grönwall inequality
///
/// `y(t) ≤ y0·E_α(c1 t^α) + Γ(α)·E_{α,α}(c1 t^α)·J^α c2(t)`
///
/// evaluated on the grid of `c2`.
pub fn gronwall_bound(
    y0: f64,
    c1: f64,
    c2: &SampledSignal,
    alpha: FractionalOrder,
) -> Result<SampledSignal> {
    if !(y0.is_finite() && y0 >= 0.0) {
        return Err(Error::domain("y0", y0, "y0 >= 0"));
    }
    if !(c1.is_finite() && c1 > 0.0) {
        return Err(Error::domain("c1", c1, "c1 > 0"));
    }
    if let Some(&bad) = c2.values().iter().find(|v| **v < 0.0) {
        return Err(Error::domain("c2", bad, "c2 >= 0"));
    }
    let a = alpha.value();
    let forcing = rl_integral(c2, a)?;
    let ga = math::gamma(a);
    let grid = c2.grid();
    let values = grid
        .nodes()
        .zip(forcing.values())
        .map(|(t, &j)| {
            let arg = c1 * math::powf(t, a);
            Ok(y0 * mittag_leffler(a, 1.0, arg)? + ga * mittag_leffler(a, a, arg)? * j)
        })
        .collect::<Result<Vec<f64>>>()?;
    SampledSignal::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::TimeGrid;
    use approx::assert_relative_eq;

    #[test]
    fn vanishing_rate_and_forcing_gives_constant() {
        let g = TimeGrid::new(1.0, 33).unwrap();
        let zero = SampledSignal::from_fn(g, |_| 0.0).unwrap();
        let b = gronwall_bound(1.0, 1e-14, &zero, FractionalOrder::new(0.5).unwrap()).unwrap();
        for v in b.values() {
            assert_relative_eq!(*v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn classical_exponential() {
        let g = TimeGrid::new(2.0, 21).unwrap();
        let zero = SampledSignal::from_fn(g, |_| 0.0).unwrap();
        let b = gronwall_bound(3.0, 0.7, &zero, FractionalOrder::new(1.0).unwrap()).unwrap();
        for (t, v) in g.nodes().zip(b.values()) {
            assert_relative_eq!(*v, 3.0 * math::exp(0.7 * t), max_relative = 1e-13);
        }
    }

    #[test]
    fn negative_inputs_are_rejected() {
        let g = TimeGrid::new(1.0, 5).unwrap();
        let c2 = SampledSignal::from_fn(g, |t| t - 0.5).unwrap();
        let ok = SampledSignal::from_fn(g, |_| 1.0).unwrap();
        let a = FractionalOrder::new(0.5).unwrap();
        assert!(gronwall_bound(1.0, 1.0, &c2, a).is_err());
        assert!(gronwall_bound(-1.0, 1.0, &ok, a).is_err());
        assert!(gronwall_bound(1.0, 0.0, &ok, a).is_err());
    }
}
