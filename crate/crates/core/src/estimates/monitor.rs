use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ContractionClass {
    /// `r̂ < 0.99`.
    Contracting,
    /// `0.99 ≤ r̂ ≤ 1.01`.
    Stagnant,
    Diverging,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContractionSummary {
    /// Geometric rate from a least-squares fit of `log W_i` on `i`.
    pub rate: f64,
    pub class: ContractionClass,
    pub kappa: Option<f64>,
    /// `r̂ ≤ κ + 0.1`, when `κ` is known.
    pub within_kappa: Option<bool>,
}

/// Fit `W_i ≈ C·r̂^i` to the positive entries of `history`.
///
/// Exact zeros (a converged iterate) carry no rate information and are
/// skipped; at least three positive entries are required.
pub fn contraction_monitor(history: &[f64], kappa: Option<f64>) -> Result<ContractionSummary> {
    let pts: Vec<(f64, f64)> = history
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 0.0 && w.is_finite())
        .map(|(i, w)| (i as f64, math::ln(*w)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientHistory { len: pts.len() });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let rate = math::exp(math::fit_slope(&xs, &ys));
    let class = if rate < 0.99 {
        ContractionClass::Contracting
    } else if rate <= 1.01 {
        ContractionClass::Stagnant
    } else {
        ContractionClass::Diverging
    };
    Ok(ContractionSummary {
        rate,
        class,
        kappa,
        within_kappa: kappa.map(|k| rate <= k + 0.1),
    })
}
