//! Discrete checks of the a priori bounds, the fractional-calculus lemmas
//! they rest on, and the contraction of the successive approximations.

mod apriori;
mod lemmas;
mod monitor;
mod weak;

pub use apriori::validate_apriori;
pub use lemmas::{
    check_alikhanov, check_gronwall, check_lemma_j, inequality_chain, lemma_j_refinement,
    lemma_j_residual, solve_linear_fractional, Refinement,
};
pub use monitor::{contraction_monitor, ContractionClass, ContractionSummary};
pub use weak::{weak_residual, WeakResidual};

use alloc::string::String;

/// One inequality `lhs ≤ rhs` evaluated on discrete data.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    pub tolerance: f64,
    /// `margin ≥ −tolerance`.
    pub pass: bool,
}

impl EstimateCheck {
    /// Check with the default quadrature allowance `1e−9·(1 + |rhs|)`.
    pub fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        Self::with_tolerance(name, lhs, rhs, 1e-9 * (1.0 + rhs.abs()))
    }

    pub fn with_tolerance(name: &str, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            name: String::from(name),
            lhs,
            rhs,
            margin,
            tolerance,
            pass: margin >= -tolerance,
        }
    }
}
