//! Discrete fractional calculus on uniform time grids.

mod gronwall;
mod l1;
mod mittag_leffler;
mod riemann_liouville;

pub use gronwall::gronwall_bound;
pub use l1::{caputo_l1, caputo_l1_into, l1_scale, l1_weights, L1Derivative};
pub use mittag_leffler::mittag_leffler;
pub use riemann_liouville::{rl_integral, rl_integral_into};

use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Uniform grid `t_i = i·Δt`, `i = 0..N`, on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimeGrid {
    final_time: f64,
    nodes: usize,
}

impl TimeGrid {
    pub fn new(final_time: f64, nodes: usize) -> Result<Self> {
        if !(final_time.is_finite() && final_time > 0.0) {
            return Err(Error::domain("T", final_time, "T > 0"));
        }
        if nodes < 2 {
            return Err(Error::InvalidGrid(format!(
                "time grid needs at least 2 nodes, got {nodes}"
            )));
        }
        Ok(Self { final_time, nodes })
    }

    /// Rebuild a grid from explicit node coordinates, rejecting anything that
    /// is not uniform and anchored at `t = 0`.
    pub fn from_nodes(ts: &[f64]) -> Result<Self> {
        if ts.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "time grid needs at least 2 nodes, got {}",
                ts.len()
            )));
        }
        if ts[0] != 0.0 {
            return Err(Error::InvalidGrid(format!("t_0 = {} is not 0", ts[0])));
        }
        let grid = Self::new(ts[ts.len() - 1], ts.len())?;
        let dt = grid.step();
        for (i, &t) in ts.iter().enumerate() {
            if (t - grid.node(i)).abs() > 1e-10 * dt.max(grid.final_time * 1e-3) {
                return Err(Error::InvalidGrid(format!(
                    "node {i} at t = {t} breaks uniform spacing Δt = {dt}"
                )));
            }
        }
        Ok(grid)
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
    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    #[inline]
    pub fn step(&self) -> f64 {
        self.final_time / (self.nodes - 1) as f64
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.nodes {
            self.final_time
        } else {
            i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes).map(move |i| self.node(i))
    }

    /// Grid with every other node removed, when `N − 1` is even.
    pub fn coarsened(&self) -> Option<Self> {
        if (self.nodes - 1) % 2 == 0 && self.nodes >= 3 {
            Some(Self {
                final_time: self.final_time,
                nodes: (self.nodes - 1) / 2 + 1,
            })
        } else {
            None
        }
    }
}

/// Order `α ∈ (0, 1]` of the Caputo derivative; `α = 1` is the classical
/// (parabolic) limit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "f64", into = "f64"))]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::domain("alpha", alpha, "0 < alpha <= 1"))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_classical(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;
    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(a: FractionalOrder) -> f64 {
        a.0
    }
}

/// Real values sampled on every node of a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: TimeGrid,
    values: Vec<f64>,
}

impl SampledSignal {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::shape("sampled signal", grid.len(), values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sampled signal"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: FnMut(f64) -> f64>(grid: TimeGrid, mut f: F) -> Result<Self> {
        let values = grid.nodes().map(&mut f).collect();
        Self::new(grid, values)
    }

    #[inline]
    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Restriction to the coarsened grid (every other node).
    pub fn coarsened(&self) -> Option<Self> {
        let grid = self.grid.coarsened()?;
        let values = self.values.iter().step_by(2).copied().collect();
        Some(Self { grid, values })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
