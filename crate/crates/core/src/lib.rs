//! Identification of a space-time source coefficient in a subdiffusion
//! equation from an integral measurement.
//!
//! The model problem on `Q = (0,T) × G × Ω` with `G = (0,1)` is
//!
//! ```text
//! D_t^α u − Δ_x u − Δ_y u = g(t,x,y) + f(t,x,y)·h(t,x)
//! u(0,x,y) = φ(x,y),   u = 0 on ∂G and ∂Ω
//! ∫_Ω u(t,x,y) ω(y) dy = ψ(t,x)
//! ```
//!
//! where `h` is unknown. The crate is organised bottom-up:
//!
//! * [`fracops`]: L1 Caputo derivative, Riemann–Liouville integral,
//!   Mittag-Leffler functions and the fractional Grönwall bound.
//! * [`spectral`]: closed-form Dirichlet eigenbases on intervals and boxes,
//!   projections, `‖·‖_τ` norms, `C_ε` and the gradient pairing `(∇v_k, ∇ω)`.
//! * [`forward`]: per-mode implicit L1 / central-difference solves.
//! * [`inverse`]: `h` reconstruction, successive approximations and the
//!   solvability-condition report.
//! * [`estimates`]: numerical validators for the a priori bounds.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature runs independent mode solves on rayon.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod parallel;
pub mod math;

pub mod estimates;
pub mod forward;
pub mod fracops;
pub mod inverse;
pub mod spectral;

pub use error::{Error, Result};
