//! Metric-space distances between many-body ground states and between their
//! particle densities.
//!
//! Two metrics are provided. For wave functions normalized to the particle
//! number `N`,
//!
//! ```text
//! D_psi(psi1, psi2) = sqrt(2N (1 - |<psi1|psi2>|))
//! ```
//!
//! where the overlap is taken between the unit-normalized states, and for
//! densities `D_rho(rho1, rho2) = ∫ |rho1 - rho2|`. Distances between same-`N`
//! objects are bounded by `sqrt(2N)` and `2N`, respectively.
//!
//! The crate also ships the ground-state solvers needed to trace the map
//! between the two metrics along a parameter path:
//!
//! - [`hubbard`]: exact diagonalization of a trapped open Hubbard chain,
//! - [`hooke`]: Hooke's atom through the centre-of-mass/relative separation,
//! - [`helium`]: helium-like ions in an explicitly correlated Gaussian basis,
//!
//! and the [`sweep`] harness that runs the sweeps, analyzes the resulting
//! curves and writes CSV/SVG artifacts.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod helium;
pub mod hooke;
pub mod hubbard;
pub mod metric;
pub mod numerics;
pub mod sweep;

pub use error::{Bound, Error, Result};
