//! Verification laboratory for Boussinesq-type nonlinear wave equations.
//!
//! The crate is organised bottom-up:
//!
//! * [`jets`]: exact higher-order differentiation with truncated bivariate
//!   Taylor jets, plus a finite-difference oracle.
//! * [`elliptic`]: Jacobi elliptic functions `sn`, `cn`, `dn` and `K(m)`.
//! * [`equations`]: the equation family, traveling-wave reduction and
//!   residual functionals.
//! * [`catalog`]: closed-form traveling-wave solutions (Jacobi direct method,
//!   G'/G expansion, named particular solutions).
//! * [`verify`]: the claim registry and deterministic residual reports.
//! * [`simulate`]: a Fourier pseudospectral RK4 solver for the fourth-order
//!   equation in both its ill-posed and well-posed sign conventions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod elliptic;
pub mod equations;
mod error;
pub mod jets;
pub mod simulate;
pub mod verify;

pub use error::{Error, Result};
pub use jets::Jet;

/// Version string embedded in reports.
pub const TOOL_VERSION: &str = concat!("bousq ", env!("CARGO_PKG_VERSION"));
