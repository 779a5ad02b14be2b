//! Numerical laboratory for two-soliton dynamics of the cubic half-wave
//! equation `i∂_tu = |D|u − |u|²u` and the cubic Szegő equation.
//!
//! The crate is organized in layers:
//!
//! * [`spectral`] — uniform periodic grids, Fourier multipliers, Szegő
//!   projectors, Sobolev norms and conserved functionals;
//! * [`profiles`] — the soliton profiles `Q⁺`, `Q`, `Q_β` and derived objects;
//! * [`modulation`] — the two-soliton modulation ODEs;
//! * [`szego`] — exact two-soliton dynamics of the Szegő equation;
//! * [`evolution`] — pseudo-spectral PDE time stepping and diagnostics;
//! * [`acceptance`] — the end-to-end acceptance checks.
//!
//! Supporting numerics ([`quad`], [`ode`], [`krylov`], [`special`]) are kept
//! small and self-contained.

// Parameter checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod error;
pub mod evolution;
pub mod krylov;
pub mod modulation;
pub mod ode;
pub mod profiles;
pub mod quad;
pub mod special;
pub mod spectral;
pub mod szego;

pub use error::{Error, Result};
pub use spectral::{Grid1D, MultiplierSymbol, SpectralField};

/// Version of this crate.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
