//! Linear stability analysis of a weakly conducting fluid layer whose
//! electrical conductivity varies with temperature.
//!
//! The temperature amplitude `F(z)` of a normal mode with horizontal
//! wavenumber `a` obeys
//!
//! ```text
//! (D² − a²)³ F + Ra a² F + M a² DF = 0,   F = D²F = D(D² − a²)F = 0 at z = ±½
//! ```
//!
//! This crate solves that eigenvalue problem for the Rayleigh number `Ra`
//! three independent ways:
//!
//! - [`secular`]: the direct method. The general solution is built from the
//!   roots of the characteristic polynomial ([`charpoly`]) and substituted
//!   into the boundary conditions; eigenvalues are zeros of a 6×6 determinant.
//! - [`spectral`]: a Galerkin method in shifted Legendre or shifted Chebyshev
//!   bases for the split system `U = (D² − a²)F`.
//! - [`oracle`]: second-order finite differences with Richardson
//!   extrapolation, used as ground truth.
//!
//! [`neutral`] minimizes over the wavenumber and sweeps `M` to trace the
//! neutral surface.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

// Modules import `num_traits::Float` for f64 math without std; the import is
// unused (and allowed) whenever std ends up linked.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod charpoly;
mod error;
pub mod linalg;
pub mod neutral;
pub mod oracle;
mod params;
pub mod poly;
pub mod secular;
pub mod spectral;

pub use error::{Error, Result};
pub use params::FlowParams;

pub use num_complex::Complex64;
