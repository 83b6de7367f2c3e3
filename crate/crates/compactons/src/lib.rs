//! Numerical laboratory for the compacton solitary waves of the degenerate
//! KdV and NLS models.
//!
//! The crate constructs the bell-shaped compactly supported waves from their
//! closed-form quadratures, conjugates the linearized operators into
//! nondegenerate Schrodinger operators on the line, computes their low-lying
//! spectra with a Sturm-bisection tridiagonal eigensolver, and renders the
//! spectral-stability verdict through the Hamiltonian-Krein index count.
//! An independent rearrangement-based variational minimizer cross-validates
//! the constructions.

pub mod error;
pub mod frame;
pub mod profile;
pub mod selftest;
pub mod singquad;
pub mod spectrum;
pub mod stability;
pub(crate) mod util;
pub mod variational;

pub use error::{Error, Result};
