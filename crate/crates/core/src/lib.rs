//! Phase estimation with Gaussian light in a lossy Mach-Zehnder interferometer.

// `!(x <= tol)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fock;
pub mod gaussian;
pub mod interferometer;
pub mod measurements;
pub mod optimize;
pub mod qfi;
pub mod resource;

pub use error::{Error, Result};
