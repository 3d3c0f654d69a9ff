//! Exact ground state of a harmonically bound charge coupled to a
//! one-dimensional bosonic continuum.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chifunc;
pub mod cli;
pub mod config;
pub mod error;
pub mod fano;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod pair;
pub mod quadrature;

pub use error::{Error, Result};
pub use num_complex;
