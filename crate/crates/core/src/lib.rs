//! Bound states of two spinless particles interacting through a Yukawa
//! potential, treated with the spinless Salpeter-type (SS) equation and its
//! nonrelativistic limit.
//!
//! The analytic route maps the radial equation onto the Nikiforov–Uvarov
//! template ([`nu`], [`analytic`]); the numeric route diagonalizes a
//! finite-difference radial operator ([`numeric`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod golden;
pub mod model;
pub mod nu;
pub mod numeric;
pub mod quad;
pub mod report;
pub mod specfun;

pub use error::{Error, Result};
