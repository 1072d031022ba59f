//! Detection of lower-dimensional zero-density regions.
//!
//! A density that vanishes on a set `S0` of dimension below the ambient one leaves
//! covering balls near `S0` empty while balls away from it fill up. This crate builds
//! grid coverings with shrinking radii, classifies balls against `S0`, counts sample
//! occupancy, checks the rate conditions under which detection succeeds, and runs the
//! Monte Carlo experiments that exercise them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covering;
pub mod density;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod noncompact;
pub mod quadrature;
pub mod rates;
pub mod sampling;
pub mod stats;

pub use error::{Error, Result};
