//! Exact symbolic engine for the variational sequence on jet prolongations
//! of a fibred manifold.
//!
//! The crate is layered: [`expr`] holds polynomials in jet coordinates,
//! [`geometry`] builds forms and vector fields on top of them,
//! [`variational`] implements the sequence operators and variation
//! formulas, and [`gauge`] specializes everything to Yang-Mills theory.

pub mod error;
pub mod expr;
pub mod gauge;
pub mod geometry;
pub mod random;
pub mod variational;

pub use error::{Error, Result};
