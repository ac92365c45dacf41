//! Yang-Mills theory on a flat background: Lagrangian, field equations,
//! Jacobi equations and the current attached to a pair of Jacobi fields.
//!
//! Each quantity is available twice: from the generic operators of
//! [`crate::variational`] and as a closed-form display built index by index.

mod algebra;
mod displays;
mod metric;
mod yang_mills;

pub use algebra::{AlgebraReport, LieAlgebraData};
pub use metric::MetricSpec;
pub use yang_mills::{JacobiSlot, YangMills};
