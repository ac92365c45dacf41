//! Operators of the variational sequence and the variation formulas built
//! from them.
//!
//! Multi-indices are summed over sorted representatives throughout.  Where
//! a formula is usually written with ordered tuples, the weights are
//! converted explicitly (see [`residual`] and [`principal_lepage`]).

mod euler;
mod identities;
mod jacobi;
mod lagrangian;
mod onshell;
mod source;
mod variation;

pub use euler::{interior_euler, residual};
pub use identities::{
    cons1_residual, identity_suite, is_jacobi_field, jacobi_current_onshell, jacobi_variation_current,
    noether_antisymmetry_residual, second_commutation_residual, IdentityOutcome, IdentityReport,
    JacobiVariationCheck, Status, Suite,
};
pub use jacobi::{
    hessian_density, identity_a_residual, identity_b_residual, jacobi_morphism, jacobi_onshell, nabla_pair,
    JacobiForms,
};
pub use lagrangian::{
    euler_lagrange, euler_lagrange_coefficients, euler_lagrange_via_interior, helmholtz, momentum,
    noether_current, principal_lepage,
};
pub use onshell::{extract_e_linear, Extraction};
pub use source::{Kernel, SourceForm};
pub use variation::{
    contract_euler_lagrange, current_divergence, first_variation, higher_variation, iterated_lie_derivative,
    order_budget, second_variation, VariationDecomposition,
};
