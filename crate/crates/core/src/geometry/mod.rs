//! Differential forms in the contact basis and projectable vector fields.
//!
//! Every form is stored over the frame `{dx^i, ω^σ_I}` with
//! `ω^σ_I = dy^σ_I - y^σ_{Ii} dx^i`, so the contact split `p_k` is a filter
//! on the number of `ω` factors.  Holonomic input (`dy`) is converted on
//! construction.

mod field;
mod form;

pub use field::{interior_product, lie_bracket, lie_derivative, prolong, FrameField, ProlongedField, VectorField};
pub use form::{
    contact_degree, differential, exterior_derivative, formal_derivative, formal_derivative_multi,
    horizontal_differential, pullback, vertical_differential, Basis, Factor, Form,
};
pub(crate) use form::reciprocal;
