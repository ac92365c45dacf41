use crate::error::{Error, Result};
use crate::expr::{rat, BundleSpec, Expr, MultiIndex};
use crate::geometry::{exterior_derivative, interior_product, prolong, Form, VectorField};

use super::euler::{interior_euler, residual};
use super::source::SourceForm;

/// `E_σ = Σ_I (-1)^{|I|} d_I ∂L/∂y^σ_I` for a density `L`.
pub fn euler_lagrange_coefficients(bundle: &BundleSpec, density: &Expr) -> Result<Vec<Expr>> {
    let mut out = vec![Expr::zero(); bundle.m()];
    for (s, idx) in density.jet_vars() {
        let p = bundle.partial_jet(density, s, &idx);
        let d = bundle.total_derivative_multi(&p, &idx)?;
        if idx.len() % 2 == 0 {
            out[s] += d;
        } else {
            out[s] -= d;
        }
    }
    Ok(out)
}

/// `E_λ = E_σ ω^σ ∧ ds` for a horizontal n-form `λ`.
pub fn euler_lagrange(bundle: &BundleSpec, lambda: &Form) -> Result<SourceForm> {
    let density = lambda.density(bundle)?;
    SourceForm::from_coefficients(bundle, euler_lagrange_coefficients(bundle, &density)?)
}

/// `E_n(λ) = I(dλ)`, the route through the interior Euler operator.
pub fn euler_lagrange_via_interior(bundle: &BundleSpec, lambda: &Form) -> Result<SourceForm> {
    lambda.density(bundle)?;
    let d = exterior_derivative(bundle, lambda)?;
    if d.is_zero() {
        return SourceForm::from_coefficients(bundle, vec![Expr::zero(); bundle.m()]);
    }
    interior_euler(bundle, &d)
}

/// Helmholtz form `H_ε = I(dε)` of a source form.
pub fn helmholtz(bundle: &BundleSpec, source: &SourceForm) -> Result<SourceForm> {
    if source.contact_degree() != 1 {
        return Err(Error::Contact("Helmholtz form needs a 1-contact source form".into()));
    }
    let d = exterior_derivative(bundle, source.form())?;
    if d.is_zero() {
        return SourceForm::new(bundle, 2, Form::zero());
    }
    interior_euler(bundle, &d)
}

/// Principal Lepage equivalent
/// `Θ_L = L ds + Σ_{k,l} (-1)^l d_{p_1..p_l} ∂L/∂y^σ_{j_1..j_k p_1..p_l i} ω^σ_{j_1..j_k} ∧ ds_i`
/// with sums over ordered tuples; the derivative with respect to an ordered
/// tuple is the sorted-coordinate derivative divided by its arrangement count.
pub fn principal_lepage(bundle: &BundleSpec, lambda: &Form) -> Result<Form> {
    let density = lambda.density(bundle)?;
    let r = density.jet_order();
    let n = bundle.n();
    let mut out = lambda.clone();
    for k in 0..r {
        for l in 0..(r - k) {
            for j in MultiIndex::of_len(n, k) {
                for p in MultiIndex::of_len(n, l) {
                    for i in 0..n {
                        let full = j.union(&p).with(i);
                        let weight = rat(
                            (j.arrangements() * p.arrangements()) as i64,
                            full.arrangements() as i64,
                        );
                        let weight = if l % 2 == 0 { weight } else { -weight };
                        for s in 0..bundle.m() {
                            let dl = bundle.partial_jet(&density, s, &full);
                            if dl.is_zero() {
                                continue;
                            }
                            let c = bundle.total_derivative_multi(&dl, &p)?.scale(&weight);
                            out += Form::omega(s, j.clone()).wedge(&Form::volume_i(bundle, i)).scale(&c);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Momentum `p_{d_V λ} = -p_1 R(dλ)`.
pub fn momentum(bundle: &BundleSpec, lambda: &Form) -> Result<Form> {
    lambda.density(bundle)?;
    let d = exterior_derivative(bundle, lambda)?;
    if d.is_zero() {
        return Ok(Form::zero());
    }
    Ok(-residual(bundle, &d)?.contact_part(1))
}

/// Noether current `ε_Ξ(λ) = J Ξ_V ⌋ p_{d_V λ} + Ξ_H ⌋ λ`.
pub fn noether_current(bundle: &BundleSpec, lambda: &Form, field: &VectorField) -> Result<Form> {
    let p = momentum(bundle, lambda)?;
    let k = p.max_omega_order().unwrap_or(0);
    let (h, v) = prolong(bundle, field, k)?.split_hv(bundle)?;
    let mut out = interior_product(&v, &p)?;
    out += interior_product(&h, lambda)?;
    Ok(out)
}
