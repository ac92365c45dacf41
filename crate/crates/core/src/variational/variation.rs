use crate::error::{Error, Result};
use crate::expr::{BundleSpec, Expr};
use crate::geometry::{horizontal_differential, lie_derivative, Form, VectorField};

use super::lagrangian::{euler_lagrange_coefficients, noether_current};

/// A Lie derivative of a Lagrangian split into a boundary-free part and
/// horizontal divergences, next to the independently computed total.
#[derive(Clone, Debug)]
pub struct VariationDecomposition {
    pub boundary_free: Form,
    pub divergence_terms: Vec<Form>,
    pub total: Form,
}

impl VariationDecomposition {
    /// `total - boundary_free - Σ divergence_terms`, zero when the formula holds.
    pub fn residual(&self) -> Form {
        let mut r = self.total.clone();
        r -= &self.boundary_free;
        for d in &self.divergence_terms {
            r -= d;
        }
        r
    }

    pub fn holds(&self) -> bool {
        self.residual().is_zero()
    }
}

/// `Ξ_V ⌋ E_n(μ) = Q^σ E_σ(μ) ds` for a horizontal n-form `μ`.
pub fn contract_euler_lagrange(bundle: &BundleSpec, mu: &Form, field: &VectorField) -> Result<Form> {
    let density = mu.density(bundle)?;
    let e = euler_lagrange_coefficients(bundle, &density)?;
    let q = field.characteristic(bundle)?;
    let c: Expr = q.iter().zip(&e).map(|(a, b)| a * b).sum();
    Ok(Form::lagrangian(bundle, c))
}

/// `d_H ε_Ξ(μ)`.
pub fn current_divergence(bundle: &BundleSpec, mu: &Form, field: &VectorField) -> Result<Form> {
    horizontal_differential(bundle, &noether_current(bundle, mu, field)?)
}

/// Order bound `r_l = 2 r_{l-1} + 1` for the l-th variation of an order-`r`
/// Lagrangian.
pub fn order_budget(r: usize, l: usize) -> usize {
    (0..l).fold(r, |acc, _| 2 * acc + 1)
}

/// `h L_{Ξ_l} ... L_{Ξ_1} λ`.
pub fn iterated_lie_derivative(bundle: &BundleSpec, lambda: &Form, fields: &[VectorField]) -> Result<Form> {
    let mut out = lambda.clone();
    for f in fields {
        out = lie_derivative(bundle, f, &out)?.horizontal();
    }
    Ok(out)
}

/// First variation `L_{JΞ} λ = Ξ_V ⌋ E_n(λ) + d_H ε_Ξ(λ)`.
pub fn first_variation(bundle: &BundleSpec, lambda: &Form, field: &VectorField) -> Result<VariationDecomposition> {
    higher_variation(bundle, lambda, std::slice::from_ref(field))
}

/// Second variation with pieces `[Ξ2⌋E(Ξ1⌋E λ)]` and divergences
/// `[d_H ε_{Ξ2}(Ξ1⌋E λ), d_H ε_{Ξ2}(d_H ε_{Ξ1}(λ))]`.
pub fn second_variation(
    bundle: &BundleSpec,
    lambda: &Form,
    xi1: &VectorField,
    xi2: &VectorField,
) -> Result<VariationDecomposition> {
    higher_variation(bundle, lambda, &[xi1.clone(), xi2.clone()])
}

/// `l`-th variation along `Ξ_1, ..., Ξ_l` (applied in that order).
///
/// With `B_0 = λ`, `B_s = Ξ_s ⌋ E(B_{s-1})` and `D_s = d_H ε_{Ξ_s}`, the
/// boundary-free part is `B_l` and the divergences are
/// `D_l ∘ ... ∘ D_{l-j+1} (B_{l-j})` for `j = 1..l`.
pub fn higher_variation(bundle: &BundleSpec, lambda: &Form, fields: &[VectorField]) -> Result<VariationDecomposition> {
    if fields.is_empty() {
        return Err(Error::Arity("a variation needs at least one field".into()));
    }
    let r = lambda.density(bundle)?.jet_order();
    let l = fields.len();
    let budget = order_budget(r, l);
    bundle.check_order(budget)?;

    let mut chain = vec![lambda.clone()];
    for f in fields {
        let prev = chain.last().expect("non-empty");
        chain.push(contract_euler_lagrange(bundle, prev, f)?);
    }
    let mut divergence_terms = Vec::with_capacity(l);
    for j in 1..=l {
        let mut mu = chain[l - j].clone();
        for f in &fields[l - j..] {
            mu = current_divergence(bundle, &mu, f)?;
        }
        divergence_terms.push(mu);
    }
    Ok(VariationDecomposition {
        boundary_free: chain[l].clone(),
        divergence_terms,
        total: iterated_lie_derivative(bundle, lambda, fields)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    #[test]
    fn budget_recursion() {
        assert_eq!(order_budget(1, 0), 1);
        assert_eq!(order_budget(1, 1), 3);
        assert_eq!(order_budget(2, 3), 23);
    }

    #[test]
    fn first_variation_free_particle_translation() {
        let b = BundleSpec::new(1, 1, 8).unwrap();
        let lam = Form::lagrangian(&b, b.y(0, &[0]).pow(2).scale(&rat(1, 2)));
        let t = VectorField::translation(&b, 0);
        let v = first_variation(&b, &lam, &t).unwrap();
        assert!(v.total.is_zero());
        assert!(v.holds(), "{:?}", v.residual());
    }

    #[test]
    fn budget_overflow_reports_requirement() {
        let b = BundleSpec::new(1, 1, 6).unwrap();
        let lam = Form::lagrangian(&b, b.y(0, &[0, 0]).pow(2));
        let t = VectorField::translation(&b, 0);
        let e = higher_variation(&b, &lam, &[t.clone(), t.clone(), t]).unwrap_err();
        assert_eq!(e, Error::OrderOverflow { required: 23, r_max: 6 });
    }
}
