use crate::error::{Error, Result};
use crate::expr::{BundleSpec, Expr, MultiIndex};
use crate::geometry::{Form, VectorField};

use super::lagrangian::euler_lagrange_coefficients;
use super::source::SourceForm;
use super::variation::contract_euler_lagrange;

/// Jacobi morphism `J_Ξ(λ) = E_n(Ξ ⌋ E_n(λ))` for a vertical field.
pub fn jacobi_morphism(bundle: &BundleSpec, lambda: &Form, field: &VectorField) -> Result<SourceForm> {
    field.require_vertical()?;
    let mu = contract_euler_lagrange(bundle, lambda, field)?;
    SourceForm::from_coefficients(bundle, euler_lagrange_coefficients(bundle, &mu.density(bundle)?)?)
}

/// The two coordinate forms of the linearized Euler-Lagrange operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiForms {
    /// `Σ_J (-1)^{|J|} d_J(Ξ^ρ ∂E_ρ/∂y^σ_J)`, indexed by `σ`.
    pub adjoint: Vec<Expr>,
    /// `Σ_J d_J Ξ^σ ∂E_ρ/∂y^σ_J`, indexed by `ρ`.
    pub direct: Vec<Expr>,
}

/// Both coordinate expressions of the Jacobi equation for a vertical field.
pub fn jacobi_onshell(bundle: &BundleSpec, lambda: &Form, field: &VectorField) -> Result<JacobiForms> {
    field.require_vertical()?;
    let m = bundle.m();
    let e = euler_lagrange_coefficients(bundle, &lambda.density(bundle)?)?;
    let xi = field.fibre();
    let mut adjoint = vec![Expr::zero(); m];
    let mut direct = vec![Expr::zero(); m];
    for (rho, e_rho) in e.iter().enumerate() {
        for (s, idx) in e_rho.jet_vars() {
            let de = bundle.partial_jet(e_rho, s, &idx);
            direct[rho] += &bundle.total_derivative_multi(&xi[s], &idx)? * &de;
            let inner = &xi[rho] * &de;
            let d = bundle.total_derivative_multi(&inner, &idx)?;
            if idx.len() % 2 == 0 {
                adjoint[s] += d;
            } else {
                adjoint[s] -= d;
            }
        }
    }
    Ok(JacobiForms { adjoint, direct })
}

/// Identity A: `J_Ξ - adjoint - (∂Ξ^ρ/∂y^σ) E_ρ`, zero off shell.
pub fn identity_a_residual(bundle: &BundleSpec, lambda: &Form, field: &VectorField) -> Result<Vec<Expr>> {
    let j = jacobi_morphism(bundle, lambda, field)?.coefficients(bundle)?;
    let forms = jacobi_onshell(bundle, lambda, field)?;
    let e = euler_lagrange_coefficients(bundle, &lambda.density(bundle)?)?;
    let xi = field.fibre();
    Ok((0..bundle.m())
        .map(|s| {
            let mut r = &j[s] - &forms.adjoint[s];
            for (rho, e_rho) in e.iter().enumerate() {
                let dxi = bundle.partial_jet(&xi[rho], s, &MultiIndex::empty());
                r -= &(&dxi * e_rho);
            }
            r
        })
        .collect())
}

/// Identity B (self-adjointness): `direct - adjoint`, zero off shell.
pub fn identity_b_residual(bundle: &BundleSpec, lambda: &Form, field: &VectorField) -> Result<Vec<Expr>> {
    let forms = jacobi_onshell(bundle, lambda, field)?;
    Ok(forms
        .direct
        .iter()
        .zip(&forms.adjoint)
        .map(|(a, b)| a - b)
        .collect())
}

/// `(∇(Ξ), ∇*(Ξ))` of a 2-contact source kernel:
/// `∇(Ξ)_σ = Σ A^J_{τσ} d_J Ξ^τ` and `∇*(Ξ)_τ = Σ (-1)^{|J|} d_J(A^J_{τσ} Ξ^σ)`.
pub fn nabla_pair(bundle: &BundleSpec, kernel: &SourceForm, field: &VectorField) -> Result<(Vec<Expr>, Vec<Expr>)> {
    field.require_vertical()?;
    let a = kernel.kernel()?;
    let xi = field.fibre();
    let mut nabla = vec![Expr::zero(); bundle.m()];
    let mut adjoint = vec![Expr::zero(); bundle.m()];
    for ((tau, j, sigma), coeff) in a.iter() {
        nabla[*sigma] += &(coeff * &bundle.total_derivative_multi(&xi[*tau], j)?);
        let d = bundle.total_derivative_multi(&(coeff * &xi[*sigma]), j)?;
        if j.len() % 2 == 0 {
            adjoint[*tau] += d;
        } else {
            adjoint[*tau] -= d;
        }
    }
    Ok((nabla, adjoint))
}

/// Hessian density `Ξ1 ⌋ E(Ξ2 ⌋ E(λ))` as a horizontal n-form.
pub fn hessian_density(bundle: &BundleSpec, lambda: &Form, xi1: &VectorField, xi2: &VectorField) -> Result<Form> {
    xi1.require_vertical()?;
    let j = jacobi_morphism(bundle, lambda, xi2)?.coefficients(bundle)?;
    let c: Expr = xi1.fibre().iter().zip(&j).map(|(a, b)| a * b).sum();
    Ok(Form::lagrangian(bundle, c))
}

pub(crate) fn require_vertical_all(fields: &[&VectorField]) -> Result<()> {
    if fields.iter().all(|f| f.is_vertical()) {
        Ok(())
    } else {
        Err(Error::NotVertical)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    fn setup() -> (BundleSpec, Form) {
        let b = BundleSpec::new(1, 1, 8).unwrap().with_aux(vec!["f".into()]).unwrap();
        let lam = Form::lagrangian(&b, b.y(0, &[0]).pow(2).scale(&rat(1, 2)));
        (b, lam)
    }

    #[test]
    fn free_particle_jacobi_equation() {
        let (b, lam) = setup();
        let xi = VectorField::symbolic_vertical(&b, 0).unwrap();
        let j = jacobi_morphism(&b, &lam, &xi).unwrap().coefficients(&b).unwrap();
        assert_eq!(j, vec![-Expr::aux(0, MultiIndex::new([0, 0]))]);
    }

    #[test]
    fn hessian_of_free_particle() {
        let (b, lam) = setup();
        let xi = VectorField::symbolic_vertical(&b, 0).unwrap();
        let h = hessian_density(&b, &lam, &xi, &xi).unwrap();
        let f = Expr::aux(0, MultiIndex::empty());
        let f11 = Expr::aux(0, MultiIndex::new([0, 0]));
        assert_eq!(h, Form::lagrangian(&b, -(&f * &f11)));
    }

    #[test]
    fn first_order_kernel_operators() {
        let (b, _) = setup();
        let mut k = super::super::source::Kernel::new();
        k.insert((0, MultiIndex::single(0), 0), Expr::one());
        let kern = SourceForm::from_kernel(&b, &k);
        let xi = VectorField::symbolic_vertical(&b, 0).unwrap();
        let (n, a) = nabla_pair(&b, &kern, &xi).unwrap();
        let f1 = Expr::aux(0, MultiIndex::single(0));
        assert_eq!(n, vec![f1.clone()]);
        assert_eq!(a, vec![-f1]);
    }

    #[test]
    fn non_vertical_field_rejected() {
        let (b, lam) = setup();
        let t = VectorField::translation(&b, 0);
        assert_eq!(jacobi_morphism(&b, &lam, &t).unwrap_err(), Error::NotVertical);
    }
}
