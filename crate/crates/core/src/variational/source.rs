use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{BundleSpec, Expr, MultiIndex};
use crate::geometry::{contact_degree, Basis, Factor, Form};

/// A `k`-contact `(n+k)`-form in source normal form: every term carries a
/// factor `ω^σ` of order zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceForm {
    k: usize,
    form: Form,
}

/// Kernel `A^J_{τσ}` of a 2-contact source form
/// `Σ A^J_{τσ} ω^τ_J ∧ ω^σ ∧ ds`, keyed by `(τ, J, σ)`.
pub type Kernel = BTreeMap<(usize, MultiIndex, usize), Expr>;

impl SourceForm {
    pub fn new(bundle: &BundleSpec, k: usize, form: Form) -> Result<Self> {
        for (b, _) in form.terms() {
            let q = contact_degree(b);
            if q != k || b.len() != bundle.n() + k {
                return Err(Error::Contact(format!(
                    "expected a {k}-contact {}-form",
                    bundle.n() + k
                )));
            }
            let has_source_factor = b
                .iter()
                .any(|f| matches!(f, Factor::Omega(_, i) if i.is_empty()));
            if !has_source_factor {
                return Err(Error::Contact("term without an order-zero contact factor".into()));
            }
        }
        Ok(SourceForm { k, form })
    }

    /// `Σ E_σ ω^σ ∧ ds`.
    pub fn from_coefficients(bundle: &BundleSpec, coeffs: Vec<Expr>) -> Result<Self> {
        if coeffs.len() != bundle.m() {
            return Err(Error::Arity(format!(
                "source form needs {} coefficients, got {}",
                bundle.m(),
                coeffs.len()
            )));
        }
        let vol = Form::volume(bundle);
        let mut form = Form::zero();
        for (s, c) in coeffs.into_iter().enumerate() {
            form += Form::omega(s, MultiIndex::empty()).wedge(&vol).scale(&c);
        }
        Ok(SourceForm { k: 1, form })
    }

    pub fn from_kernel(bundle: &BundleSpec, kernel: &Kernel) -> Self {
        let vol = Form::volume(bundle);
        let mut form = Form::zero();
        for ((t, j, s), a) in kernel.iter() {
            form += Form::omega(*t, j.clone())
                .wedge(&Form::omega(*s, MultiIndex::empty()))
                .wedge(&vol)
                .scale(a);
        }
        SourceForm { k: 2, form }
    }

    pub fn contact_degree(&self) -> usize {
        self.k
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn into_form(self) -> Form {
        self.form
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    /// `E_σ` of a 1-contact source form.
    pub fn coefficients(&self, bundle: &BundleSpec) -> Result<Vec<Expr>> {
        if self.k != 1 {
            return Err(Error::Contact(format!("coefficients need k = 1, have k = {}", self.k)));
        }
        Ok((0..bundle.m())
            .map(|s| {
                let mut b: Basis = smallvec::smallvec![Factor::omega(s, MultiIndex::empty())];
                b.extend((0..bundle.n()).map(Factor::dx));
                self.form.coefficient(&b)
            })
            .collect())
    }

    /// `A^J_{τσ}` of a 2-contact source form.  Terms `ω^τ ∧ ω^σ` with both
    /// indices empty are kept in canonical order `τ < σ`.
    pub fn kernel(&self) -> Result<Kernel> {
        if self.k != 2 {
            return Err(Error::Contact(format!("kernel needs k = 2, have k = {}", self.k)));
        }
        let mut out: Kernel = BTreeMap::new();
        for (b, c) in self.form.terms() {
            let omegas: Vec<(usize, MultiIndex)> = b
                .iter()
                .filter_map(|f| match f {
                    Factor::Omega(s, i) => Some((*s as usize, i.clone())),
                    _ => None,
                })
                .collect();
            // dx-block first: dx..∧ωa∧ωb = ωa∧ωb∧ds since 2n is even
            let (a, z) = (&omegas[0], &omegas[1]);
            let (key, value) = if z.1.is_empty() {
                ((a.0, a.1.clone(), z.0), c.clone())
            } else if a.1.is_empty() {
                ((z.0, z.1.clone(), a.0), -c)
            } else {
                return Err(Error::Contact("2-contact term without ω^σ factor".into()));
            };
            let slot = out.entry(key).or_default();
            *slot += value;
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }
}

/// Removes the `ds` block of an `(n+q)`-form whose terms all carry `n` base
/// factors, returning `χ` with `χ ∧ ds` equal to the input.
pub(crate) fn strip_volume(bundle: &BundleSpec, rho: &Form) -> Result<Form> {
    let n = bundle.n();
    let mut out = Form::zero();
    for (b, c) in rho.terms() {
        let dx = b.iter().filter(|f| !f.is_contact()).count();
        if dx != n {
            return Err(Error::Contact("term does not contain ds".into()));
        }
        let q = b.len() - n;
        let rest: Basis = b.iter().filter(|f| f.is_contact()).cloned().collect();
        let coeff = if (n * q).is_multiple_of(2) { c.clone() } else { -c };
        out.add_term(rest, coeff);
    }
    Ok(out)
}
