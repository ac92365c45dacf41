use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{BundleSpec, Expr};
use crate::geometry::{
    exterior_derivative, horizontal_differential, interior_product, lie_bracket, prolong, vertical_differential, Form,
    VectorField,
};

use super::euler::{interior_euler, residual};
use super::jacobi::{identity_a_residual, identity_b_residual, jacobi_morphism, require_vertical_all};
use super::lagrangian::{
    euler_lagrange, euler_lagrange_coefficients, euler_lagrange_via_interior, helmholtz, momentum, noether_current,
    principal_lepage,
};
use super::onshell::{extract_e_linear, Extraction};
use super::variation::{contract_euler_lagrange, current_divergence, first_variation, iterated_lie_derivative, second_variation};

/// `d_H(J Ξ2_V ⌋ p_{d_V d_H ε1}) - d_H(h(Ξ2_V ⌋ d_V ε1))` with
/// `ε1 = J Ξ1_V ⌋ p_{d_V λ} + Ξ1_H ⌋ λ`.
pub fn cons1_residual(bundle: &BundleSpec, lambda: &Form, xi1: &VectorField, xi2: &VectorField) -> Result<Form> {
    let eps1 = noether_current(bundle, lambda, xi1)?;
    let mu = horizontal_differential(bundle, &eps1)?;

    let p = momentum(bundle, &mu)?;
    let k = p.max_omega_order().unwrap_or(0);
    let (_, v) = prolong(bundle, xi2, k)?.split_hv(bundle)?;
    let lhs = horizontal_differential(bundle, &interior_product(&v, &p)?)?;

    let dv = vertical_differential(bundle, &eps1)?;
    let k = dv.max_omega_order().unwrap_or(0);
    let (_, v) = prolong(bundle, xi2, k)?.split_hv(bundle)?;
    let rhs = horizontal_differential(bundle, &interior_product(&v, &dv)?.horizontal())?;
    Ok(&lhs - &rhs)
}

/// `Ξ1⌋E(Ξ2⌋Eλ) + [Ξ2,Ξ1]⌋Eλ - Ξ2⌋E(Ξ1⌋Eλ) - d_H ε_{Ξ2}(Ξ1⌋Eλ)`.
pub fn second_commutation_residual(
    bundle: &BundleSpec,
    lambda: &Form,
    xi1: &VectorField,
    xi2: &VectorField,
) -> Result<Form> {
    require_vertical_all(&[xi1, xi2])?;
    let e1 = contract_euler_lagrange(bundle, lambda, xi1)?;
    let e2 = contract_euler_lagrange(bundle, lambda, xi2)?;
    let bracket = lie_bracket(bundle, xi2, xi1)?;
    let mut r = contract_euler_lagrange(bundle, &e2, xi1)?;
    r += contract_euler_lagrange(bundle, lambda, &bracket)?;
    r -= &contract_euler_lagrange(bundle, &e1, xi2)?;
    r -= &current_divergence(bundle, &e1, xi2)?;
    Ok(r)
}

/// `d_H ε_{Ξ2}(Ξ1⌋Eλ) + d_H ε_{Ξ1}(Ξ2⌋Eλ)`.
pub fn noether_antisymmetry_residual(
    bundle: &BundleSpec,
    lambda: &Form,
    xi1: &VectorField,
    xi2: &VectorField,
) -> Result<Form> {
    require_vertical_all(&[xi1, xi2])?;
    let e1 = contract_euler_lagrange(bundle, lambda, xi1)?;
    let e2 = contract_euler_lagrange(bundle, lambda, xi2)?;
    Ok(current_divergence(bundle, &e1, xi2)? + current_divergence(bundle, &e2, xi1)?)
}

/// `d_H ε_{Ξ2}(Ξ1⌋Eλ)` split into `E`-linear terms and a remainder.  For
/// Jacobi fields the remainder vanishes.
pub fn jacobi_current_onshell(
    bundle: &BundleSpec,
    lambda: &Form,
    xi1: &VectorField,
    xi2: &VectorField,
) -> Result<Extraction> {
    require_vertical_all(&[xi1, xi2])?;
    let e1 = contract_euler_lagrange(bundle, lambda, xi1)?;
    let div = current_divergence(bundle, &e1, xi2)?.density(bundle)?;
    let e = euler_lagrange_coefficients(bundle, &lambda.density(bundle)?)?;
    extract_e_linear(bundle, &div, &e)
}

pub fn is_jacobi_field(bundle: &BundleSpec, lambda: &Form, field: &VectorField) -> Result<bool> {
    Ok(jacobi_morphism(bundle, lambda, field)?.is_zero())
}

/// Preconditions and conclusion of the conservation law for the second
/// variation: `Ξ1` a Jacobi field, `Ξ2` a symmetry of `L_{Ξ1} λ` with
/// `Ξ2 ⌋ J_{Ξ1} = 0`, giving `d_H ε_{Ξ2}(L_{Ξ1} λ) = 0`.
#[derive(Clone, Debug)]
pub struct JacobiVariationCheck {
    pub jacobi_field: bool,
    pub symmetry: bool,
    pub contraction_vanishes: bool,
    pub current_divergence: Form,
}

impl JacobiVariationCheck {
    pub fn preconditions(&self) -> bool {
        self.jacobi_field && self.symmetry && self.contraction_vanishes
    }
}

pub fn jacobi_variation_current(
    bundle: &BundleSpec,
    lambda: &Form,
    xi1: &VectorField,
    xi2: &VectorField,
) -> Result<JacobiVariationCheck> {
    xi1.require_vertical()?;
    let j = jacobi_morphism(bundle, lambda, xi1)?;
    let q2 = xi2.characteristic(bundle)?;
    let jc = j.coefficients(bundle)?;
    let contraction: Expr = q2.iter().zip(&jc).map(|(a, b)| a * b).sum();
    let first = iterated_lie_derivative(bundle, lambda, std::slice::from_ref(xi1))?;
    let second = iterated_lie_derivative(bundle, &first, std::slice::from_ref(xi2))?;
    Ok(JacobiVariationCheck {
        jacobi_field: j.is_zero(),
        symmetry: second.is_zero(),
        contraction_vanishes: contraction.is_zero(),
        current_divergence: current_divergence(bundle, &first, xi2)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct IdentityOutcome {
    pub name: String,
    pub status: Status,
    /// Printed residual for failures.
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.status == Status::Pass).count()
    }

    pub fn failed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.status == Status::Fail).count()
    }

    fn record(&mut self, name: String, result: Result<Option<String>>) {
        let (status, detail) = match result {
            Ok(None) => (Status::Pass, String::new()),
            Ok(Some(d)) => (Status::Fail, d),
            Err(Error::NotVertical) => (Status::Skipped("needs vertical fields".into()), String::new()),
            Err(e) => (Status::Fail, e.to_string()),
        };
        self.outcomes.push(IdentityOutcome { name, status, detail });
    }

    fn skip(&mut self, name: String, why: &str) {
        self.outcomes.push(IdentityOutcome {
            name,
            status: Status::Skipped(why.into()),
            detail: String::new(),
        });
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            match &o.status {
                Status::Pass => writeln!(f, "PASS {}", o.name)?,
                Status::Fail => writeln!(f, "FAIL {}: {}", o.name, o.detail)?,
                Status::Skipped(why) => writeln!(f, "SKIP {} ({why})", o.name)?,
            }
        }
        Ok(())
    }
}

fn zero_form(f: Form) -> Option<String> {
    (!f.is_zero()).then(|| format!("residual {f:?}"))
}

fn zero_exprs(v: Vec<Expr>) -> Option<String> {
    (!v.iter().all(|e| e.is_zero())).then(|| format!("residual {v:?}"))
}

/// Which families of identities to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Operators,
    Variation,
    ConservationLaws,
    Jacobi,
    Noether,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

/// Runs every applicable identity for `λ` and the named fields.
pub fn identity_suite(
    bundle: &BundleSpec,
    lambda: &Form,
    fields: &[(String, VectorField)],
    suite: Suite,
) -> Result<IdentityReport> {
    lambda.density(bundle)?;
    let mut rep = IdentityReport::default();

    if suite.includes(Suite::Operators) {
        rep.record("euler_lagrange_two_routes".into(), (|| {
            let a = euler_lagrange(bundle, lambda)?;
            let b = euler_lagrange_via_interior(bundle, lambda)?;
            Ok(zero_form(a.form() - b.form()))
        })());
        rep.record("helmholtz_of_euler_lagrange".into(), (|| {
            let e = euler_lagrange(bundle, lambda)?;
            Ok(zero_form(helmholtz(bundle, &e)?.into_form()))
        })());
        rep.record("interior_euler_idempotent".into(), (|| {
            let d = exterior_derivative(bundle, lambda)?;
            if d.is_zero() {
                return Ok(None);
            }
            let i = interior_euler(bundle, &d)?;
            if i.is_zero() {
                return Ok(None);
            }
            let ii = interior_euler(bundle, i.form())?;
            Ok(zero_form(ii.form() - i.form()))
        })());
        rep.record("residual_decomposition".into(), (|| {
            let d = exterior_derivative(bundle, lambda)?;
            if d.is_zero() {
                return Ok(None);
            }
            let i = interior_euler(bundle, &d)?;
            let r = residual(bundle, &d)?;
            let k = 1;
            let back = exterior_derivative(bundle, &r.contact_part(k))?.contact_part(k);
            Ok(zero_form(&(&d.contact_part(k) - i.form()) - &back))
        })());
        rep.record("lepage_horizontal_part".into(), (|| {
            let theta = principal_lepage(bundle, lambda)?;
            Ok(zero_form(&theta.horizontal() - lambda))
        })());
        rep.record("lepage_euler_lagrange".into(), (|| {
            let theta = principal_lepage(bundle, lambda)?;
            let d = exterior_derivative(bundle, &theta)?.contact_part(1);
            let e = euler_lagrange(bundle, lambda)?;
            Ok(zero_form(&d - e.form()))
        })());
    }

    if suite.includes(Suite::Variation) {
        for (name, f) in fields {
            rep.record(format!("first_variation[{name}]"), (|| {
                Ok(zero_form(first_variation(bundle, lambda, f)?.residual()))
            })());
        }
        for (n1, f1) in fields {
            for (n2, f2) in fields {
                rep.record(format!("second_variation[{n1},{n2}]"), (|| {
                    Ok(zero_form(second_variation(bundle, lambda, f1, f2)?.residual()))
                })());
            }
        }
    }

    if suite.includes(Suite::ConservationLaws) {
        for (i, (n1, f1)) in fields.iter().enumerate() {
            for (n2, f2) in fields.iter().skip(i) {
                let tag = format!("[{n1},{n2}]");
                rep.record(format!("cons1{tag}"), (|| Ok(zero_form(cons1_residual(bundle, lambda, f1, f2)?)))());
                rep.record(format!("second_commutation{tag}"), (|| {
                    Ok(zero_form(second_commutation_residual(bundle, lambda, f1, f2)?))
                })());
                rep.record(format!("noether_antisymmetry{tag}"), (|| {
                    Ok(zero_form(noether_antisymmetry_residual(bundle, lambda, f1, f2)?))
                })());
            }
        }
    }

    if suite.includes(Suite::Jacobi) {
        for (name, f) in fields {
            rep.record(format!("jacobi_identity_a[{name}]"), (|| {
                Ok(zero_exprs(identity_a_residual(bundle, lambda, f)?))
            })());
            rep.record(format!("jacobi_identity_b[{name}]"), (|| {
                Ok(zero_exprs(identity_b_residual(bundle, lambda, f)?))
            })());
        }
        let jacobi: Vec<&(String, VectorField)> = fields
            .iter()
            .filter(|(_, f)| f.is_vertical() && is_jacobi_field(bundle, lambda, f).unwrap_or(false))
            .collect();
        for (n1, f1) in jacobi.iter().map(|p| (&p.0, &p.1)) {
            for (n2, f2) in jacobi.iter().map(|p| (&p.0, &p.1)) {
                rep.record(format!("jacobi_current_on_shell[{n1},{n2}]"), (|| {
                    let ex = jacobi_current_onshell(bundle, lambda, f1, f2)?;
                    Ok((!ex.vanishes_on_shell()).then(|| format!("remainder {:?}", ex.remainder)))
                })());
            }
        }
        for (n1, f1) in fields.iter().filter(|(_, f)| f.is_vertical()) {
            for (n2, f2) in fields {
                let name = format!("second_variation_conservation[{n1},{n2}]");
                match jacobi_variation_current(bundle, lambda, f1, f2) {
                    Ok(c) if c.preconditions() => rep.record(name, Ok(zero_form(c.current_divergence))),
                    Ok(_) => rep.skip(name, "preconditions not met"),
                    Err(e) => rep.record(name, Err(e)),
                }
            }
        }
    }

    if suite.includes(Suite::Noether) {
        let e = euler_lagrange_coefficients(bundle, &lambda.density(bundle)?)?;
        for (name, f) in fields {
            let total = iterated_lie_derivative(bundle, lambda, std::slice::from_ref(f))?;
            let label = format!("noether_conservation[{name}]");
            if !total.is_zero() {
                rep.skip(label, "not a symmetry");
                continue;
            }
            rep.record(label, (|| {
                let div = current_divergence(bundle, lambda, f)?.density(bundle)?;
                let ex = extract_e_linear(bundle, &div, &e)?;
                Ok((!ex.vanishes_on_shell()).then(|| format!("remainder {:?}", ex.remainder)))
            })());
        }
    }
    Ok(rep)
}
