use std::collections::{BTreeMap, BTreeSet};

use num_integer::binomial;
use num_traits::One;

use crate::error::{Error, Result};
use crate::expr::{int, rat, BundleSpec, MultiIndex, Rational};
use crate::geometry::{formal_derivative_multi, interior_product, reciprocal, Factor, Form, FrameField};

use super::source::{strip_volume, SourceForm};

/// Splits off `p_k ρ` of an `(n+k)`-form, `k ≥ 1`.
pub(crate) fn contact_component(bundle: &BundleSpec, rho: &Form) -> Result<(usize, Form)> {
    let n = bundle.n();
    let deg = rho
        .degree()
        .ok_or_else(|| Error::Contact("form of mixed degree".into()))?;
    if rho.is_zero() {
        return Err(Error::Contact("zero form has no contact degree".into()));
    }
    if deg <= n {
        return Err(Error::Contact(format!(
            "expected an (n+k)-form with k ≥ 1, got degree {deg} with n = {n}"
        )));
    }
    let k = deg - n;
    Ok((k, rho.contact_part(k)))
}

fn omega_indices(rho: &Form) -> BTreeSet<(usize, MultiIndex)> {
    rho.terms()
        .flat_map(|(b, _)| {
            b.iter()
                .filter_map(|f| match f {
                    Factor::Omega(s, i) => Some((*s as usize, i.clone())),
                    _ => None,
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

fn sign(len: usize) -> Rational {
    if len.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Interior Euler operator
/// `I(ρ) = (1/k) ω^σ ∧ Σ_I (-1)^{|I|} d_I (∂/∂y^σ_I ⌋ p_k ρ)`.
pub fn interior_euler(bundle: &BundleSpec, rho: &Form) -> Result<SourceForm> {
    let (k, pk) = contact_component(bundle, rho)?;
    let mut per_fibre: BTreeMap<usize, Form> = BTreeMap::new();
    for (s, idx) in omega_indices(&pk) {
        let unit = FrameField::unit_vertical(bundle, s, idx.clone());
        let c = interior_product(&unit, &pk)?;
        let d = formal_derivative_multi(bundle, &c, &idx)?;
        *per_fibre.entry(s).or_default() += d.scale_rational(&sign(idx.len()));
    }
    let mut out = Form::zero();
    for (s, acc) in per_fibre {
        out += Form::omega(s, MultiIndex::empty()).wedge(&acc);
    }
    SourceForm::new(bundle, k, out.scale_rational(&reciprocal(k)))
}

/// All sub-multisets of `m`.
fn sub_multisets(m: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::empty()];
    for i in m.distinct() {
        let mult = m.multiplicity(i);
        out = out
            .into_iter()
            .flat_map(|base| {
                (0..=mult).map(move |c| {
                    let mut e = base.clone();
                    for _ in 0..c {
                        e = e.with(i);
                    }
                    e
                })
            })
            .collect();
    }
    out
}

/// Weight of `d_J η^{IJ}` in `ζ^I` for sorted multi-indices.
///
/// Summing over sorted representatives splits the length binomial
/// `C(|I|+|J|, |J|)` of the ordered-tuple convention into a product over
/// directions.
fn zeta_weight(i: &MultiIndex, j: &MultiIndex) -> Rational {
    let mut w: u64 = 1;
    for d in i.union(j).distinct() {
        let (a, b) = (i.multiplicity(d) as u64, j.multiplicity(d) as u64);
        w *= binomial(a + b, b);
    }
    int(w as i64)
}

/// Residual operator `R(ρ)`, a strongly contact `(n+k-1)`-form with
/// `p_k ρ = I(ρ) + p_k d p_k R(ρ)`.
///
/// With `p_k ρ = Σ ω^σ_I ∧ η^I_σ`, `ζ^I_σ = Σ_J (-1)^{|J|} w(I,J) d_J η^{IJ}_σ`
/// and `ω^σ ∧ ζ^I_σ = χ^I ∧ ds`,
/// `R(ρ) = (-1)^k Σ_{|I|≥1} Σ_j (m_j(I)/|I|) d_{I∖j} χ^I ∧ ds_j`.
/// The weight `m_j/|I|` distributes each multi-index over its possible last
/// entries exactly as a sum over ordered tuples does.
pub fn residual(bundle: &BundleSpec, rho: &Form) -> Result<Form> {
    let (k, pk) = contact_component(bundle, rho)?;
    let inv_k = reciprocal(k);
    let mut eta: BTreeMap<(usize, MultiIndex), Form> = BTreeMap::new();
    for (s, idx) in omega_indices(&pk) {
        let unit = FrameField::unit_vertical(bundle, s, idx.clone());
        let c = interior_product(&unit, &pk)?.scale_rational(&inv_k);
        eta.insert((s, idx), c);
    }

    let mut zeta: BTreeMap<(usize, MultiIndex), Form> = BTreeMap::new();
    for ((s, m), form) in eta.iter() {
        for i in sub_multisets(m) {
            if i.is_empty() {
                continue;
            }
            let j = m.minus(&i).expect("sub-multiset");
            let w = &zeta_weight(&i, &j) * &sign(j.len());
            let term = formal_derivative_multi(bundle, form, &j)?.scale_rational(&w);
            *zeta.entry((*s, i)).or_default() += term;
        }
    }

    let mut chi: BTreeMap<MultiIndex, Form> = BTreeMap::new();
    for ((s, i), z) in zeta {
        let w = Form::omega(s, MultiIndex::empty()).wedge(&z);
        *chi.entry(i).or_default() += strip_volume(bundle, &w)?;
    }

    let mut out = Form::zero();
    for (i, c) in chi.iter() {
        if c.is_zero() {
            continue;
        }
        for j in i.distinct() {
            let rest = i.without(j).expect("j in I");
            let weight = rat(i.multiplicity(j) as i64, i.len() as i64);
            let piece = formal_derivative_multi(bundle, c, &rest)?
                .wedge(&Form::volume_i(bundle, j))
                .scale_rational(&weight);
            out += piece;
        }
    }
    Ok(out.scale_rational(&sign(k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::geometry::exterior_derivative;

    #[test]
    fn residual_of_free_particle() {
        let b = BundleSpec::new(1, 1, 6).unwrap();
        let lam = Form::lagrangian(&b, b.y(0, &[0]).pow(2).scale(&rat(1, 2)));
        let dl = exterior_derivative(&b, &lam).unwrap();
        let r = residual(&b, &dl).unwrap();
        assert_eq!(r, Form::omega(0, MultiIndex::empty()).scale(&-b.y(0, &[0])));
    }

    #[test]
    fn interior_euler_of_free_particle() {
        let b = BundleSpec::new(1, 1, 6).unwrap();
        let lam = Form::lagrangian(&b, b.y(0, &[0]).pow(2).scale(&rat(1, 2)));
        let dl = exterior_derivative(&b, &lam).unwrap();
        let e = interior_euler(&b, &dl).unwrap();
        assert_eq!(e.coefficients(&b).unwrap(), vec![-b.y(0, &[0, 0])]);
    }

    #[test]
    fn sub_multisets_of_repeated_index() {
        let m = MultiIndex::new([0, 0, 1]);
        assert_eq!(sub_multisets(&m).len(), 6);
    }

    #[test]
    fn zeta_weight_matches_length_binomial_in_one_direction() {
        let i = MultiIndex::new([0]);
        let j = MultiIndex::new([0, 0]);
        assert_eq!(zeta_weight(&i, &j), int(3));
        let i2 = MultiIndex::new([0]);
        let j2 = MultiIndex::new([1]);
        assert_eq!(zeta_weight(&i2, &j2), int(1));
    }

    #[test]
    fn rejects_horizontal_input() {
        let b = BundleSpec::new(1, 1, 4).unwrap();
        let lam = Form::lagrangian(&b, Expr::one());
        assert!(interior_euler(&b, &lam).is_err());
    }
}
