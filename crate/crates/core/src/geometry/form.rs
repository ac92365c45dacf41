use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::expr::{int, BundleSpec, Expr, MultiIndex, Rational, Var};

/// A basis 1-form of the contact frame.
///
/// The derived order puts every `dx^i` before every `ω^σ_I`, and orders
/// contact factors by `(σ, I)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Factor {
    Dx(u8),
    Omega(u16, MultiIndex),
}

impl Factor {
    pub fn dx(i: usize) -> Self {
        Factor::Dx(i as u8)
    }

    pub fn omega(fibre: usize, index: MultiIndex) -> Self {
        Factor::Omega(fibre as u16, index)
    }

    pub fn is_contact(&self) -> bool {
        matches!(self, Factor::Omega(..))
    }
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Dx(i) => write!(f, "dx{}", i + 1),
            Factor::Omega(s, i) => write!(f, "w{}{:?}", s + 1, i),
        }
    }
}

pub type Basis = SmallVec<[Factor; 6]>;

/// Sorts factors, returning the permutation sign, or `None` on a repeat.
fn sort_basis(mut b: Basis) -> Option<(Basis, bool)> {
    let mut negative = false;
    for i in 1..b.len() {
        let mut j = i;
        while j > 0 && b[j - 1] > b[j] {
            b.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if b.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((b, negative))
    }
}

pub fn contact_degree(b: &[Factor]) -> usize {
    b.iter().filter(|f| f.is_contact()).count()
}

/// Differential form with polynomial coefficients in the contact basis.
///
/// Terms may have mixed degree; every operation acts term by term.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Form {
    terms: BTreeMap<Basis, Expr>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn scalar(f: Expr) -> Self {
        Form::monomial(f, Basis::new())
    }

    /// `coeff · f1 ∧ ... ∧ fk`, with the factors in any order.
    pub fn monomial(coeff: Expr, factors: Basis) -> Self {
        let mut out = Form::zero();
        out.add_term(factors, coeff);
        out
    }

    pub fn dx(i: usize) -> Self {
        Form::monomial(Expr::one(), smallvec::smallvec![Factor::dx(i)])
    }

    pub fn omega(fibre: usize, index: MultiIndex) -> Self {
        Form::monomial(Expr::one(), smallvec::smallvec![Factor::omega(fibre, index)])
    }

    /// `dy^σ_I = ω^σ_I + y^σ_{Ii} dx^i`, converting from the holonomic basis.
    pub fn dy(bundle: &BundleSpec, fibre: usize, index: MultiIndex) -> Result<Self> {
        bundle.check_order(index.len() + 1)?;
        let mut out = Form::omega(fibre, index.clone());
        for i in 0..bundle.n() {
            out += &Form::dx(i).scale(&Expr::jet(fibre, index.with(i)));
        }
        Ok(out)
    }

    /// `ds = dx^1 ∧ ... ∧ dx^n`.
    pub fn volume(bundle: &BundleSpec) -> Self {
        Form::monomial(Expr::one(), (0..bundle.n()).map(Factor::dx).collect())
    }

    /// `ds_i = ∂/∂x^i ⌋ ds`.
    pub fn volume_i(bundle: &BundleSpec, i: usize) -> Self {
        let factors: Basis = (0..bundle.n()).filter(|&j| j != i).map(Factor::dx).collect();
        let sign = if i.is_multiple_of(2) { 1 } else { -1 };
        Form::monomial(Expr::integer(sign), factors)
    }

    /// Horizontal n-form `L ds`.
    pub fn lagrangian(bundle: &BundleSpec, density: Expr) -> Self {
        Form::volume(bundle).scale(&density)
    }

    /// Adds `coeff · factors`, sorting the factors with sign.
    pub fn add_term(&mut self, factors: Basis, coeff: Expr) {
        if coeff.is_zero() {
            return;
        }
        let Some((sorted, negative)) = sort_basis(factors) else {
            return;
        };
        let coeff = if negative { -coeff } else { coeff };
        match self.terms.entry(sorted) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &Expr)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Basis, Expr)> {
        self.terms.into_iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, factors: &[Factor]) -> Expr {
        let b: Basis = factors.iter().cloned().collect();
        match sort_basis(b) {
            None => Expr::zero(),
            Some((sorted, negative)) => {
                let c = self.terms.get(&sorted).cloned().unwrap_or_default();
                if negative {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// Multiplies every coefficient by a 0-form.
    pub fn scale(&self, f: &Expr) -> Form {
        let mut out = Form::zero();
        for (b, c) in self.terms.iter() {
            out.add_term(b.clone(), c * f);
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Form {
        let mut out = Form::zero();
        for (b, c) in self.terms.iter() {
            out.add_term(b.clone(), c.scale(r));
        }
        out
    }

    pub fn map_coefficients<F: FnMut(&Expr) -> Expr>(&self, mut f: F) -> Form {
        let mut out = Form::zero();
        for (b, c) in self.terms.iter() {
            out.add_term(b.clone(), f(c));
        }
        out
    }

    pub fn try_map_coefficients<F: FnMut(&Expr) -> Result<Expr>>(&self, mut f: F) -> Result<Form> {
        let mut out = Form::zero();
        for (b, c) in self.terms.iter() {
            out.add_term(b.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (b1, c1) in self.terms.iter() {
            for (b2, c2) in other.terms.iter() {
                let mut b: Basis = b1.clone();
                b.extend(b2.iter().cloned());
                out.add_term(b, c1 * c2);
            }
        }
        out
    }

    /// Degrees present, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|b| b.len()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// The degree, if all terms share one.
    pub fn degree(&self) -> Option<usize> {
        match self.degrees().as_slice() {
            [] => Some(0),
            [d] => Some(*d),
            _ => None,
        }
    }

    /// `p_k ρ`: the part with exactly `k` contact factors.
    ///
    /// Forms are stored in the contact basis, so the contact split of a form
    /// is read off term by term.
    pub fn contact_part(&self, k: usize) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| contact_degree(b) == k)
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    /// `h ρ = p_0 ρ`.
    pub fn horizontal(&self) -> Form {
        self.contact_part(0)
    }

    /// `[p_0 ρ, p_1 ρ, ...]` up to the highest contact degree present.
    pub fn contact_split(&self) -> Vec<Form> {
        let top = self.terms.keys().map(|b| contact_degree(b)).max().unwrap_or(0);
        (0..=top).map(|k| self.contact_part(k)).collect()
    }

    pub fn max_contact_degree(&self) -> usize {
        self.terms.keys().map(|b| contact_degree(b)).max().unwrap_or(0)
    }

    /// Highest `|I|` over contact factors `ω^σ_I` present.
    pub fn max_omega_order(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|b| {
                b.iter().filter_map(|f| match f {
                    Factor::Omega(_, i) => Some(i.len()),
                    _ => None,
                })
            })
            .max()
    }

    /// Highest jet order among coefficients.
    pub fn coefficient_order(&self) -> usize {
        self.terms.values().map(|c| c.jet_order()).max().unwrap_or(0)
    }

    /// Order of the smallest jet space that carries the form: coefficients of
    /// order `r` and contact factors `ω_I` with `|I| + 1 ≤ r`.
    pub fn order(&self) -> usize {
        let w = self.max_omega_order().map(|o| o + 1).unwrap_or(0);
        w.max(self.coefficient_order())
    }

    /// The coefficient of `ds` if this is a horizontal n-form.
    pub fn density(&self, bundle: &BundleSpec) -> Result<Expr> {
        let vol: Basis = (0..bundle.n()).map(Factor::dx).collect();
        let mut out = Expr::zero();
        for (b, c) in self.terms.iter() {
            if *b != vol {
                return Err(Error::NotHorizontal { expected: bundle.n() });
            }
            out = c.clone();
        }
        Ok(out)
    }

    /// Coefficients `f^i` of a horizontal (n-1)-form `Σ f^i ds_i`.
    pub fn current_components(&self, bundle: &BundleSpec) -> Result<Vec<Expr>> {
        let n = bundle.n();
        let mut out = vec![Expr::zero(); n];
        for (b, c) in self.terms.iter() {
            if b.len() + 1 != n || contact_degree(b) != 0 {
                return Err(Error::NotHorizontal { expected: n - 1 });
            }
            let missing = (0..n)
                .find(|&j| !b.contains(&Factor::dx(j)))
                .expect("n-1 distinct dx factors");
            // dx^1..^i..dx^n = (-1)^i ds_i (0-based i)
            out[missing] = if missing % 2 == 0 { c.clone() } else { -c };
        }
        Ok(out)
    }

    pub fn substitute<F: FnMut(&Var) -> Option<Expr>>(&self, mut f: F) -> Form {
        self.map_coefficients(|c| c.substitute(&mut f))
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})")?;
            for fac in b.iter() {
                write!(f, "^{fac:?}")?;
            }
        }
        Ok(())
    }
}

impl std::ops::AddAssign<&Form> for Form {
    fn add_assign(&mut self, rhs: &Form) {
        for (b, c) in rhs.terms.iter() {
            match self.terms.entry(b.clone()) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
    }
}

impl std::ops::AddAssign<Form> for Form {
    fn add_assign(&mut self, rhs: Form) {
        for (b, c) in rhs.terms {
            match self.terms.entry(b) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += c;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
    }
}

impl std::ops::SubAssign<&Form> for Form {
    fn sub_assign(&mut self, rhs: &Form) {
        *self += &(-rhs);
    }
}

impl std::ops::Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::Add for Form {
    type Output = Form;
    fn add(mut self, rhs: Form) -> Form {
        self += rhs;
        self
    }
}

impl std::ops::Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl std::ops::Sub for Form {
    type Output = Form;
    fn sub(mut self, rhs: Form) -> Form {
        self -= &rhs;
        self
    }
}

impl std::ops::Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl std::iter::Sum for Form {
    fn sum<I: Iterator<Item = Form>>(iter: I) -> Form {
        let mut out = Form::zero();
        for f in iter {
            out += f;
        }
        out
    }
}

/// `df = d_i f dx^i + Σ ∂f/∂y^σ_J ω^σ_J` for a 0-form.
pub fn differential(bundle: &BundleSpec, f: &Expr) -> Result<Form> {
    let mut out = Form::zero();
    for i in 0..bundle.n() {
        let c = bundle.total_derivative(f, i)?;
        out.add_term(smallvec::smallvec![Factor::dx(i)], c);
    }
    for (s, idx) in f.jet_vars() {
        let c = bundle.partial_jet(f, s, &idx);
        out.add_term(smallvec::smallvec![Factor::omega(s, idx)], c);
    }
    Ok(out)
}

/// `d ω^σ_I = Σ_i dx^i ∧ ω^σ_{Ii}`.
fn d_omega(bundle: &BundleSpec, fibre: u16, index: &MultiIndex) -> Result<Form> {
    bundle.check_order(index.len() + 2)?;
    let mut out = Form::zero();
    for i in 0..bundle.n() {
        out.add_term(
            smallvec::smallvec![Factor::Dx(i as u8), Factor::Omega(fibre, index.with(i))],
            Expr::one(),
        );
    }
    Ok(out)
}

/// Exterior derivative in the contact basis.
pub fn exterior_derivative(bundle: &BundleSpec, rho: &Form) -> Result<Form> {
    let mut out = Form::zero();
    for (b, c) in rho.terms() {
        let rest = Form::monomial(Expr::one(), b.clone());
        out += differential(bundle, c)?.wedge(&rest);
        for (j, fac) in b.iter().enumerate() {
            if let Factor::Omega(s, idx) = fac {
                let before = Form::monomial(Expr::one(), b[..j].iter().cloned().collect());
                let after = Form::monomial(Expr::one(), b[j + 1..].iter().cloned().collect());
                let piece = before.wedge(&d_omega(bundle, *s, idx)?).wedge(&after);
                let sign = if j % 2 == 0 { c.clone() } else { -c };
                out += piece.scale(&sign);
            }
        }
    }
    Ok(out)
}

/// `d_H ρ = Σ_l p_l d p_l ρ`.
pub fn horizontal_differential(bundle: &BundleSpec, rho: &Form) -> Result<Form> {
    let mut out = Form::zero();
    for (k, part) in rho.contact_split().into_iter().enumerate() {
        if !part.is_zero() {
            out += exterior_derivative(bundle, &part)?.contact_part(k);
        }
    }
    Ok(out)
}

/// `d_V ρ = Σ_l p_{l+1} d p_l ρ`.
pub fn vertical_differential(bundle: &BundleSpec, rho: &Form) -> Result<Form> {
    let mut out = Form::zero();
    for (k, part) in rho.contact_split().into_iter().enumerate() {
        if !part.is_zero() {
            out += exterior_derivative(bundle, &part)?.contact_part(k + 1);
        }
    }
    Ok(out)
}

/// Formal derivative of a form: `d_i` on coefficients, `d_i ω^σ_I = ω^σ_{Ii}`,
/// `d_i dx^j = 0`.
pub fn formal_derivative(bundle: &BundleSpec, rho: &Form, i: usize) -> Result<Form> {
    let mut out = Form::zero();
    for (b, c) in rho.terms() {
        out.add_term(b.clone(), bundle.total_derivative(c, i)?);
        for (j, fac) in b.iter().enumerate() {
            if let Factor::Omega(s, idx) = fac {
                bundle.check_order(idx.len() + 2)?;
                let mut nb = b.clone();
                nb[j] = Factor::Omega(*s, idx.with(i));
                out.add_term(nb, c.clone());
            }
        }
    }
    Ok(out)
}

/// `d_I ρ` for a sorted multi-index.
pub fn formal_derivative_multi(bundle: &BundleSpec, rho: &Form, index: &MultiIndex) -> Result<Form> {
    let mut out = rho.clone();
    for i in index.iter() {
        if out.is_zero() {
            break;
        }
        out = formal_derivative(bundle, &out, i)?;
    }
    Ok(out)
}

/// Pullback along the section `y^σ = γ^σ(x)`: jet coordinates become
/// derivatives of `γ`, `dx` stays, and `ω^σ_I` pulls back to zero.
///
/// The contact factor is expanded through its definition
/// `ω^σ_I = dy^σ_I - y^σ_{Ii} dx^i` rather than dropped, so the vanishing is
/// computed rather than assumed.
pub fn pullback(bundle: &BundleSpec, rho: &Form, section: &[Expr]) -> Result<Form> {
    if section.len() != bundle.m() {
        return Err(Error::Arity(format!(
            "section needs {} components, got {}",
            bundle.m(),
            section.len()
        )));
    }
    let jet = |s: usize, idx: &MultiIndex| -> Result<Expr> {
        let mut e = section[s].clone();
        for i in idx.iter() {
            e = bundle.partial_base(&e, i)?;
        }
        Ok(e)
    };
    let sub = |c: &Expr| -> Result<Expr> {
        let mut err = None;
        let out = c.substitute(|v| match v {
            Var::Jet(s, idx) => match jet(*s as usize, idx) {
                Ok(e) => Some(e),
                Err(e) => {
                    err = Some(e);
                    Some(Expr::zero())
                }
            },
            _ => None,
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    };
    let mut total = Form::zero();
    for (b, c) in rho.terms() {
        let mut out = Form::scalar(sub(c)?);
        for fac in b.iter() {
            let piece = match fac {
                Factor::Dx(i) => Form::dx(*i as usize),
                Factor::Omega(s, idx) => {
                    let s = *s as usize;
                    let mut w = Form::zero();
                    let g = jet(s, idx)?;
                    for i in 0..bundle.n() {
                        // d(γ_I) - γ_{Ii} dx^i
                        let a = bundle.partial_base(&g, i)?;
                        let b = jet(s, &idx.with(i))?;
                        w += Form::dx(i).scale(&(&a - &b));
                    }
                    w
                }
            };
            out = out.wedge(&piece);
        }
        total += &out;
    }
    Ok(total)
}

/// `1/k` as a rational, used by several operators.
pub(crate) fn reciprocal(k: usize) -> Rational {
    Rational::one() / int(k as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b11() -> BundleSpec {
        BundleSpec::new(1, 1, 6).unwrap()
    }

    #[test]
    fn wedge_sign_and_repeat() {
        let b = BundleSpec::new(2, 1, 4).unwrap();
        let a = Form::dx(1).wedge(&Form::dx(0));
        assert_eq!(a, -Form::volume(&b));
        assert!(Form::dx(0).wedge(&Form::dx(0)).is_zero());
    }

    #[test]
    fn contact_split_of_dy_wedge_dx() {
        let b = b11();
        let rho = Form::dy(&b, 0, MultiIndex::empty()).unwrap().wedge(&Form::dx(0));
        let split = rho.contact_split();
        assert!(split[0].is_zero());
        assert_eq!(split[1], Form::omega(0, MultiIndex::empty()).wedge(&Form::dx(0)));
    }

    #[test]
    fn d_of_function_of_first_jet() {
        let b = b11();
        let f = b.y(0, &[0]);
        let df = exterior_derivative(&b, &Form::scalar(f)).unwrap();
        let expect = Form::omega(0, MultiIndex::single(0)) + Form::dx(0).scale(&b.y(0, &[0, 0]));
        assert_eq!(df, expect);
    }

    #[test]
    fn d_squared_vanishes_on_contact_form() {
        let b = BundleSpec::new(2, 1, 6).unwrap();
        let rho = Form::omega(0, MultiIndex::single(1)).scale(&(&b.y(0, &[0]) * &b.x(1)));
        let dd = exterior_derivative(&b, &exterior_derivative(&b, &rho).unwrap()).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn horizontal_differential_formula() {
        // d_H ρ = (-1)^q d_i ρ ∧ dx^i
        let b = BundleSpec::new(2, 1, 6).unwrap();
        let rho = Form::omega(0, MultiIndex::empty()).scale(&b.y(0, &[1]));
        let dh = horizontal_differential(&b, &rho).unwrap();
        let mut alt = Form::zero();
        for i in 0..2 {
            alt += formal_derivative(&b, &rho, i).unwrap().wedge(&Form::dx(i));
        }
        assert_eq!(dh, -alt);
    }

    #[test]
    fn volume_i_contracts_volume() {
        let b = BundleSpec::new(3, 1, 2).unwrap();
        for i in 0..3 {
            assert_eq!(Form::dx(i).wedge(&Form::volume_i(&b, i)), Form::volume(&b));
        }
    }

    #[test]
    fn contact_forms_pull_back_to_zero() {
        let b = BundleSpec::new(2, 1, 6).unwrap();
        let gamma = vec![&(&b.x(0) * &b.x(1)) + &b.x(0).pow(3)];
        let w = Form::omega(0, MultiIndex::single(0)).wedge(&Form::dx(1));
        assert!(pullback(&b, &w, &gamma).unwrap().is_zero());
        let h = Form::dx(0).scale(&b.y(0, &[0]));
        assert_eq!(
            pullback(&b, &h, &gamma).unwrap(),
            Form::dx(0).scale(&(&b.x(1) + &b.x(0).pow(2).scale(&int(3))))
        );
    }
}
