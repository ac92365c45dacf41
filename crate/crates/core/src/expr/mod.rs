//! Exact polynomial expressions over jet coordinates.
//!
//! An [`Expr`] is a finite sum of monomials with [`BigRational`]
//! coefficients.  The map is always kept in normal form: monomials sorted,
//! like terms merged, zero coefficients dropped.  Structural equality is
//! therefore symbolic equality.

mod bundle;
mod calculus;
mod constants;
mod index;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use bundle::BundleSpec;
pub use calculus::{equal, equal_with_points, random_assignment};
pub use constants::{ConstFamily, IndexSymmetry};
pub use index::MultiIndex;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A polynomial variable.
///
/// Base and jet indices are 0-based.  Constant indices are kept exactly as
/// supplied by the caller (the DSL uses 1-based labels).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Indexed constant in canonical index order.
    Const(Arc<str>, SmallVec<[u16; 4]>),
    /// Base coordinate `x^i`.
    Base(u8),
    /// Jet coordinate `y^σ_I`.
    Jet(u16, MultiIndex),
    /// Formal derivative `d_I f^a` of an auxiliary function of the base.
    Aux(u16, MultiIndex),
}

impl Var {
    pub fn jet_order(&self) -> Option<usize> {
        match self {
            Var::Jet(_, i) => Some(i.len()),
            _ => None,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Var::Const(..))
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Const(name, idx) => {
                write!(f, "{name}")?;
                if !idx.is_empty() {
                    let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                    write!(f, "[{}]", parts.join(","))?;
                }
                Ok(())
            }
            Var::Base(i) => write!(f, "x{}", i + 1),
            Var::Jet(s, i) => write!(f, "y{}{:?}", s + 1, i),
            Var::Aux(a, i) => write!(f, "f{}{:?}", a + 1, i),
        }
    }
}

/// Product of variables with positive exponents, sorted by variable.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        let mut s = SmallVec::new();
        s.push((v, 1));
        Monomial(s)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        Monomial(out)
    }

    /// Lowers the exponent of `v` by one.  Panics if `v` is absent.
    pub fn reduce(&self, v: &Var) -> Monomial {
        let mut out = self.0.clone();
        let k = out
            .binary_search_by(|(w, _)| w.cmp(v))
            .expect("variable not present in monomial");
        if out[k].1 == 1 {
            out.remove(k);
        } else {
            out[k].1 -= 1;
        }
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn divide(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.0.clone();
        for (v, e) in other.0.iter() {
            let k = out.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
            if out[k].1 < *e {
                return None;
            }
            if out[k].1 == *e {
                out.remove(k);
            } else {
                out[k].1 -= e;
            }
        }
        Some(Monomial(out))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v:?}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in normal form.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Expr::term(Monomial::one(), c)
    }

    pub fn integer(n: i64) -> Self {
        Expr::constant(int(n))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn var(v: Var) -> Self {
        Expr::term(Monomial::var(v), Rational::one())
    }

    pub fn base(i: usize) -> Self {
        Expr::var(Var::Base(i as u8))
    }

    pub fn jet(fibre: usize, index: MultiIndex) -> Self {
        Expr::var(Var::Jet(fibre as u16, index))
    }

    pub fn aux(func: usize, index: MultiIndex) -> Self {
        Expr::var(Var::Aux(func as u16, index))
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut e = Expr::zero();
        for (m, c) in it {
            e.add_term(m, c);
        }
        e
    }

    /// The value if this is a constant polynomial.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &Expr, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (m, c) in other.terms.iter() {
            self.add_term(m.clone(), c * factor);
        }
    }

    /// `self += coeff * mono * other`.
    pub fn add_product_term(&mut self, mono: &Monomial, coeff: &Rational, other: &Expr) {
        if coeff.is_zero() {
            return;
        }
        for (m, c) in other.terms.iter() {
            self.add_term(mono.mul(m), c * coeff);
        }
    }

    pub fn scale(&self, factor: &Rational) -> Expr {
        if factor.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Expr {
        let mut out = Expr::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to a stored variable.
    pub fn partial(&self, v: &Var) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in self.terms.iter() {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(m.reduce(v), c * int(e as i64));
            }
        }
        out
    }

    /// Replaces variables by expressions; `None` keeps the variable.
    pub fn substitute<F: FnMut(&Var) -> Option<Expr>>(&self, mut f: F) -> Expr {
        let mut cache: BTreeMap<Var, Option<Expr>> = BTreeMap::new();
        let mut out = Expr::zero();
        for (m, c) in self.terms.iter() {
            let mut kept = Monomial::one();
            let mut acc = Expr::one();
            for (v, e) in m.factors() {
                let sub = cache.entry(v.clone()).or_insert_with(|| f(v));
                match sub {
                    Some(s) => acc = &acc * &s.pow(*e),
                    None => {
                        let mut mm = Monomial::one();
                        for _ in 0..*e {
                            mm = mm.mul(&Monomial::var(v.clone()));
                        }
                        kept = kept.mul(&mm);
                    }
                }
            }
            out.add_product_term(&kept, c, &acc);
        }
        out
    }

    /// Exact evaluation under an assignment of every variable.
    pub fn eval<F: FnMut(&Var) -> Option<Rational>>(&self, mut value: F) -> Result<Rational> {
        let mut cache: BTreeMap<Var, Rational> = BTreeMap::new();
        let mut total = Rational::zero();
        for (m, c) in self.terms.iter() {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let x = match cache.get(v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = value(v).ok_or_else(|| Error::MissingAssignment(format!("{v:?}")))?;
                        cache.insert(v.clone(), x.clone());
                        x
                    }
                };
                t *= num_traits::pow(x, *e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.factors() {
                out.insert(v.clone());
            }
        }
        out
    }

    /// Highest jet order appearing, 0 when no jet coordinate occurs.
    pub fn jet_order(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().filter_map(|(v, _)| v.jet_order()))
            .max()
            .unwrap_or(0)
    }

    pub fn has_var<P: Fn(&Var) -> bool>(&self, pred: P) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|(v, _)| pred(v)))
    }

    /// Jet coordinates `y^σ_I` present, as `(σ, I)`.
    pub fn jet_vars(&self) -> BTreeSet<(usize, MultiIndex)> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Jet(s, i) => Some((s as usize, i)),
                _ => None,
            })
            .collect()
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m:?}")?;
            } else {
                write!(f, "{c}*{m:?}")?;
            }
        }
        Ok(())
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Self {
        Expr::constant(c)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::integer(n)
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in rhs.terms.iter() {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign<Expr> for Expr {
    fn add_assign(&mut self, rhs: Expr) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            for (m, c) in lhs.terms {
                self.add_term(m, c);
            }
        } else {
            for (m, c) in rhs.terms {
                self.add_term(m, c);
            }
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (m, c) in rhs.terms.iter() {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign<Expr> for Expr {
    fn sub_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        self += rhs;
        self
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(mut self, rhs: Expr) -> Expr {
        self -= rhs;
        self
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let (small, large) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = Expr::zero();
        for (m, c) in small.terms.iter() {
            out.add_product_term(m, c, large);
        }
        out
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl Mul<&Rational> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Rational) -> Expr {
        self.scale(rhs)
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut out = Expr::zero();
        for e in iter {
            out += e;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(s: usize, idx: &[usize]) -> Expr {
        Expr::jet(s, MultiIndex::new(idx.iter().copied()))
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let a = y(0, &[0]);
        let e = &(&a + &a) - &a.scale(&int(2));
        assert!(e.is_zero());
        let s = &a * &a;
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&Monomial::var(Var::Jet(0, MultiIndex::single(0))).mul(&Monomial::var(Var::Jet(0, MultiIndex::single(0))))), int(1));
    }

    #[test]
    fn partial_of_power() {
        let v = Var::Jet(0, MultiIndex::single(0));
        let e = Expr::var(v.clone()).pow(3).scale(&rat(1, 3));
        assert_eq!(e.partial(&v), Expr::var(v).pow(2));
    }

    #[test]
    fn substitution_and_eval_agree() {
        let x = Expr::base(0);
        let e = &(&x * &y(0, &[])) + &Expr::integer(3);
        let s = e.substitute(|v| matches!(v, Var::Base(0)).then(|| Expr::integer(2)));
        assert_eq!(s, &y(0, &[]).scale(&int(2)) + &Expr::integer(3));
        let val = e
            .eval(|v| match v {
                Var::Base(_) => Some(rat(1, 2)),
                Var::Jet(..) => Some(int(4)),
                _ => None,
            })
            .unwrap();
        assert_eq!(val, int(5));
    }

    #[test]
    fn eval_reports_missing_variable() {
        let e = y(1, &[0, 1]);
        assert!(matches!(e.eval(|_| None), Err(Error::MissingAssignment(_))));
    }

    #[test]
    fn monomial_division() {
        let a = Monomial::var(Var::Base(0));
        let b = Monomial::var(Var::Base(1));
        let ab2 = a.mul(&b).mul(&b);
        assert_eq!(ab2.divide(&b.mul(&b)), Some(a.clone()));
        assert_eq!(a.divide(&b), None);
    }
}
