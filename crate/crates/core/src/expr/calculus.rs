use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Expr, Rational, Var};
use crate::error::{Error, Result};

/// Number of random rational points used to cross-check `equal`.
pub const CHECK_POINTS: usize = 8;

/// Assigns a random rational to every variable of the given expressions.
pub fn random_assignment(exprs: &[&Expr], rng: &mut ChaCha8Rng) -> BTreeMap<Var, Rational> {
    let vars: BTreeSet<Var> = exprs.iter().flat_map(|e| e.vars()).collect();
    vars.into_iter()
        .map(|v| {
            let num: i64 = rng.gen_range(-97..=97);
            let den: i64 = rng.gen_range(1..=13);
            (v, Rational::new(BigInt::from(num), BigInt::from(den)))
        })
        .collect()
}

/// Decides `a == b` by normal form and confirms the verdict numerically.
///
/// A disagreement between the two methods is an internal error: it means
/// the normal form is broken, never that the inputs differ.
pub fn equal(a: &Expr, b: &Expr, seed: u64) -> Result<bool> {
    equal_with_points(a, b, seed, CHECK_POINTS)
}

pub fn equal_with_points(a: &Expr, b: &Expr, seed: u64, points: usize) -> Result<bool> {
    let diff = a - b;
    let symbolic = diff.is_zero();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_zero = true;
    // Evaluate both sides separately so the check does not reuse the
    // normal-form subtraction it is meant to validate.
    for _ in 0..points {
        let point = random_assignment(&[a, b], &mut rng);
        let va = a.eval(|v| point.get(v).cloned())?;
        let vb = b.eval(|v| point.get(v).cloned())?;
        if va != vb {
            all_zero = false;
            break;
        }
    }
    if symbolic && !all_zero {
        return Err(Error::Inconsistency(
            "normal form says equal but a sample point disagrees".into(),
        ));
    }
    if !symbolic && all_zero && !diff.max_abs_coefficient().is_zero() {
        return Err(Error::Inconsistency(format!(
            "normal form differs but {points} sample points agree"
        )));
    }
    Ok(symbolic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{int, MultiIndex};

    #[test]
    fn equal_detects_difference() {
        let x = Expr::base(0);
        let y = Expr::jet(0, MultiIndex::empty());
        let a = (&x + &y).pow(2);
        let b = &(&(&x * &x) + &(&y * &y)) + &(&x * &y).scale(&int(2));
        assert!(equal(&a, &b, 1).unwrap());
        assert!(!equal(&a, &(&b + &Expr::one()), 1).unwrap());
    }
}
