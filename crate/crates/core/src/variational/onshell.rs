use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::Result;
use crate::expr::{BundleSpec, Expr, Monomial, MultiIndex, Rational, Var};

/// `f = Σ C^{σ,J} d_J E_σ + remainder`.
#[derive(Clone, Debug, Default)]
pub struct Extraction {
    pub multipliers: BTreeMap<(usize, MultiIndex), Expr>,
    pub remainder: Expr,
}

impl Extraction {
    pub fn vanishes_on_shell(&self) -> bool {
        self.remainder.is_zero()
    }
}

/// Ranking used to pick leading monomials: jet coordinates of higher order
/// dominate, then auxiliary functions, base coordinates and constants.
fn rank(v: &Var) -> (u8, usize, &Var) {
    match v {
        Var::Jet(_, i) => (3, i.len(), v),
        Var::Aux(_, i) => (2, i.len(), v),
        Var::Base(_) => (1, 0, v),
        Var::Const(..) => (0, 0, v),
    }
}

/// Lexicographic monomial order under `rank`.
fn compare(a: &Monomial, b: &Monomial) -> Ordering {
    let mut fa: Vec<_> = a.factors().iter().map(|(v, e)| (rank(v), *e)).collect();
    let mut fb: Vec<_> = b.factors().iter().map(|(v, e)| (rank(v), *e)).collect();
    fa.sort_by(|x, y| y.0.cmp(&x.0));
    fb.sort_by(|x, y| y.0.cmp(&x.0));
    for (x, y) in fa.iter().zip(fb.iter()) {
        match x.0.cmp(&y.0) {
            Ordering::Equal => {}
            o => return o,
        }
        match x.1.cmp(&y.1) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    fa.len().cmp(&fb.len())
}

fn leading(e: &Expr) -> Option<(Monomial, Rational)> {
    e.terms()
        .max_by(|a, b| compare(a.0, b.0))
        .map(|(m, c)| (m.clone(), c.clone()))
}

struct Pattern {
    key: (usize, MultiIndex),
    poly: Expr,
    lead: Monomial,
    lead_coeff: Rational,
}

/// Greedy division of `f` by the prolonged Euler-Lagrange expressions
/// `d_J E_σ`, matched from the highest `|J|` down.
pub fn extract_e_linear(bundle: &BundleSpec, f: &Expr, euler: &[Expr]) -> Result<Extraction> {
    let top = f.jet_order();
    let mut patterns = Vec::new();
    for (s, e) in euler.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let base = e.jet_order();
        if base > top {
            continue;
        }
        for len in (0..=(top - base)).rev() {
            for j in MultiIndex::of_len(bundle.n(), len) {
                let poly = bundle.total_derivative_multi(e, &j)?;
                if let Some((lead, lead_coeff)) = leading(&poly) {
                    patterns.push(Pattern {
                        key: (s, j),
                        poly,
                        lead,
                        lead_coeff,
                    });
                }
            }
        }
    }
    patterns.sort_by_key(|p| std::cmp::Reverse(p.key.1.len()));

    let mut out = Extraction {
        multipliers: BTreeMap::new(),
        remainder: f.clone(),
    };
    loop {
        let mut terms: Vec<(Monomial, Rational)> = out
            .remainder
            .terms()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        terms.sort_by(|a, b| compare(&b.0, &a.0));
        let step = terms.iter().find_map(|(m, c)| {
            patterns
                .iter()
                .find_map(|p| m.divide(&p.lead).map(|q| (p, Expr::term(q, c / &p.lead_coeff))))
        });
        let Some((p, q)) = step else { break };
        out.remainder -= &(&q * &p.poly);
        *out.multipliers.entry(p.key.clone()).or_default() += q;
    }
    out.multipliers.retain(|_, v| !v.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::int;

    #[test]
    fn extracts_combination_of_prolonged_equations() {
        let b = BundleSpec::new(1, 1, 8).unwrap();
        let e = vec![-b.y(0, &[0, 0])];
        // x * d_1 E + 3 y * E + 2
        let f = &(&(&b.x(0) * &-b.y(0, &[0, 0, 0])) + &(&b.y(0, &[]) * &e[0]).scale(&int(3))) + &Expr::integer(2);
        let ex = extract_e_linear(&b, &f, &e).unwrap();
        assert_eq!(ex.remainder, Expr::integer(2));
        assert_eq!(ex.multipliers[&(0, MultiIndex::single(0))], b.x(0));
        assert_eq!(ex.multipliers[&(0, MultiIndex::empty())], b.y(0, &[]).scale(&int(3)));
    }
}
