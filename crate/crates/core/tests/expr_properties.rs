use proptest::prelude::*;
use varseq_core::expr::{equal, BundleSpec, Expr, MultiIndex, Rational, Var};
use varseq_core::random::{FixtureRng, Shape};

fn bundle() -> BundleSpec {
    BundleSpec::new(2, 2, 6).unwrap()
}

fn random_expr(seed: u64, order: usize) -> Expr {
    let b = bundle();
    let mut g = FixtureRng::new(seed);
    let vars = FixtureRng::jet_variables(&b, order);
    g.polynomial(&vars, Shape { terms: 4, max_degree: 3, max_coeff: 5 })
}

fn point(seed: u64) -> impl FnMut(&Var) -> Option<Rational> {
    move |v: &Var| {
        let mut h = seed;
        let s = format!("{v:?}");
        for c in s.bytes() {
            h = h.wrapping_mul(6364136223846793005).wrapping_add(c as u64);
        }
        Some(varseq_core::expr::rat(((h >> 33) % 19) as i64 - 9, ((h >> 13) % 5 + 1) as i64))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn normal_form_is_idempotent(seed in any::<u64>()) {
        let e = random_expr(seed, 2);
        let again = Expr::from_terms(e.clone().into_terms());
        prop_assert_eq!(&again, &e);
        let shuffled = Expr::from_terms(e.clone().into_terms().collect::<Vec<_>>().into_iter().rev());
        prop_assert_eq!(shuffled, e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn total_derivative_is_a_derivation(s1 in any::<u64>(), s2 in any::<u64>(), i in 0usize..2) {
        let b = bundle();
        let (e, f) = (random_expr(s1, 2), random_expr(s2, 2));
        let lhs = b.total_derivative(&(&e * &f), i).unwrap();
        let rhs = &(&b.total_derivative(&e, i).unwrap() * &f) + &(&e * &b.total_derivative(&f, i).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let b = bundle();
        let e = random_expr(seed, 2);
        let d01 = b.total_derivative(&b.total_derivative(&e, 0).unwrap(), 1).unwrap();
        let d10 = b.total_derivative(&b.total_derivative(&e, 1).unwrap(), 0).unwrap();
        prop_assert_eq!(d01, d10);
    }

    /// `[∂/∂y_K, d_i] = ∂/∂y_{K-i}` on stored coordinates.
    #[test]
    fn partial_total_commutator(seed in any::<u64>(), i in 0usize..2, s in 0usize..2, k in prop::collection::vec(0usize..2, 1..3)) {
        let b = bundle();
        let e = random_expr(seed, 2);
        let big = MultiIndex::new(k.iter().copied());
        let lhs = b.partial_jet(&b.total_derivative(&e, i).unwrap(), s, &big);
        let mut rhs = b.total_derivative(&b.partial_jet(&e, s, &big), i).unwrap();
        if let Some(rest) = big.without(i) {
            rhs += b.partial_jet(&e, s, &rest);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(s1 in any::<u64>(), s2 in any::<u64>(), p in any::<u64>()) {
        let (e, f) = (random_expr(s1, 2), random_expr(s2, 2));
        let ev = |x: &Expr| x.eval(point(p)).unwrap();
        prop_assert_eq!(ev(&(&e + &f)), ev(&e) + ev(&f));
        prop_assert_eq!(ev(&(&e * &f)), ev(&e) * ev(&f));
        prop_assert_eq!(ev(&(&e - &e)), varseq_core::expr::int(0));
    }

    #[test]
    fn equality_oracle_agrees(s1 in any::<u64>(), s2 in any::<u64>(), seed in any::<u64>()) {
        let (e, f) = (random_expr(s1, 1), random_expr(s2, 1));
        let sq = &(&e + &f) * &(&e + &f);
        let expanded = &(&(&e * &e) + &(&e * &f).scale(&varseq_core::expr::int(2))) + &(&f * &f);
        prop_assert!(equal(&sq, &expanded, seed).unwrap());
        prop_assert_eq!(equal(&e, &f, seed).unwrap(), e == f);
    }
}
