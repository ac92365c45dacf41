use proptest::prelude::*;
use varseq_core::expr::BundleSpec;
use varseq_core::random::{FixtureRng, Shape};
use varseq_core::variational::{
    cons1_residual, first_variation, higher_variation, identity_a_residual, identity_b_residual,
    noether_antisymmetry_residual, second_commutation_residual, second_variation,
};

fn small() -> Shape {
    Shape { terms: 2, max_degree: 2, max_coeff: 3 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn first_variation_formula(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2, r in 1usize..=2) {
        let b = BundleSpec::new(n, m, 16).unwrap();
        let mut g = FixtureRng::new(seed);
        let lam = g.lagrangian(&b, r, Shape::default());
        let f = g.projectable_field(&b, small());
        let v = first_variation(&b, &lam, &f).unwrap();
        prop_assert!(v.holds());
    }

    #[test]
    fn second_variation_formula(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2, r in 1usize..=2) {
        let b = BundleSpec::new(n, m, 16).unwrap();
        let mut g = FixtureRng::new(seed);
        let lam = g.lagrangian(&b, r, Shape::default());
        let f1 = g.projectable_field(&b, small());
        let f2 = g.projectable_field(&b, small());
        prop_assert!(second_variation(&b, &lam, &f1, &f2).unwrap().holds());
    }

    #[test]
    fn third_variation_formula(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2, r in 1usize..=2) {
        let b = BundleSpec::new(n, m, 32).unwrap();
        let mut g = FixtureRng::new(seed);
        let lam = g.lagrangian(&b, r, small());
        let fs: Vec<_> = (0..3).map(|_| g.projectable_field(&b, small())).collect();
        let v = higher_variation(&b, &lam, &fs).unwrap();
        prop_assert_eq!(v.divergence_terms.len(), 3);
        prop_assert!(v.holds());
    }

    #[test]
    fn conservation_identities(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2, r in 1usize..=2) {
        let b = BundleSpec::new(n, m, 16).unwrap();
        let mut g = FixtureRng::new(seed);
        let lam = g.lagrangian(&b, r, Shape::default());
        let f1 = g.vertical_field(&b, small());
        let f2 = g.vertical_field(&b, small());
        prop_assert!(cons1_residual(&b, &lam, &f1, &f2).unwrap().is_zero());
        prop_assert!(second_commutation_residual(&b, &lam, &f1, &f2).unwrap().is_zero());
        prop_assert!(noether_antisymmetry_residual(&b, &lam, &f1, &f2).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identities(seed in any::<u64>(), n in 1usize..=2, m in 1usize..=2, r in 1usize..=2) {
        let b = BundleSpec::new(n, m, 16).unwrap();
        let mut g = FixtureRng::new(seed);
        let lam = g.lagrangian(&b, r, Shape::default());
        let f = g.vertical_field(&b, small());
        prop_assert!(identity_a_residual(&b, &lam, &f).unwrap().iter().all(|e| e.is_zero()));
        prop_assert!(identity_b_residual(&b, &lam, &f).unwrap().iter().all(|e| e.is_zero()));
    }
}
