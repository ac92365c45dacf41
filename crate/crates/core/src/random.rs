//! Seeded generators for random polynomial fixtures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{int, BundleSpec, Expr, MultiIndex};
use crate::geometry::{Form, VectorField};

/// Size limits for generated polynomials.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub terms: usize,
    pub max_degree: u32,
    pub max_coeff: i64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            terms: 3,
            max_degree: 2,
            max_coeff: 3,
        }
    }
}

pub struct FixtureRng(ChaCha8Rng);

impl FixtureRng {
    pub fn new(seed: u64) -> Self {
        FixtureRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn gen_range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.0.gen_range(lo..=hi_inclusive)
    }

    fn coeff(&mut self, max: i64) -> Expr {
        let mut c = 0;
        while c == 0 {
            c = self.0.gen_range(-max..=max);
        }
        Expr::integer(c)
    }

    /// Random polynomial in the given variables.
    pub fn polynomial(&mut self, vars: &[Expr], shape: Shape) -> Expr {
        let mut out = Expr::zero();
        for _ in 0..shape.terms {
            let deg = self.0.gen_range(0..=shape.max_degree);
            let mut t = self.coeff(shape.max_coeff);
            for _ in 0..deg {
                if let Some(v) = vars.choose(&mut self.0) {
                    t = &t * v;
                }
            }
            out += t;
        }
        out
    }

    /// Jet coordinates of order `≤ order`, plus the base coordinates.
    pub fn jet_variables(bundle: &BundleSpec, order: usize) -> Vec<Expr> {
        let mut vars: Vec<Expr> = (0..bundle.n()).map(|i| bundle.x(i)).collect();
        for s in 0..bundle.m() {
            for idx in MultiIndex::up_to(bundle.n(), order) {
                vars.push(Expr::jet(s, idx));
            }
        }
        vars
    }

    /// Lagrangian of exact order `order`: the density always contains a
    /// term quadratic in a top-order coordinate.
    pub fn lagrangian(&mut self, bundle: &BundleSpec, order: usize, shape: Shape) -> Form {
        let vars = FixtureRng::jet_variables(bundle, order);
        let mut density = self.polynomial(&vars, shape);
        let top = MultiIndex::of_len(bundle.n(), order);
        let idx = top.choose(&mut self.0).cloned().unwrap_or_default();
        let s = self.0.gen_range(0..bundle.m());
        let lead = Expr::jet(s, idx);
        density += (&lead * &lead).scale(&int(self.0.gen_range(1..=2)));
        Form::lagrangian(bundle, density)
    }

    pub fn vertical_field(&mut self, bundle: &BundleSpec, shape: Shape) -> VectorField {
        let vars = FixtureRng::jet_variables(bundle, 0);
        let fibre = (0..bundle.m()).map(|_| self.polynomial(&vars, shape)).collect();
        VectorField::vertical(bundle, fibre).expect("order-0 components")
    }

    /// Projectable field with base components affine in `x`.
    pub fn projectable_field(&mut self, bundle: &BundleSpec, shape: Shape) -> VectorField {
        let base_vars: Vec<Expr> = (0..bundle.n()).map(|i| bundle.x(i)).collect();
        let base_shape = Shape {
            terms: 2,
            max_degree: 1,
            max_coeff: shape.max_coeff,
        };
        let base = (0..bundle.n()).map(|_| self.polynomial(&base_vars, base_shape)).collect();
        let vars = FixtureRng::jet_variables(bundle, 0);
        let fibre = (0..bundle.m()).map(|_| self.polynomial(&vars, shape)).collect();
        VectorField::new(bundle, base, fibre).expect("projectable by construction")
    }

    /// Random `(n+k)`-form whose terms all have `n` base factors and `k`
    /// contact factors of order `≤ omega_order`.
    pub fn source_like_form(
        &mut self,
        bundle: &BundleSpec,
        k: usize,
        omega_order: usize,
        coeff_order: usize,
        shape: Shape,
    ) -> Form {
        let vars = FixtureRng::jet_variables(bundle, coeff_order);
        let mut omegas = Vec::new();
        for s in 0..bundle.m() {
            for idx in MultiIndex::up_to(bundle.n(), omega_order) {
                omegas.push(Form::omega(s, idx));
            }
        }
        let vol = Form::volume(bundle);
        let mut out = Form::zero();
        for _ in 0..shape.terms.max(1) {
            let mut w = Form::scalar(self.polynomial(&vars, shape));
            for _ in 0..k {
                w = w.wedge(omegas.choose(&mut self.0).expect("at least one contact factor"));
            }
            out += w.wedge(&vol);
        }
        out
    }

    /// Random `k`-contact `(n+k-1)`-form with `n-1` base factors.
    pub fn strongly_contact_form(
        &mut self,
        bundle: &BundleSpec,
        k: usize,
        omega_order: usize,
        coeff_order: usize,
        shape: Shape,
    ) -> Form {
        let vars = FixtureRng::jet_variables(bundle, coeff_order);
        let mut omegas = Vec::new();
        for s in 0..bundle.m() {
            for idx in MultiIndex::up_to(bundle.n(), omega_order) {
                omegas.push(Form::omega(s, idx));
            }
        }
        let mut out = Form::zero();
        for _ in 0..shape.terms.max(1) {
            let i = self.0.gen_range(0..bundle.n());
            let mut w = Form::scalar(self.polynomial(&vars, shape));
            for _ in 0..k {
                w = w.wedge(omegas.choose(&mut self.0).expect("at least one contact factor"));
            }
            out += w.wedge(&Form::volume_i(bundle, i));
        }
        out
    }
}
