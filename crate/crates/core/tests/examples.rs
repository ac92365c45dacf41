//! Worked examples for the operators, mostly on the free particle
//! `λ = ½ (y_1)² dx` (n = m = 1).

use varseq_core::expr::{int, rat, BundleSpec, ConstFamily, Expr, IndexSymmetry, MultiIndex};
use varseq_core::geometry::{
    exterior_derivative, horizontal_differential, interior_product, lie_bracket, lie_derivative, prolong,
    FrameField, Form, VectorField,
};
use varseq_core::variational::*;

fn b1() -> BundleSpec {
    BundleSpec::new(1, 1, 8).unwrap()
}

fn y(idx: &[usize]) -> Expr {
    Expr::jet(0, MultiIndex::new(idx.iter().copied()))
}

fn free_particle(b: &BundleSpec) -> Form {
    Form::lagrangian(b, y(&[0]).pow(2).scale(&rat(1, 2)))
}

fn om(idx: &[usize]) -> Form {
    Form::omega(0, MultiIndex::new(idx.iter().copied()))
}

fn shift(b: &BundleSpec) -> VectorField {
    VectorField::vertical(b, vec![Expr::one()]).unwrap()
}

fn x_shift(b: &BundleSpec) -> VectorField {
    VectorField::vertical(b, vec![b.x(0)]).unwrap()
}

#[test]
fn normal_form() {
    let y1 = y(&[0]);
    assert!((&(&y1 * &y1) - &y1.pow(2)).is_zero());
    let x = Expr::base(0);
    assert_eq!(&x.scale(&int(2)) + &x.scale(&int(3)), x.scale(&int(5)));
    let eta = ConstFamily::opaque("eta", 2, IndexSymmetry::Symmetric);
    let a = Expr::base(0);
    let e = &(&eta.get(&[1, 2]).unwrap() * &a) - &(&eta.get(&[2, 1]).unwrap() * &a);
    assert!(e.is_zero());
}

#[test]
fn partials_and_total_derivatives() {
    let b = BundleSpec::new(2, 1, 4).unwrap();
    let half = y(&[0]).pow(2).scale(&rat(1, 2));
    assert_eq!(b.partial_jet(&half, 0, &MultiIndex::single(0)), y(&[0]));
    let e = &y(&[0, 0]) * &y(&[1]);
    assert_eq!(b.partial_jet(&e, 0, &MultiIndex::new([0, 0])), y(&[1]));
    assert!(b.partial_jet(&(&b.x(0) * &y(&[])), 0, &MultiIndex::single(0)).is_zero());
    assert_eq!(b.total_derivative(&y(&[]), 0).unwrap(), y(&[0]));
    assert_eq!(
        b.total_derivative(&(&b.x(0) * &y(&[])), 0).unwrap(),
        &y(&[]) + &(&b.x(0) * &y(&[0]))
    );
    let eval = (&y(&[0]) + &Expr::integer(2)).eval(|_| Some(int(3))).unwrap();
    assert_eq!(eval, int(5));
}

#[test]
fn forms() {
    let b = b1();
    assert!(Form::dx(0).wedge(&Form::dx(0)).is_zero());
    assert_eq!(om(&[]).wedge(&Form::dx(0)), -Form::dx(0).wedge(&om(&[])));
    let d = exterior_derivative(&b, &free_particle(&b)).unwrap();
    assert_eq!(d, om(&[0]).wedge(&Form::dx(0)).scale(&y(&[0])));
    assert_eq!(exterior_derivative(&b, &Form::scalar(b.x(0))).unwrap(), Form::dx(0));
    let dy = Form::dy(&b, 0, MultiIndex::empty()).unwrap().wedge(&Form::dx(0));
    let parts = dy.contact_split();
    assert!(parts[0].is_zero());
    assert_eq!(parts[1], om(&[]).wedge(&Form::dx(0)));
    let eps = Form::scalar(y(&[0]).pow(2).scale(&rat(-1, 2)));
    assert_eq!(
        horizontal_differential(&b, &eps).unwrap(),
        Form::dx(0).scale(&-(&y(&[0]) * &y(&[0, 0])))
    );
}

#[test]
fn fields() {
    let b = b1();
    let p = prolong(&b, &shift(&b), 2).unwrap();
    assert_eq!(p.component(0, &MultiIndex::empty()).unwrap(), &Expr::one());
    assert!(p.component(0, &MultiIndex::new([0, 0])).unwrap().is_zero());

    let t = VectorField::translation(&b, 0);
    let (h, v) = prolong(&b, &t, 1).unwrap().split_hv(&b).unwrap();
    assert_eq!(v.contact_component(0, &MultiIndex::empty()).unwrap(), -y(&[0]));
    assert_eq!(interior_product(&h, &Form::dx(0)).unwrap(), Form::scalar(Expr::one()));

    let mixed = VectorField::new(&b, vec![Expr::one()], vec![y(&[])]).unwrap();
    let (_, v) = prolong(&b, &mixed, 1).unwrap().split_hv(&b).unwrap();
    assert_eq!(v.contact_component(0, &MultiIndex::empty()).unwrap(), &y(&[]) - &y(&[0]));

    let unit = FrameField::unit_vertical(&b, 0, MultiIndex::empty());
    assert_eq!(interior_product(&unit, &om(&[]).wedge(&Form::dx(0))).unwrap(), Form::dx(0));

    let b2 = BundleSpec::new(2, 1, 4).unwrap();
    let d1 = FrameField::total(&b2, 0);
    assert_eq!(interior_product(&d1, &Form::dx(0).wedge(&Form::dx(1))).unwrap(), Form::dx(1));

    let y2 = Form::lagrangian(&b, y(&[]).pow(2));
    let once = lie_derivative(&b, &shift(&b), &y2).unwrap();
    assert_eq!(once, Form::lagrangian(&b, y(&[]).scale(&int(2))));
    assert_eq!(lie_derivative(&b, &shift(&b), &once).unwrap(), Form::lagrangian(&b, Expr::integer(2)));
    assert!(lie_derivative(&b, &t, &free_particle(&b)).unwrap().is_zero());

    let scale = VectorField::vertical(&b, vec![y(&[])]).unwrap();
    let sq = VectorField::vertical(&b, vec![y(&[]).pow(2)]).unwrap();
    assert_eq!(lie_bracket(&b, &scale, &sq).unwrap().fibre(), &[y(&[]).pow(2)]);
    assert!(lie_bracket(&b, &t, &scale).unwrap().fibre()[0].is_zero());
}

#[test]
fn interior_euler_and_helmholtz() {
    let b = b1();
    let ds = Form::dx(0);
    let i = interior_euler(&b, &exterior_derivative(&b, &free_particle(&b)).unwrap()).unwrap();
    assert_eq!(i.form(), &om(&[]).wedge(&ds).scale(&-y(&[0, 0])));
    let src = om(&[]).wedge(&ds).scale(&y(&[0]));
    let i = interior_euler(&b, &exterior_derivative(&b, &src).unwrap()).unwrap();
    assert_eq!(i.form(), &om(&[0]).wedge(&om(&[])).wedge(&ds));

    let eps = SourceForm::from_coefficients(&b, vec![-y(&[])]).unwrap();
    assert!(helmholtz(&b, &eps).unwrap().is_zero());
    let eps = SourceForm::from_coefficients(&b, vec![y(&[0])]).unwrap();
    let h = helmholtz(&b, &eps).unwrap();
    assert_eq!(h.form(), &om(&[0]).wedge(&om(&[])).wedge(&ds));
    assert!(residual(&b, eps.form()).unwrap().is_zero());
}

#[test]
fn euler_lagrange_lepage_momentum() {
    let b = b1();
    let lam = free_particle(&b);
    assert_eq!(euler_lagrange(&b, &lam).unwrap().coefficients(&b).unwrap(), vec![-y(&[0, 0])]);
    let theta = principal_lepage(&b, &lam).unwrap();
    assert_eq!(theta, &lam + &om(&[]).scale(&y(&[0])));
    assert_eq!(momentum(&b, &lam).unwrap(), om(&[]).scale(&y(&[0])));
    assert!(momentum(&b, &Form::lagrangian(&b, b.x(0).pow(3))).unwrap().is_zero());

    // h d φ for φ = x y y_1 is a null Lagrangian
    let phi = Form::scalar(&(&b.x(0) * &y(&[])) * &y(&[0]));
    let null = horizontal_differential(&b, &phi).unwrap();
    assert!(euler_lagrange(&b, &null).unwrap().is_zero());
}

#[test]
fn noether() {
    let b = b1();
    let lam = free_particle(&b);
    let t = VectorField::translation(&b, 0);
    let eps = noether_current(&b, &lam, &t).unwrap();
    assert_eq!(eps, Form::scalar(y(&[0]).pow(2).scale(&rat(-1, 2))));
    let dh = horizontal_differential(&b, &eps).unwrap();
    let q = t.characteristic(&b).unwrap();
    let e = euler_lagrange(&b, &lam).unwrap().coefficients(&b).unwrap();
    assert_eq!(dh, Form::lagrangian(&b, -(&q[0] * &e[0])));

    let lx = Form::lagrangian(&b, b.x(0).pow(2));
    assert!(noether_current(&b, &lx, &shift(&b)).unwrap().is_zero());
}

#[test]
fn variations() {
    let b = b1();
    let lam = free_particle(&b);
    let t = VectorField::translation(&b, 0);
    let v = first_variation(&b, &lam, &t).unwrap();
    assert!(v.total.is_zero() && v.holds());
    assert_eq!(v.boundary_free, Form::lagrangian(&b, &y(&[0]) * &y(&[0, 0])));

    let ylam = Form::lagrangian(&b, y(&[]));
    let v = first_variation(&b, &ylam, &shift(&b)).unwrap();
    assert_eq!(v.total, Form::lagrangian(&b, Expr::one()));
    assert!(v.divergence_terms.iter().all(|f| f.is_zero()));

    let sq = Form::lagrangian(&b, y(&[]).pow(2));
    let v = second_variation(&b, &sq, &shift(&b), &shift(&b)).unwrap();
    assert_eq!(v.total, Form::lagrangian(&b, Expr::integer(2)));
    assert_eq!(v.boundary_free, v.total);
    assert!(v.holds());

    let v = second_variation(&b, &lam, &shift(&b), &shift(&b)).unwrap();
    assert!(v.total.is_zero() && v.boundary_free.is_zero());

    let cube = Form::lagrangian(&b, y(&[]).pow(3));
    let s = shift(&b);
    let v = higher_variation(&b, &cube, &[s.clone(), s.clone(), s.clone()]).unwrap();
    assert_eq!(v.total, Form::lagrangian(&b, Expr::integer(6)));
    assert!(v.holds());
    let zero = VectorField::vertical(&b, vec![Expr::zero()]).unwrap();
    let v = higher_variation(&b, &cube, &[s.clone(), zero, s]).unwrap();
    assert!(v.total.is_zero() && v.boundary_free.is_zero());
}

#[test]
fn jacobi() {
    let b = b1().with_aux(vec!["f".into()]).unwrap();
    let lam = free_particle(&b);
    let f = VectorField::symbolic_vertical(&b, 0).unwrap();
    let fpp = Expr::aux(0, MultiIndex::new([0, 0]));
    let j = jacobi_morphism(&b, &lam, &f).unwrap();
    assert_eq!(j.coefficients(&b).unwrap(), vec![-fpp.clone()]);
    let forms = jacobi_onshell(&b, &lam, &f).unwrap();
    assert_eq!(forms.direct, vec![-fpp.clone()]);
    assert_eq!(forms.adjoint, vec![-fpp.clone()]);
    assert!(jacobi_morphism(&b, &lam, &shift(&b)).unwrap().is_zero());
    let h = hessian_density(&b, &lam, &f, &f).unwrap();
    assert_eq!(h, Form::lagrangian(&b, -(&Expr::aux(0, MultiIndex::empty()) * &fpp)));
    let zero = VectorField::vertical(&b, vec![Expr::zero()]).unwrap();
    assert!(hessian_density(&b, &lam, &zero, &f).unwrap().is_zero());
    assert!(hessian_density(&b, &lam, &shift(&b), &x_shift(&b)).unwrap().is_zero());

    let kernel = interior_euler(&b, &exterior_derivative(&b, euler_lagrange(&b, &lam).unwrap().form()).unwrap());
    assert!(kernel.unwrap().is_zero());
}

#[test]
fn conservation_laws_for_the_free_particle() {
    let b = b1();
    let lam = free_particle(&b);
    let (s, xs) = (shift(&b), x_shift(&b));
    assert!(noether_antisymmetry_residual(&b, &lam, &s, &xs).unwrap().is_zero());
    assert!(second_commutation_residual(&b, &lam, &s, &s).unwrap().is_zero());
    let ex = jacobi_current_onshell(&b, &lam, &s, &xs).unwrap();
    assert!(ex.vanishes_on_shell());
    let fields = vec![("S".to_string(), s), ("X".to_string(), xs)];
    let rep = identity_suite(&b, &lam, &fields, Suite::All).unwrap();
    assert!(rep.all_pass(), "{rep}");
}

/// `Ξ1 = x ∂_y` is a Jacobi field of the free particle and `Ξ2 = ∂_x` a
/// symmetry of its first variation, so `d_H ε_{Ξ2}(L_{Ξ1} λ) = 0`.
#[test]
fn second_variation_conservation() {
    let b = b1();
    let lam = free_particle(&b);
    let c = jacobi_variation_current(&b, &lam, &x_shift(&b), &VectorField::translation(&b, 0)).unwrap();
    assert!(c.preconditions());
    assert!(c.current_divergence.is_zero());
}

#[test]
fn nabla_of_symmetric_kernel() {
    let b = b1().with_aux(vec!["f".into()]).unwrap();
    let f = VectorField::symbolic_vertical(&b, 0).unwrap();
    let mut k = Kernel::new();
    k.insert((0, MultiIndex::empty(), 0), b.x(0));
    let (n, a) = nabla_pair(&b, &SourceForm::from_kernel(&b, &k), &f).unwrap();
    assert_eq!(n, a);
    let mut k = Kernel::new();
    k.insert((0, MultiIndex::new([0, 0]), 0), -Expr::one());
    let (n, a) = nabla_pair(&b, &SourceForm::from_kernel(&b, &k), &f).unwrap();
    assert_eq!(n, vec![-Expr::aux(0, MultiIndex::new([0, 0]))]);
    assert_eq!(n, a);
}
