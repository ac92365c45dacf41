use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::expr::{BundleSpec, Expr, MultiIndex, Var};

use super::form::{exterior_derivative, Basis, Factor, Form};

/// Projectable vector field `ξ^i(x) ∂/∂x^i + ξ^σ(x, y) ∂/∂y^σ` on `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    base: Vec<Expr>,
    fibre: Vec<Expr>,
}

impl VectorField {
    pub fn new(bundle: &BundleSpec, base: Vec<Expr>, fibre: Vec<Expr>) -> Result<Self> {
        if base.len() != bundle.n() || fibre.len() != bundle.m() {
            return Err(Error::Arity(format!(
                "vector field needs {} base and {} fibre components, got {} and {}",
                bundle.n(),
                bundle.m(),
                base.len(),
                fibre.len()
            )));
        }
        for (i, c) in base.iter().enumerate() {
            if c.has_var(|v| matches!(v, Var::Jet(..))) {
                return Err(Error::NotProjectable(format!(
                    "base component {} depends on fibre coordinates",
                    i + 1
                )));
            }
        }
        for (s, c) in fibre.iter().enumerate() {
            if c.jet_order() > 0 {
                return Err(Error::NotProjectable(format!(
                    "fibre component {} depends on derivative coordinates",
                    s + 1
                )));
            }
        }
        Ok(VectorField { base, fibre })
    }

    pub fn vertical(bundle: &BundleSpec, fibre: Vec<Expr>) -> Result<Self> {
        VectorField::new(bundle, vec![Expr::zero(); bundle.n()], fibre)
    }

    /// `∂/∂x^i`.
    pub fn translation(bundle: &BundleSpec, i: usize) -> Self {
        let mut base = vec![Expr::zero(); bundle.n()];
        base[i] = Expr::one();
        VectorField {
            base,
            fibre: vec![Expr::zero(); bundle.m()],
        }
    }

    /// Vertical field whose components are the auxiliary functions
    /// `first_aux .. first_aux + m`.
    pub fn symbolic_vertical(bundle: &BundleSpec, first_aux: usize) -> Result<Self> {
        if first_aux + bundle.m() > bundle.aux_names().len() {
            return Err(Error::Arity("not enough auxiliary functions declared".into()));
        }
        let fibre = (0..bundle.m())
            .map(|s| Expr::aux(first_aux + s, MultiIndex::empty()))
            .collect();
        VectorField::vertical(bundle, fibre)
    }

    pub fn base(&self) -> &[Expr] {
        &self.base
    }

    pub fn fibre(&self) -> &[Expr] {
        &self.fibre
    }

    pub fn is_vertical(&self) -> bool {
        self.base.iter().all(|c| c.is_zero())
    }

    pub fn require_vertical(&self) -> Result<()> {
        if self.is_vertical() {
            Ok(())
        } else {
            Err(Error::NotVertical)
        }
    }

    /// Characteristic `Q^σ = ξ^σ - y^σ_i ξ^i`, the order-0 part of `Ξ_V`.
    pub fn characteristic(&self, bundle: &BundleSpec) -> Result<Vec<Expr>> {
        (0..bundle.m())
            .map(|s| {
                let mut q = self.fibre[s].clone();
                for (i, xi) in self.base.iter().enumerate() {
                    if !xi.is_zero() {
                        bundle.check_order(1)?;
                        q -= &(&Expr::jet(s, MultiIndex::single(i)) * xi);
                    }
                }
                Ok(q)
            })
            .collect()
    }

    /// `Ξ(f)` for a function on `Y`.
    pub fn apply(&self, bundle: &BundleSpec, f: &Expr) -> Result<Expr> {
        let mut out = Expr::zero();
        for (i, xi) in self.base.iter().enumerate() {
            if !xi.is_zero() {
                out += &(xi * &bundle.partial_base(f, i)?);
            }
        }
        for (s, xs) in self.fibre.iter().enumerate() {
            if !xs.is_zero() {
                out += &(xs * &bundle.partial_jet(f, s, &MultiIndex::empty()));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, f: &Expr) -> VectorField {
        VectorField {
            base: self.base.iter().map(|c| c * f).collect(),
            fibre: self.fibre.iter().map(|c| c * f).collect(),
        }
    }
}

impl std::ops::Add<&VectorField> for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            base: self.base.iter().zip(&rhs.base).map(|(a, b)| a + b).collect(),
            fibre: self.fibre.iter().zip(&rhs.fibre).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `[a, b]` of projectable fields on `Y`.
pub fn lie_bracket(bundle: &BundleSpec, a: &VectorField, b: &VectorField) -> Result<VectorField> {
    let base = (0..bundle.n())
        .map(|i| Ok(&a.apply(bundle, &b.base[i])? - &b.apply(bundle, &a.base[i])?))
        .collect::<Result<Vec<_>>>()?;
    let fibre = (0..bundle.m())
        .map(|s| Ok(&a.apply(bundle, &b.fibre[s])? - &b.apply(bundle, &a.fibre[s])?))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(bundle, base, fibre)
}

/// `J^k Ξ` with holonomic components `Ξ^σ_J`, `|J| ≤ k`.
#[derive(Clone, Debug)]
pub struct ProlongedField {
    order: usize,
    base: Vec<Expr>,
    components: BTreeMap<(usize, MultiIndex), Expr>,
}

/// Prolongs by `Ξ^σ_{Jt} = d_t Ξ^σ_J - y^σ_{Ji} ∂ξ^i/∂x^t`.
pub fn prolong(bundle: &BundleSpec, field: &VectorField, k: usize) -> Result<ProlongedField> {
    bundle.check_order(k)?;
    let n = bundle.n();
    let mut dxi = vec![vec![Expr::zero(); n]; n];
    for (i, xi) in field.base.iter().enumerate() {
        for (t, slot) in dxi[i].iter_mut().enumerate() {
            *slot = bundle.partial_base(xi, t)?;
        }
    }
    let mut components = BTreeMap::new();
    for s in 0..bundle.m() {
        components.insert((s, MultiIndex::empty()), field.fibre[s].clone());
    }
    for len in 1..=k {
        for s in 0..bundle.m() {
            for idx in MultiIndex::of_len(n, len) {
                let t = idx.last().expect("non-empty");
                let parent = idx.without(t).expect("contains t");
                let c = recurrence_step(bundle, &components[&(s, parent.clone())], s, &parent, t, &dxi)?;
                components.insert((s, idx), c);
            }
        }
    }
    Ok(ProlongedField {
        order: k,
        base: field.base.clone(),
        components,
    })
}

fn recurrence_step(
    bundle: &BundleSpec,
    parent_value: &Expr,
    s: usize,
    parent: &MultiIndex,
    t: usize,
    dxi: &[Vec<Expr>],
) -> Result<Expr> {
    let mut c = bundle.total_derivative(parent_value, t)?;
    for (i, row) in dxi.iter().enumerate() {
        if !row[t].is_zero() {
            c -= &(&Expr::jet(s, parent.with(i)) * &row[t]);
        }
    }
    Ok(c)
}

impl ProlongedField {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn base(&self) -> &[Expr] {
        &self.base
    }

    pub fn component(&self, fibre: usize, index: &MultiIndex) -> Option<&Expr> {
        self.components.get(&(fibre, index.clone()))
    }

    /// Re-derives every component from every way of peeling off one index.
    pub fn check_recurrence(&self, bundle: &BundleSpec) -> Result<bool> {
        let n = bundle.n();
        let mut dxi = vec![vec![Expr::zero(); n]; n];
        for (i, xi) in self.base.iter().enumerate() {
            for (t, slot) in dxi[i].iter_mut().enumerate() {
                *slot = bundle.partial_base(xi, t)?;
            }
        }
        for ((s, idx), value) in self.components.iter() {
            for t in idx.distinct() {
                let parent = idx.without(t).expect("contains t");
                let c = recurrence_step(bundle, &self.components[&(*s, parent.clone())], *s, &parent, t, &dxi)?;
                if c != *value {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn vertical_components(&self, bundle: &BundleSpec) -> Result<BTreeMap<(usize, MultiIndex), Expr>> {
        let mut out = BTreeMap::new();
        for ((s, idx), value) in self.components.iter() {
            let mut c = value.clone();
            for (i, xi) in self.base.iter().enumerate() {
                if !xi.is_zero() {
                    bundle.check_order(idx.len() + 1)?;
                    c -= &(&Expr::jet(*s, idx.with(i)) * xi);
                }
            }
            out.insert((*s, idx.clone()), c);
        }
        Ok(out)
    }

    /// The whole prolonged field in contact-frame form.
    pub fn frame(&self, bundle: &BundleSpec) -> Result<FrameField> {
        Ok(FrameField {
            base: self.base.clone(),
            contact: self.vertical_components(bundle)?,
            order: Some(self.order),
        })
    }

    /// `(Ξ_H, Ξ_V)` with `Ξ_H = ξ^i d_i` and
    /// `(Ξ_V)^σ_J = Ξ^σ_J - y^σ_{Ji} ξ^i`.
    pub fn split_hv(&self, bundle: &BundleSpec) -> Result<(FrameField, FrameField)> {
        let h = FrameField::horizontal(self.base.clone());
        let v = FrameField {
            base: vec![Expr::zero(); bundle.n()],
            contact: self.vertical_components(bundle)?,
            order: Some(self.order),
        };
        Ok((h, v))
    }
}

/// A field on the jet prolongation given by its values on the contact
/// frame: `dx^i ↦ base[i]`, `ω^σ_J ↦ contact[(σ, J)]`.
///
/// This is the form in which prolonged fields, their horizontal and
/// vertical parts, `d_i` and `∂/∂y^σ_I` all enter interior products.
#[derive(Clone, Debug)]
pub struct FrameField {
    base: Vec<Expr>,
    contact: BTreeMap<(usize, MultiIndex), Expr>,
    /// Highest `|J|` for which `contact` is known; `None` means every
    /// unlisted component is zero.
    order: Option<usize>,
}

impl FrameField {
    pub fn horizontal(base: Vec<Expr>) -> Self {
        FrameField {
            base,
            contact: BTreeMap::new(),
            order: None,
        }
    }

    /// `d_i`, which annihilates every contact form.
    pub fn total(bundle: &BundleSpec, i: usize) -> Self {
        let mut base = vec![Expr::zero(); bundle.n()];
        base[i] = Expr::one();
        FrameField::horizontal(base)
    }

    /// `∂/∂y^σ_I`, with `∂/∂y^σ_I ⌋ ω^ν_J = δ`.
    pub fn unit_vertical(bundle: &BundleSpec, fibre: usize, index: MultiIndex) -> Self {
        let mut contact = BTreeMap::new();
        contact.insert((fibre, index), Expr::one());
        FrameField {
            base: vec![Expr::zero(); bundle.n()],
            contact,
            order: None,
        }
    }

    pub fn contact_component(&self, fibre: usize, index: &MultiIndex) -> Result<Expr> {
        if let Some(c) = self.contact.get(&(fibre, index.clone())) {
            return Ok(c.clone());
        }
        match self.order {
            Some(k) if index.len() > k => Err(Error::Contact(format!(
                "field is prolonged to order {k}, component of order {} requested",
                index.len()
            ))),
            _ => Ok(Expr::zero()),
        }
    }

    fn value_on(&self, f: &Factor) -> Result<Expr> {
        match f {
            Factor::Dx(i) => Ok(self.base[*i as usize].clone()),
            Factor::Omega(s, idx) => self.contact_component(*s as usize, idx),
        }
    }
}

/// `V ⌋ ρ`, extended to forms as an antiderivation.
pub fn interior_product(field: &FrameField, rho: &Form) -> Result<Form> {
    let mut out = Form::zero();
    for (b, c) in rho.terms() {
        for (j, f) in b.iter().enumerate() {
            let v = field.value_on(f)?;
            if v.is_zero() {
                continue;
            }
            let rest: Basis = b.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, f)| f.clone()).collect();
            let coeff = &v * c;
            out.add_term(rest, if j % 2 == 0 { coeff } else { -coeff });
        }
    }
    Ok(out)
}

/// `L_{J Ξ} ρ = J Ξ ⌋ dρ + d(J Ξ ⌋ ρ)`, prolonging as far as `dρ` requires.
pub fn lie_derivative(bundle: &BundleSpec, field: &VectorField, rho: &Form) -> Result<Form> {
    let d_rho = exterior_derivative(bundle, rho)?;
    let k = d_rho
        .max_omega_order()
        .into_iter()
        .chain(rho.max_omega_order())
        .max()
        .unwrap_or(0);
    let frame = prolong(bundle, field, k)?.frame(bundle)?;
    let mut out = interior_product(&frame, &d_rho)?;
    let inner = interior_product(&frame, rho)?;
    out += exterior_derivative(bundle, &inner)?;
    Ok(out)
}
