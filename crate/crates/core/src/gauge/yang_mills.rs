use crate::error::{Error, Result};
use crate::expr::{rat, BundleSpec, Expr, MultiIndex};
use crate::geometry::{exterior_derivative, Form, VectorField};
use crate::variational::{
    contract_euler_lagrange, euler_lagrange_coefficients, jacobi_morphism, jacobi_onshell, noether_current,
    residual,
};

use super::{LieAlgebraData, MetricSpec};

/// Which auxiliary field supplies vertical components `Ξ^Z_α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JacobiSlot {
    /// `Xi{A}{μ}`.
    Xi,
    /// `Xt{A}{μ}`, the second field `Ξ̃`.
    Tilde,
}

/// Yang-Mills theory on a flat background with fibre coordinates
/// `ω^A_μ = y^{A·n+μ}`, named `w{A}{μ}`.
#[derive(Clone, Debug)]
pub struct YangMills {
    alg: LieAlgebraData,
    metric: MetricSpec,
    bundle: BundleSpec,
}

impl YangMills {
    pub const DEFAULT_R_MAX: usize = 5;

    pub fn new(alg: LieAlgebraData, metric: MetricSpec) -> Result<Self> {
        YangMills::with_r_max(alg, metric, YangMills::DEFAULT_R_MAX)
    }

    pub fn with_r_max(alg: LieAlgebraData, metric: MetricSpec, r_max: usize) -> Result<Self> {
        let n = metric.n();
        let dim = alg.dim();
        if dim == 0 {
            return Err(Error::Algebra("Lie algebra of dimension 0".into()));
        }
        if n > 9 || dim > 9 {
            return Err(Error::Bundle("Yang-Mills naming supports n ≤ 9 and dim ≤ 9".into()));
        }
        let base = (1..=n).map(|i| format!("x{i}")).collect();
        let mut fibre = Vec::new();
        let mut xi = Vec::new();
        let mut xt = Vec::new();
        for a in 1..=dim {
            for mu in 1..=n {
                fibre.push(format!("w{a}{mu}"));
                xi.push(format!("Xi{a}{mu}"));
                xt.push(format!("Xt{a}{mu}"));
            }
        }
        xi.extend(xt);
        let bundle = BundleSpec::with_names(base, fibre, r_max)?.with_aux(xi)?;
        Ok(YangMills { alg, metric, bundle })
    }

    pub fn bundle(&self) -> &BundleSpec {
        &self.bundle
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.alg
    }

    pub fn metric(&self) -> &MetricSpec {
        &self.metric
    }

    pub fn n(&self) -> usize {
        self.metric.n()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    /// Fibre index of `ω^a_μ`.
    pub fn fibre(&self, a: usize, mu: usize) -> usize {
        a * self.n() + mu
    }

    /// `ω^a_{μ,J}`.
    pub fn w(&self, a: usize, mu: usize, j: &[usize]) -> Expr {
        Expr::jet(self.fibre(a, mu), MultiIndex::new(j.iter().copied()))
    }

    /// `d_J Ξ^a_μ` for the field in `slot`.
    pub fn xi(&self, slot: JacobiSlot, a: usize, mu: usize, j: &[usize]) -> Expr {
        let offset = match slot {
            JacobiSlot::Xi => 0,
            JacobiSlot::Tilde => self.bundle.m(),
        };
        Expr::aux(offset + self.fibre(a, mu), MultiIndex::new(j.iter().copied()))
    }

    pub fn field(&self, slot: JacobiSlot) -> VectorField {
        let first = match slot {
            JacobiSlot::Xi => 0,
            JacobiSlot::Tilde => self.bundle.m(),
        };
        VectorField::symbolic_vertical(&self.bundle, first).expect("auxiliary functions declared")
    }

    pub fn eta(&self, mu: usize, nu: usize) -> Expr {
        self.metric.inv(mu, nu)
    }

    pub fn c(&self, a: usize, b: usize, c: usize) -> Expr {
        self.alg.c(a, b, c)
    }

    pub fn delta(&self, a: usize, b: usize) -> Expr {
        self.alg.delta(a, b)
    }

    /// `F^a_{μν} = ω^a_{ν,μ} - ω^a_{μ,ν} + c^a_{bc} ω^b_μ ω^c_ν`.
    pub fn field_strength(&self, a: usize, mu: usize, nu: usize) -> Expr {
        let mut f = &self.w(a, nu, &[mu]) - &self.w(a, mu, &[nu]);
        for b in 0..self.dim() {
            for c in 0..self.dim() {
                let k = self.c(a, b, c);
                if !k.is_zero() {
                    f += &(&k * &self.w(b, mu, &[])) * &self.w(c, nu, &[]);
                }
            }
        }
        f
    }

    /// `λ_YM = -¼ F^A_{μν} η^{μρ} η^{νσ} F^B_{ρσ} δ_{AB} ds`.
    pub fn lagrangian(&self) -> Form {
        let n = self.n();
        let d = self.dim();
        let f: Vec<Vec<Vec<Expr>>> = (0..d)
            .map(|a| (0..n).map(|mu| (0..n).map(|nu| self.field_strength(a, mu, nu)).collect()).collect())
            .collect();
        let mut density = Expr::zero();
        for a in 0..d {
            for b in 0..d {
                let dab = self.delta(a, b);
                if dab.is_zero() {
                    continue;
                }
                for mu in 0..n {
                    for rho in 0..n {
                        let e1 = &dab * &self.eta(mu, rho);
                        if e1.is_zero() {
                            continue;
                        }
                        for nu in 0..n {
                            for sigma in 0..n {
                                let e2 = &e1 * &self.eta(nu, sigma);
                                if e2.is_zero() {
                                    continue;
                                }
                                density += &(&e2 * &f[a][mu][nu]) * &f[b][rho][sigma];
                            }
                        }
                    }
                }
            }
        }
        Form::lagrangian(&self.bundle, density.scale(&rat(-1, 4)))
    }

    /// Euler-Lagrange expressions `E^ν_B` from the generic operator,
    /// indexed by `fibre(B, ν)`.
    pub fn euler_lagrange(&self) -> Result<Vec<Expr>> {
        euler_lagrange_coefficients(&self.bundle, &self.lagrangian().density(&self.bundle)?)
    }

    /// `Σ_J d_J Ξ^Z_α ∂E^ν_B/∂ω^Z_{α,J}` from the generic operator.
    pub fn jacobi_raw(&self) -> Result<Vec<Expr>> {
        Ok(jacobi_onshell(&self.bundle, &self.lagrangian(), &self.field(JacobiSlot::Xi))?.direct)
    }

    /// Coefficients of the Jacobi morphism `E_n(Ξ ⌋ E_n(λ_YM))`.
    pub fn jacobi_morphism(&self) -> Result<Vec<Expr>> {
        jacobi_morphism(&self.bundle, &self.lagrangian(), &self.field(JacobiSlot::Xi))?.coefficients(&self.bundle)
    }

    /// `R(d(Ξ ⌋ E_n(λ_YM)))` from the generic residual operator.
    pub fn residual(&self) -> Result<Form> {
        let mu = contract_euler_lagrange(&self.bundle, &self.lagrangian(), &self.field(JacobiSlot::Xi))?;
        residual(&self.bundle, &exterior_derivative(&self.bundle, &mu)?)
    }

    /// Components `ε^ξ` of `ε_{Ξ_b}(Ξ_a ⌋ E_n(λ_YM)) = ε^ξ ds_ξ`.
    pub fn jacobi_current(&self, a: JacobiSlot, b: JacobiSlot) -> Result<Vec<Expr>> {
        let mu = contract_euler_lagrange(&self.bundle, &self.lagrangian(), &self.field(a))?;
        noether_current(&self.bundle, &mu, &self.field(b))?.current_components(&self.bundle)
    }
}
