use super::{int, Expr, Monomial, MultiIndex, Var};
use crate::error::{Error, Result};

/// Chart data for `J^{r_max} Y` over an `n`-dimensional base with `m` fibre
/// coordinates, plus optional auxiliary functions of the base.
///
/// Auxiliary functions stand for unknown components such as a symbolic
/// Jacobi field `Ξ^σ(x)`; their formal derivatives are fresh variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    n: usize,
    m: usize,
    r_max: usize,
    base_names: Vec<String>,
    fibre_names: Vec<String>,
    aux_names: Vec<String>,
}

impl BundleSpec {
    pub fn new(n: usize, m: usize, r_max: usize) -> Result<Self> {
        let base_names = (1..=n).map(|i| format!("x{i}")).collect();
        let fibre_names = (1..=m).map(|s| format!("y{s}")).collect();
        BundleSpec::with_names(base_names, fibre_names, r_max)
    }

    pub fn with_names(base_names: Vec<String>, fibre_names: Vec<String>, r_max: usize) -> Result<Self> {
        let n = base_names.len();
        let m = fibre_names.len();
        if n == 0 || n > 64 {
            return Err(Error::Bundle(format!("base dimension {n} out of range 1..=64")));
        }
        if m == 0 {
            return Err(Error::Bundle("fibre dimension must be positive".into()));
        }
        let mut all: Vec<&String> = base_names.iter().chain(fibre_names.iter()).collect();
        all.sort();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Bundle("coordinate names must be distinct".into()));
        }
        Ok(BundleSpec {
            n,
            m,
            r_max,
            base_names,
            fibre_names,
            aux_names: Vec::new(),
        })
    }

    pub fn with_aux(mut self, names: Vec<String>) -> Result<Self> {
        for a in &names {
            if self.base_names.contains(a) || self.fibre_names.contains(a) {
                return Err(Error::Bundle(format!("auxiliary name {a} clashes with a coordinate")));
            }
        }
        self.aux_names = names;
        Ok(self)
    }

    pub fn with_r_max(mut self, r_max: usize) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    pub fn base_names(&self) -> &[String] {
        &self.base_names
    }

    pub fn fibre_names(&self) -> &[String] {
        &self.fibre_names
    }

    pub fn aux_names(&self) -> &[String] {
        &self.aux_names
    }

    pub fn aux_index(&self, name: &str) -> Option<usize> {
        self.aux_names.iter().position(|a| a == name)
    }

    pub fn x(&self, i: usize) -> Expr {
        Expr::base(i)
    }

    pub fn y(&self, fibre: usize, index: &[usize]) -> Expr {
        Expr::jet(fibre, MultiIndex::new(index.iter().copied()))
    }

    pub fn check_order(&self, order: usize) -> Result<()> {
        if order > self.r_max {
            Err(Error::OrderOverflow {
                required: order,
                r_max: self.r_max,
            })
        } else {
            Ok(())
        }
    }

    /// `d_i v` for a single variable.
    fn total_derivative_var(&self, v: &Var, i: usize) -> Result<Expr> {
        Ok(match v {
            Var::Const(..) => Expr::zero(),
            Var::Base(j) => {
                if *j as usize == i {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Var::Jet(s, idx) => {
                self.check_order(idx.len() + 1)?;
                Expr::var(Var::Jet(*s, idx.with(i)))
            }
            Var::Aux(a, idx) => {
                self.check_order(idx.len() + 1)?;
                Expr::var(Var::Aux(*a, idx.with(i)))
            }
        })
    }

    /// Formal derivative `d_i f = ∂f/∂x^i + Σ ∂f/∂y^σ_J y^σ_{Ji}`.
    pub fn total_derivative(&self, e: &Expr, i: usize) -> Result<Expr> {
        let mut out = Expr::zero();
        for (m, c) in e.terms() {
            for (v, k) in m.factors() {
                let dv = self.total_derivative_var(v, i)?;
                if dv.is_zero() {
                    continue;
                }
                let rest = m.reduce(v);
                out.add_product_term(&rest, &(c * int(*k as i64)), &dv);
            }
        }
        Ok(out)
    }

    /// `d_I f` for a sorted multi-index.
    pub fn total_derivative_multi(&self, e: &Expr, index: &MultiIndex) -> Result<Expr> {
        let mut out = e.clone();
        for i in index.iter() {
            if out.is_zero() {
                break;
            }
            out = self.total_derivative(&out, i)?;
        }
        Ok(out)
    }

    /// `∂f/∂x^i` at fixed fibre coordinates.  Auxiliary functions depend on
    /// the base, so they contribute through their formal derivatives.
    pub fn partial_base(&self, e: &Expr, i: usize) -> Result<Expr> {
        let mut out = Expr::zero();
        for (m, c) in e.terms() {
            for (v, k) in m.factors() {
                let dv = match v {
                    Var::Base(j) if *j as usize == i => Expr::one(),
                    Var::Aux(..) => self.total_derivative_var(v, i)?,
                    _ => continue,
                };
                out.add_product_term(&m.reduce(v), &(c * int(*k as i64)), &dv);
            }
        }
        Ok(out)
    }

    pub fn partial_jet(&self, e: &Expr, fibre: usize, index: &MultiIndex) -> Expr {
        e.partial(&Var::Jet(fibre as u16, index.clone()))
    }

    /// Plain DSL name for a variable.
    pub fn var_name(&self, v: &Var) -> String {
        match v {
            Var::Const(name, idx) => {
                if idx.is_empty() {
                    name.to_string()
                } else {
                    let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                    format!("{name}[{}]", parts.join(","))
                }
            }
            Var::Base(i) => self
                .base_names
                .get(*i as usize)
                .cloned()
                .unwrap_or_else(|| format!("x{}", i + 1)),
            Var::Jet(s, idx) => {
                let name = self
                    .fibre_names
                    .get(*s as usize)
                    .cloned()
                    .unwrap_or_else(|| format!("y{}", s + 1));
                self.indexed_name(&name, idx)
            }
            Var::Aux(a, idx) => {
                let name = self
                    .aux_names
                    .get(*a as usize)
                    .cloned()
                    .unwrap_or_else(|| format!("f{}", a + 1));
                self.indexed_name(&name, idx)
            }
        }
    }

    fn indexed_name(&self, name: &str, idx: &MultiIndex) -> String {
        if idx.is_empty() {
            name.to_string()
        } else if self.n <= 9 {
            let digits: String = idx.iter().map(|i| char::from(b'1' + i as u8)).collect();
            format!("{name}_{digits}")
        } else {
            let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            format!("{name}[;{}]", parts.join(","))
        }
    }

    /// Monomial with a single jet coordinate, convenience for tests.
    pub fn jet_monomial(&self, fibre: usize, index: &[usize]) -> Monomial {
        Monomial::var(Var::Jet(fibre as u16, MultiIndex::new(index.iter().copied())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    #[test]
    fn total_derivative_free_particle() {
        let b = BundleSpec::new(1, 1, 4).unwrap();
        let y1 = b.y(0, &[0]);
        let e = (&y1 * &y1).scale(&rat(1, 2));
        assert_eq!(b.total_derivative(&e, 0).unwrap(), &y1 * &b.y(0, &[0, 0]));
    }

    #[test]
    fn total_derivative_resorts_indices() {
        let b = BundleSpec::new(2, 1, 4).unwrap();
        let e = b.y(0, &[1]);
        assert_eq!(b.total_derivative(&e, 0).unwrap(), b.y(0, &[0, 1]));
    }

    #[test]
    fn overflow_is_reported() {
        let b = BundleSpec::new(1, 1, 2).unwrap();
        let e = b.y(0, &[0, 0]);
        assert_eq!(
            b.total_derivative(&e, 0),
            Err(Error::OrderOverflow { required: 3, r_max: 2 })
        );
    }

    #[test]
    fn partial_base_sees_aux_functions() {
        let b = BundleSpec::new(1, 1, 4).unwrap().with_aux(vec!["f".into()]).unwrap();
        let f = Expr::aux(0, MultiIndex::empty());
        let e = &f * &b.x(0);
        let d = b.partial_base(&e, 0).unwrap();
        assert_eq!(d, &f + &(&Expr::aux(0, MultiIndex::single(0)) * &b.x(0)));
    }

    #[test]
    fn names_follow_dsl() {
        let b = BundleSpec::new(3, 2, 4).unwrap();
        assert_eq!(b.var_name(&Var::Jet(1, MultiIndex::new([2, 0]))), "y2_13");
        assert_eq!(b.var_name(&Var::Base(2)), "x3");
    }
}
