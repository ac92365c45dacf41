use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{int, ConstFamily, Expr, IndexSymmetry, Rational};

/// Structure constants `c^A_{BC}` of a Lie algebra in a basis that is
/// orthonormal for the Killing pairing, so `δ_{AB}` is the identity.
///
/// Numeric tables are stored without any assumed symmetry, so that
/// [`LieAlgebraData::validate`] can report violations.
#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    dim: usize,
    c: ConstFamily,
}

impl LieAlgebraData {
    pub fn abelian(dim: usize) -> Self {
        let c = ConstFamily::bound("c", 3, IndexSymmetry::None, std::iter::empty()).expect("empty table");
        LieAlgebraData { dim, c }
    }

    /// `c^A_{BC} = ε_{ABC}`.
    pub fn su2() -> Self {
        let mut entries = Vec::new();
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            entries.push(([a, b, c], int(1)));
            entries.push(([a, c, b], int(-1)));
        }
        LieAlgebraData::from_table(3, entries).expect("valid table")
    }

    /// Numeric constants from 0-based `([A, B, C], value)` entries; missing
    /// entries are zero.
    pub fn from_table<I>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = ([usize; 3], Rational)>,
    {
        let mut table = Vec::new();
        for (idx, v) in entries {
            if idx.iter().any(|&i| i >= dim) {
                return Err(Error::Algebra(format!(
                    "structure constant index {idx:?} out of range for dimension {dim}"
                )));
            }
            table.push((idx.iter().map(|&i| i as u16 + 1).collect(), v));
        }
        let c = ConstFamily::bound("c", 3, IndexSymmetry::None, table)?;
        Ok(LieAlgebraData { dim, c })
    }

    /// Symbolic constants, antisymmetric in the lower pair.
    pub fn opaque(dim: usize) -> Self {
        LieAlgebraData {
            dim,
            c: ConstFamily::opaque("c", 3, IndexSymmetry::AntisymmetricLastTwo),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_numeric(&self) -> bool {
        self.c.is_bound()
    }

    pub fn family(&self) -> &ConstFamily {
        &self.c
    }

    /// `c^a_{bc}`, 0-based.
    pub fn c(&self, a: usize, b: usize, c: usize) -> Expr {
        self.c
            .get(&[a as u16 + 1, b as u16 + 1, c as u16 + 1])
            .expect("arity 3")
    }

    /// Killing pairing `δ_{ab}`.
    pub fn delta(&self, a: usize, b: usize) -> Expr {
        if a == b {
            Expr::one()
        } else {
            Expr::zero()
        }
    }

    /// Checks antisymmetry and the Jacobi identity of a numeric table.
    pub fn validate(&self) -> AlgebraReport {
        let mut report = AlgebraReport {
            checked: self.is_numeric(),
            violations: Vec::new(),
        };
        if !report.checked {
            return report;
        }
        let d = self.dim;
        let val = |a, b, c| self.c(a, b, c).as_rational().expect("numeric");
        for a in 0..d {
            for b in 0..d {
                for c in b..d {
                    let s = val(a, b, c) + val(a, c, b);
                    if !s.is_zero() {
                        report.violations.push(format!(
                            "antisymmetry: c^{}_{{{}{}}} + c^{}_{{{}{}}} = {s}",
                            a + 1,
                            b + 1,
                            c + 1,
                            a + 1,
                            c + 1,
                            b + 1
                        ));
                    }
                }
            }
        }
        for e in 0..d {
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        let mut s = Rational::zero();
                        for x in 0..d {
                            s += val(e, a, x) * val(x, b, c);
                            s += val(e, b, x) * val(x, c, a);
                            s += val(e, c, x) * val(x, a, b);
                        }
                        if !s.is_zero() {
                            report.violations.push(format!(
                                "Jacobi identity fails for E={}, (A,B,C)=({},{},{}): {s}",
                                e + 1,
                                a + 1,
                                b + 1,
                                c + 1
                            ));
                        }
                    }
                }
            }
        }
        report
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraReport {
    /// False for symbolic constants, which cannot be checked.
    pub checked: bool,
    pub violations: Vec<String>,
}

impl AlgebraReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AlgebraReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.checked {
            return writeln!(f, "symbolic structure constants: nothing to check");
        }
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_is_valid() {
        assert!(LieAlgebraData::su2().validate().is_valid());
    }

    #[test]
    fn abelian_is_valid() {
        let a = LieAlgebraData::abelian(2);
        assert!(a.validate().is_valid());
        assert!(a.c(0, 0, 1).is_zero());
    }

    #[test]
    fn missing_partner_is_reported() {
        let a = LieAlgebraData::from_table(3, [([0, 1, 2], int(1))]).unwrap();
        let r = a.validate();
        assert!(r.violations.iter().any(|v| v.starts_with("antisymmetry")));
    }

    #[test]
    fn non_jacobi_table_is_reported() {
        // antisymmetric, but [T1,T2] = T2 and [T1,T3] = T1 is not a Lie bracket
        let a = LieAlgebraData::from_table(
            3,
            [
                ([1, 0, 1], int(1)),
                ([1, 1, 0], int(-1)),
                ([0, 0, 2], int(1)),
                ([0, 2, 0], int(-1)),
            ],
        )
        .unwrap();
        let r = a.validate();
        assert!(r.violations.iter().any(|v| v.starts_with("Jacobi")));
    }

    #[test]
    fn out_of_range_index() {
        assert!(LieAlgebraData::from_table(2, [([0, 1, 2], int(1))]).is_err());
    }
}
