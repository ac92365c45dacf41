use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use smallvec::SmallVec;

use super::{Expr, Rational, Var};
use crate::error::{Error, Result};

/// Index symmetry of a constant family, applied when atoms are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexSymmetry {
    None,
    /// Invariant under any permutation (metric, Kronecker delta).
    Symmetric,
    /// Sign of the permutation (Levi-Civita like).
    Antisymmetric,
    /// Antisymmetric in the last two slots only, as for `c^A_{BC}`.
    AntisymmetricLastTwo,
}

/// A family of indexed constants such as `eta[i,j]` or `c[A,B,C]`.
///
/// Opaque families produce symbolic atoms; bound families are replaced by
/// their numeric value as soon as they are referenced.
#[derive(Clone, Debug)]
pub struct ConstFamily {
    name: Arc<str>,
    arity: usize,
    symmetry: IndexSymmetry,
    values: Option<BTreeMap<SmallVec<[u16; 4]>, Rational>>,
}

impl ConstFamily {
    pub fn opaque(name: &str, arity: usize, symmetry: IndexSymmetry) -> Self {
        ConstFamily {
            name: Arc::from(name),
            arity,
            symmetry,
            values: None,
        }
    }

    /// A numeric family.  Missing entries are zero; entries must agree with
    /// the declared symmetry.
    pub fn bound<I>(name: &str, arity: usize, symmetry: IndexSymmetry, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, Rational)>,
    {
        let mut fam = ConstFamily::opaque(name, arity, symmetry);
        let mut table: BTreeMap<SmallVec<[u16; 4]>, Rational> = BTreeMap::new();
        for (idx, v) in entries {
            if idx.len() != arity {
                return Err(Error::Arity(format!(
                    "constant {name} expects {arity} indices, got {}",
                    idx.len()
                )));
            }
            match fam.canonical(&idx) {
                None => {
                    if !v.is_zero() {
                        return Err(Error::Algebra(format!(
                            "{name}{idx:?} must vanish by antisymmetry"
                        )));
                    }
                }
                Some((sign, key)) => {
                    let val = if sign < 0 { -v } else { v };
                    if let Some(prev) = table.get(&key) {
                        if *prev != val {
                            return Err(Error::Algebra(format!(
                                "{name}{idx:?} contradicts the declared symmetry"
                            )));
                        }
                    } else {
                        table.insert(key, val);
                    }
                }
            }
        }
        fam.values = Some(table);
        Ok(fam)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn symmetry(&self) -> IndexSymmetry {
        self.symmetry
    }

    pub fn is_bound(&self) -> bool {
        self.values.is_some()
    }

    /// Canonical index order and sign, or `None` if the entry vanishes.
    pub fn canonical(&self, idx: &[u16]) -> Option<(i8, SmallVec<[u16; 4]>)> {
        let mut v: SmallVec<[u16; 4]> = idx.iter().copied().collect();
        match self.symmetry {
            IndexSymmetry::None => Some((1, v)),
            IndexSymmetry::Symmetric => {
                v.sort_unstable();
                Some((1, v))
            }
            IndexSymmetry::Antisymmetric => {
                let mut sign = 1i8;
                for i in 0..v.len() {
                    for j in 0..v.len() - 1 - i {
                        if v[j] > v[j + 1] {
                            v.swap(j, j + 1);
                            sign = -sign;
                        }
                    }
                }
                if v.windows(2).any(|w| w[0] == w[1]) {
                    None
                } else {
                    Some((sign, v))
                }
            }
            IndexSymmetry::AntisymmetricLastTwo => {
                let k = v.len();
                if k < 2 {
                    return Some((1, v));
                }
                match v[k - 2].cmp(&v[k - 1]) {
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Less => Some((1, v)),
                    std::cmp::Ordering::Greater => {
                        v.swap(k - 2, k - 1);
                        Some((-1, v))
                    }
                }
            }
        }
    }

    /// The constant with the given indices, canonicalized.
    pub fn get(&self, idx: &[u16]) -> Result<Expr> {
        if idx.len() != self.arity {
            return Err(Error::Arity(format!(
                "constant {} expects {} indices, got {}",
                self.name,
                self.arity,
                idx.len()
            )));
        }
        let Some((sign, key)) = self.canonical(idx) else {
            return Ok(Expr::zero());
        };
        let e = match &self.values {
            Some(table) => Expr::constant(table.get(&key).cloned().unwrap_or_else(Rational::zero)),
            None => Expr::var(Var::Const(self.name.clone(), key)),
        };
        Ok(if sign < 0 { -e } else { e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::int;

    #[test]
    fn symmetric_atoms_coincide() {
        let eta = ConstFamily::opaque("eta", 2, IndexSymmetry::Symmetric);
        assert_eq!(eta.get(&[2, 1]).unwrap(), eta.get(&[1, 2]).unwrap());
    }

    #[test]
    fn structure_constants_antisymmetric_in_lower_pair() {
        let c = ConstFamily::opaque("c", 3, IndexSymmetry::AntisymmetricLastTwo);
        let a = c.get(&[1, 2, 3]).unwrap();
        let b = c.get(&[1, 3, 2]).unwrap();
        assert!((&a + &b).is_zero());
        assert!(c.get(&[1, 2, 2]).unwrap().is_zero());
        assert_ne!(c.get(&[2, 1, 3]).unwrap(), a);
    }

    #[test]
    fn bound_table_checks_symmetry() {
        let bad = ConstFamily::bound(
            "c",
            3,
            IndexSymmetry::AntisymmetricLastTwo,
            vec![(vec![1, 2, 3], int(1)), (vec![1, 3, 2], int(1))],
        );
        assert!(bad.is_err());
        let ok = ConstFamily::bound(
            "c",
            3,
            IndexSymmetry::AntisymmetricLastTwo,
            vec![(vec![1, 2, 3], int(1)), (vec![1, 3, 2], int(-1))],
        )
        .unwrap();
        assert_eq!(ok.get(&[1, 3, 2]).unwrap(), Expr::integer(-1));
        assert!(ok.get(&[2, 1, 3]).unwrap().is_zero());
    }

    #[test]
    fn arity_is_enforced() {
        let eta = ConstFamily::opaque("eta", 2, IndexSymmetry::Symmetric);
        assert!(eta.get(&[1]).is_err());
    }
}
