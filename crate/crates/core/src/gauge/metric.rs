use crate::error::{Error, Result};
use crate::expr::{ConstFamily, Expr, IndexSymmetry};

/// Constant background metric `η^{μν}`: diagonal `±1` or a symbolic
/// symmetric family.
#[derive(Clone, Debug)]
pub struct MetricSpec {
    n: usize,
    diagonal: Option<Vec<i8>>,
    symbolic: ConstFamily,
}

impl MetricSpec {
    /// Signature `(+, -, ..., -)`.
    pub fn minkowski(n: usize) -> Self {
        let diag = (0..n).map(|i| if i == 0 { 1 } else { -1 }).collect();
        MetricSpec::diagonal(diag).expect("entries are ±1")
    }

    pub fn diagonal(entries: Vec<i8>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Bundle("metric needs at least one entry".into()));
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Bundle(format!("diagonal metric entries must be ±1, got {entries:?}")));
        }
        Ok(MetricSpec {
            n: entries.len(),
            diagonal: Some(entries),
            symbolic: ConstFamily::opaque("eta", 2, IndexSymmetry::Symmetric),
        })
    }

    /// Symbolic symmetric `eta[μ,ν]`.
    pub fn symbolic(n: usize) -> Self {
        MetricSpec {
            n,
            diagonal: None,
            symbolic: ConstFamily::opaque("eta", 2, IndexSymmetry::Symmetric),
        }
    }

    /// The same metric with every sign flipped.
    pub fn flipped(&self) -> Self {
        match &self.diagonal {
            Some(d) => MetricSpec::diagonal(d.iter().map(|e| -e).collect()).expect("±1"),
            None => self.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> Option<&[i8]> {
        self.diagonal.as_deref()
    }

    /// `η^{μν}`, 0-based.
    pub fn inv(&self, mu: usize, nu: usize) -> Expr {
        match &self.diagonal {
            Some(d) if mu == nu => Expr::integer(d[mu] as i64),
            Some(_) => Expr::zero(),
            None => self.symbolic.get(&[mu as u16 + 1, nu as u16 + 1]).expect("arity 2"),
        }
    }
}
