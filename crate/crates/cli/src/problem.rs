//! TOML problem files.
//!
//! ```toml
//! lagrangian = "1/2*y1_1^2"
//!
//! [bundle]
//! n = 1          # or base = ["t"]
//! m = 1          # or fibre = ["q"]
//! order = 6
//!
//! [fields.X]
//! base = ["0"]
//! fibre = ["x1"]
//! ```
//!
//! A `[gauge]` table replaces `[bundle]` and `lagrangian` with a generated
//! Yang-Mills problem.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use toml::Spanned;
use varseq_core::expr::{BundleSpec, ConstFamily, Expr, IndexSymmetry, Rational};
use varseq_core::gauge::{JacobiSlot, LieAlgebraData, MetricSpec, YangMills};
use varseq_core::geometry::{Form, VectorField};
use varseq_core::variational::Suite;

use crate::error::{line_col, CliError};
use crate::parse::{ParseError, Scope};
use crate::render::Format;

pub const DEFAULT_ORDER: usize = 6;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    lagrangian: Option<Spanned<String>>,
    source: Option<Vec<Spanned<String>>>,
    bundle: Option<RawBundle>,
    #[serde(default)]
    constants: BTreeMap<String, RawConstant>,
    #[serde(default)]
    fields: BTreeMap<String, Spanned<RawField>>,
    #[serde(default)]
    options: RawOptions,
    gauge: Option<Spanned<RawGauge>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    base: Option<Vec<String>>,
    fibre: Option<Vec<String>>,
    n: Option<usize>,
    m: Option<usize>,
    order: Option<usize>,
    #[serde(default)]
    functions: Vec<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNumber {
    Int(i64),
    Text(String),
}

impl RawNumber {
    fn to_rational(&self) -> Result<Rational, String> {
        match self {
            RawNumber::Int(v) => Ok(Rational::from_integer((*v).into())),
            RawNumber::Text(s) => s
                .trim()
                .parse::<Rational>()
                .map_err(|_| format!("'{s}' is not a rational number")),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    index: Vec<u16>,
    value: RawNumber,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstant {
    #[serde(default)]
    arity: usize,
    #[serde(default)]
    symmetry: Option<String>,
    values: Option<Vec<RawEntry>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    base: Option<Vec<Spanned<String>>>,
    fibre: Vec<Spanned<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    seed: Option<u64>,
    format: Option<String>,
    suite: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSignature {
    Named(String),
    List(Vec<i8>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGauge {
    algebra: String,
    dim: Option<usize>,
    n: usize,
    signature: Option<RawSignature>,
    structure: Option<Vec<RawEntry>>,
    order: Option<usize>,
}

/// A fully resolved problem.
pub struct Problem {
    pub bundle: BundleSpec,
    pub constants: BTreeMap<String, ConstFamily>,
    pub lagrangian: Option<Form>,
    pub source: Option<Vec<Expr>>,
    pub fields: Vec<(String, VectorField)>,
    pub gauge: Option<YangMills>,
    pub seed: u64,
    pub format: Option<Format>,
    pub suite: Option<Suite>,
}

impl Problem {
    pub fn field(&self, name: &str) -> Result<&VectorField, CliError> {
        self.fields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
            .ok_or_else(|| {
                let known: Vec<&str> = self.fields.iter().map(|(n, _)| n.as_str()).collect();
                CliError::Usage(format!("unknown field '{name}' (declared: {})", known.join(", ")))
            })
    }

    pub fn lagrangian(&self) -> Result<&Form, CliError> {
        self.lagrangian
            .as_ref()
            .ok_or_else(|| CliError::Usage("problem declares no lagrangian".into()))
    }
}

pub fn parse_suite(s: &str) -> Result<Suite, String> {
    Ok(match s {
        "all" => Suite::All,
        "operators" => Suite::Operators,
        "variation" => Suite::Variation,
        "conservation" | "conservation-laws" => Suite::ConservationLaws,
        "jacobi" => Suite::Jacobi,
        "noether" => Suite::Noether,
        _ => {
            return Err(format!(
                "unknown suite '{s}' (expected all, operators, variation, conservation, jacobi or noether)"
            ))
        }
    })
}

fn parse_symmetry(s: Option<&str>) -> Result<IndexSymmetry, String> {
    Ok(match s.unwrap_or("none") {
        "none" => IndexSymmetry::None,
        "symmetric" => IndexSymmetry::Symmetric,
        "antisymmetric" => IndexSymmetry::Antisymmetric,
        "antisymmetric-last-two" => IndexSymmetry::AntisymmetricLastTwo,
        other => return Err(format!("unknown symmetry '{other}'")),
    })
}

fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic()) && c.all(|ch| ch.is_ascii_alphanumeric())
}

struct Loader<'a> {
    file: &'a str,
    src: &'a str,
}

impl Loader<'_> {
    fn error_at(&self, offset: usize, msg: impl Into<String>) -> CliError {
        let (line, col) = line_col(self.src, offset);
        CliError::Parse {
            file: self.file.to_string(),
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Maps an offset inside a TOML string value back to the file.
    fn string_offset(&self, s: &Spanned<String>, inner: usize) -> usize {
        let start = s.span().start;
        let raw = &self.src[start..s.span().end.min(self.src.len())];
        let quote = if raw.starts_with("\"\"\"") || raw.starts_with("'''") { 3 } else { 1 };
        start + quote + inner
    }

    fn expr(&self, scope: &Scope, s: &Spanned<String>) -> Result<Expr, CliError> {
        scope.parse(s.get_ref()).map_err(|ParseError { offset, message }| {
            self.error_at(self.string_offset(s, offset), message)
        })
    }
}

pub fn load(path: &Path) -> Result<Problem, CliError> {
    let src = std::fs::read_to_string(path)?;
    load_str(&path.display().to_string(), &src)
}

pub fn load_str(file: &str, src: &str) -> Result<Problem, CliError> {
    let ld = Loader { file, src };
    let raw: RawProblem = toml::from_str(src).map_err(|e| {
        let offset = e.span().map(|r| r.start).unwrap_or(0);
        ld.error_at(offset, e.message().to_string())
    })?;

    let mut constants = BTreeMap::new();
    for (name, c) in &raw.constants {
        if !is_identifier(name) {
            return Err(CliError::Usage(format!("invalid constant name '{name}'")));
        }
        let sym = parse_symmetry(c.symmetry.as_deref()).map_err(CliError::Usage)?;
        let fam = match &c.values {
            None => ConstFamily::opaque(name, c.arity, sym),
            Some(vals) => {
                let mut entries = Vec::new();
                for v in vals {
                    entries.push((v.index.clone(), v.value.to_rational().map_err(CliError::Usage)?));
                }
                ConstFamily::bound(name, c.arity, sym, entries)?
            }
        };
        constants.insert(name.clone(), fam);
    }

    let (bundle, gauge, generated) = match (&raw.gauge, &raw.bundle) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("a problem has either [bundle] or [gauge], not both".into()))
        }
        (Some(g), None) => {
            if raw.lagrangian.is_some() {
                return Err(ld.error_at(g.span().start, "the Lagrangian is generated in gauge mode"));
            }
            let ym = gauge(&ld, g)?;
            for fam in [ym.algebra().family().name(), "eta"] {
                if constants.contains_key(fam) {
                    return Err(CliError::Usage(format!("constant '{fam}' is reserved in gauge mode")));
                }
            }
            if !ym.algebra().is_numeric() {
                constants.insert("c".into(), ym.algebra().family().clone());
            }
            if ym.metric().signature().is_none() {
                constants.insert("eta".into(), ConstFamily::opaque("eta", 2, IndexSymmetry::Symmetric));
            }
            let lambda = ym.lagrangian();
            (ym.bundle().clone(), Some(ym), Some(lambda))
        }
        (None, Some(b)) => (bundle(b)?, None, None),
        (None, None) => return Err(CliError::Usage("problem needs a [bundle] or [gauge] table".into())),
    };

    for name in constants.keys() {
        let clash = bundle.base_names().contains(name)
            || bundle.fibre_names().contains(name)
            || bundle.aux_names().contains(name);
        if clash {
            return Err(CliError::Usage(format!("constant '{name}' clashes with a coordinate")));
        }
    }

    let scope = Scope::new(&bundle, &constants);
    let lagrangian = match (&raw.lagrangian, generated) {
        (_, Some(l)) => Some(l),
        (Some(s), None) => Some(Form::lagrangian(&bundle, ld.expr(&scope, s)?)),
        (None, None) => None,
    };
    let source = match &raw.source {
        None => None,
        Some(list) => {
            if list.len() != bundle.m() {
                return Err(CliError::Usage(format!(
                    "source has {} components, the fibre has {}",
                    list.len(),
                    bundle.m()
                )));
            }
            Some(list.iter().map(|s| ld.expr(&scope, s)).collect::<Result<_, _>>()?)
        }
    };

    let mut fields = Vec::new();
    if let Some(ym) = &gauge {
        fields.push(("Xi".to_string(), ym.field(JacobiSlot::Xi)));
        fields.push(("Xt".to_string(), ym.field(JacobiSlot::Tilde)));
    }
    for (name, f) in &raw.fields {
        if fields.iter().any(|(n, _)| n == name) {
            return Err(ld.error_at(f.span().start, format!("field '{name}' is already defined")));
        }
        let rf = f.get_ref();
        let comps = |list: &[Spanned<String>], want: usize, what: &str| -> Result<Vec<Expr>, CliError> {
            if list.len() != want {
                return Err(ld.error_at(
                    f.span().start,
                    format!("field '{name}' needs {want} {what} components, got {}", list.len()),
                ));
            }
            list.iter().map(|s| ld.expr(&scope, s)).collect()
        };
        let base = match &rf.base {
            Some(list) => comps(list, bundle.n(), "base")?,
            None => vec![Expr::zero(); bundle.n()],
        };
        let fibre = comps(&rf.fibre, bundle.m(), "fibre")?;
        let vf = VectorField::new(&bundle, base, fibre)
            .map_err(|e| ld.error_at(f.span().start, format!("field '{name}': {e}")))?;
        fields.push((name.clone(), vf));
    }

    let format = raw
        .options
        .format
        .as_deref()
        .map(str::parse::<Format>)
        .transpose()
        .map_err(CliError::Usage)?;
    let suite = raw
        .options
        .suite
        .as_deref()
        .map(parse_suite)
        .transpose()
        .map_err(CliError::Usage)?;

    Ok(Problem {
        bundle,
        constants,
        lagrangian,
        source,
        fields,
        gauge,
        seed: raw.options.seed.unwrap_or(0),
        format,
        suite,
    })
}

fn bundle(b: &RawBundle) -> Result<BundleSpec, CliError> {
    let names = |list: &Option<Vec<String>>, count: Option<usize>, prefix: &str, what: &str| {
        match (list, count) {
            (Some(_), Some(_)) => Err(CliError::Usage(format!("give either {what} names or a count, not both"))),
            (Some(l), None) => {
                if let Some(bad) = l.iter().find(|s| !is_identifier(s)) {
                    return Err(CliError::Usage(format!("invalid coordinate name '{bad}'")));
                }
                Ok(l.clone())
            }
            (None, Some(k)) => Ok((1..=k).map(|i| format!("{prefix}{i}")).collect()),
            (None, None) => Err(CliError::Usage(format!("[bundle] needs {what} names or a count"))),
        }
    };
    let base = names(&b.base, b.n, "x", "base")?;
    let fibre = names(&b.fibre, b.m, "y", "fibre")?;
    if let Some(bad) = b.functions.iter().find(|s| !is_identifier(s)) {
        return Err(CliError::Usage(format!("invalid function name '{bad}'")));
    }
    let spec = BundleSpec::with_names(base, fibre, b.order.unwrap_or(DEFAULT_ORDER))?;
    Ok(spec.with_aux(b.functions.clone())?)
}

fn gauge(ld: &Loader, g: &Spanned<RawGauge>) -> Result<YangMills, CliError> {
    let at = g.span().start;
    let rg = g.get_ref();
    let n = rg.n;
    let alg = match rg.algebra.as_str() {
        "abelian" => LieAlgebraData::abelian(rg.dim.unwrap_or(1)),
        "su2" => {
            if rg.dim.is_some_and(|d| d != 3) {
                return Err(ld.error_at(at, "su2 has dimension 3"));
            }
            LieAlgebraData::su2()
        }
        "symbolic" => LieAlgebraData::opaque(rg.dim.ok_or_else(|| ld.error_at(at, "symbolic algebra needs dim"))?),
        "table" => {
            let dim = rg.dim.ok_or_else(|| ld.error_at(at, "table algebra needs dim"))?;
            let mut entries = Vec::new();
            for e in rg.structure.iter().flatten() {
                let idx: Vec<usize> = e.index.iter().map(|&i| i as usize).collect();
                if idx.len() != 3 || idx.iter().any(|&i| i == 0 || i > dim) {
                    return Err(ld.error_at(at, format!("bad structure constant index {:?}", e.index)));
                }
                let v = e.value.to_rational().map_err(|m| ld.error_at(at, m))?;
                entries.push(([idx[0] - 1, idx[1] - 1, idx[2] - 1], v));
            }
            LieAlgebraData::from_table(dim, entries)?
        }
        other => return Err(ld.error_at(at, format!("unknown algebra '{other}'"))),
    };
    if rg.structure.is_some() && rg.algebra != "table" {
        return Err(ld.error_at(at, "structure constants are only read for algebra = \"table\""));
    }
    let metric = match &rg.signature {
        None => MetricSpec::minkowski(n),
        Some(RawSignature::Named(s)) => match s.as_str() {
            "mostly-minus" => MetricSpec::minkowski(n),
            "mostly-plus" => MetricSpec::minkowski(n).flipped(),
            "symbolic" => MetricSpec::symbolic(n),
            other => return Err(ld.error_at(at, format!("unknown signature '{other}'"))),
        },
        Some(RawSignature::List(v)) => {
            if v.len() != n {
                return Err(ld.error_at(at, format!("signature has {} entries, n = {n}", v.len())));
            }
            MetricSpec::diagonal(v.clone())?
        }
    };
    Ok(YangMills::with_r_max(alg, metric, rg.order.unwrap_or(YangMills::DEFAULT_R_MAX))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_particle_problem() {
        let src = r#"
lagrangian = "1/2*q_1^2"
[bundle]
base = ["t"]
fibre = ["q"]
[fields.T]
base = ["1"]
fibre = ["0"]
"#;
        let p = load_str("p.toml", src).unwrap();
        assert_eq!(p.bundle.r_max(), DEFAULT_ORDER);
        assert_eq!(p.fields.len(), 1);
        assert!(p.lagrangian.is_some());
    }

    #[test]
    fn expression_errors_point_into_the_file() {
        let src = "lagrangian = \"q_1 + zz\"\n[bundle]\nbase = [\"t\"]\nfibre = [\"q\"]\n";
        match load_str("p.toml", src) {
            Err(CliError::Parse { line, col, msg, .. }) => {
                assert_eq!((line, col), (1, 21), "{msg}");
                assert!(msg.contains("zz"));
            }
            Err(e) => panic!("{e}"),
            Ok(_) => panic!("accepted"),
        }
    }

    #[test]
    fn toml_errors_have_positions() {
        let src = "lagrangian = \n[bundle]\n";
        assert!(matches!(load_str("p.toml", src), Err(CliError::Parse { line: 1, .. })));
        let src = "lagrangian = \"x1\"\n[bundle]\nn = 1\nm = 1\nbogus = 3\n";
        assert!(matches!(load_str("p.toml", src), Err(CliError::Parse { line: 5, .. })));
    }

    #[test]
    fn gauge_problem_generates_fields() {
        let src = "[gauge]\nalgebra = \"su2\"\nn = 2\n";
        let p = load_str("g.toml", src).unwrap();
        assert_eq!(p.bundle.m(), 6);
        let names: Vec<&str> = p.fields.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["Xi", "Xt"]);
        let src = "[gauge]\nalgebra = \"symbolic\"\ndim = 2\nn = 2\nsignature = \"symbolic\"\n";
        let p = load_str("g.toml", src).unwrap();
        assert!(p.constants.contains_key("c") && p.constants.contains_key("eta"));
    }

    #[test]
    fn bound_constants_substitute() {
        let src = r#"
lagrangian = "k*y1^2"
[bundle]
n = 1
m = 1
[constants.k]
values = [{ index = [], value = "3/2" }]
"#;
        let p = load_str("p.toml", src).unwrap();
        let d = p.lagrangian.unwrap().density(&p.bundle).unwrap();
        assert_eq!(d, Expr::jet(0, Default::default()).pow(2).scale(&varseq_core::expr::rat(3, 2)));
    }
}
