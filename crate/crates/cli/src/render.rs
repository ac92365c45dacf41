//! Plain, LaTeX and JSON output.
//!
//! Plain output of an expression is valid DSL input for the same problem,
//! so results can be pasted back into a problem file.

use num_traits::{One, Signed};
use serde_json::{json, Value};
use varseq_core::expr::{BundleSpec, Expr, Monomial, Rational, Var};
use varseq_core::geometry::{Factor, Form};

use crate::parse::parse_ast;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Latex,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "plain" => Ok(Format::Plain),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (expected plain, latex or json)")),
        }
    }
}

fn monomial_plain(b: &BundleSpec, m: &Monomial) -> String {
    let parts: Vec<String> = m
        .factors()
        .iter()
        .map(|(v, e)| {
            let name = b.var_name(v);
            if *e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect();
    parts.join("*")
}

/// Plain DSL text.
pub fn expr_plain(b: &BundleSpec, e: &Expr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.terms().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&monomial_plain(b, m));
        } else {
            out.push_str(&format!("{a}*{}", monomial_plain(b, m)));
        }
    }
    out
}

/// Splits a trailing run of digits off a name: `y12` gives `("y", "12")`.
fn split_label(name: &str) -> (&str, &str) {
    let cut = name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    if cut == 0 {
        (name, "")
    } else {
        name.split_at(cut)
    }
}

fn latex_name(name: &str) -> String {
    let (stem, label) = split_label(name);
    let stem = if stem.chars().count() > 1 {
        format!("\\mathrm{{{stem}}}")
    } else {
        stem.to_string()
    };
    if label.is_empty() {
        stem
    } else {
        format!("{stem}^{{{label}}}")
    }
}

fn var_latex(b: &BundleSpec, v: &Var) -> String {
    let indexed = |name: &str, idx: &varseq_core::expr::MultiIndex| {
        let base = latex_name(name);
        if idx.is_empty() {
            base
        } else {
            let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            let sep = if b.n() <= 9 { "" } else { "," };
            format!("{base}_{{{}}}", parts.join(sep))
        }
    };
    match v {
        Var::Const(name, idx) => {
            if idx.is_empty() {
                latex_name(name)
            } else {
                let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                format!("{}_{{{}}}", latex_name(name), parts.join(""))
            }
        }
        Var::Base(i) => latex_name(&b.base_names()[*i as usize]),
        Var::Jet(s, idx) => indexed(&b.fibre_names()[*s as usize], idx),
        Var::Aux(a, idx) => indexed(&b.aux_names()[*a as usize], idx),
    }
}

fn rational_latex(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

pub fn expr_latex(b: &BundleSpec, e: &Expr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in e.terms().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono: Vec<String> = m
            .factors()
            .iter()
            .map(|(v, k)| {
                let s = var_latex(b, v);
                if *k == 1 {
                    s
                } else {
                    format!("{{{s}}}^{{{k}}}")
                }
            })
            .collect();
        if m.is_one() {
            out.push_str(&rational_latex(&a));
        } else {
            if !a.is_one() {
                out.push_str(&rational_latex(&a));
                out.push(' ');
            }
            out.push_str(&mono.join(" "));
        }
    }
    out
}

fn factor_plain(b: &BundleSpec, f: &Factor) -> String {
    match f {
        Factor::Dx(i) => format!("d{}", b.base_names()[*i as usize]),
        Factor::Omega(s, idx) => format!("om({})", b.var_name(&Var::Jet(*s, idx.clone()))),
    }
}

fn factor_latex(b: &BundleSpec, f: &Factor) -> String {
    match f {
        Factor::Dx(i) => format!("d{}", latex_name(&b.base_names()[*i as usize])),
        Factor::Omega(s, idx) => {
            let name = &b.fibre_names()[*s as usize];
            let (_, label) = split_label(name);
            let sup = if label.is_empty() { latex_name(name) } else { label.to_string() };
            let sep = if b.n() <= 9 { "" } else { "," };
            let sub: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
            if sub.is_empty() {
                format!("\\omega^{{{sup}}}")
            } else {
                format!("\\omega^{{{sup}}}_{{{}}}", sub.join(sep))
            }
        }
    }
}

/// `(coeff) dx1 ^ om(y1_1) + ...`.
pub fn form_plain(b: &BundleSpec, f: &Form) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = f
        .terms()
        .map(|(basis, c)| {
            let mut s = format!("({})", expr_plain(b, c));
            if !basis.is_empty() {
                let fs: Vec<String> = basis.iter().map(|x| factor_plain(b, x)).collect();
                s.push(' ');
                s.push_str(&fs.join(" ^ "));
            }
            s
        })
        .collect();
    terms.join(" + ")
}

pub fn form_latex(b: &BundleSpec, f: &Form) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = f
        .terms()
        .map(|(basis, c)| {
            let mut s = format!("\\left({}\\right)", expr_latex(b, c));
            if !basis.is_empty() {
                let fs: Vec<String> = basis.iter().map(|x| factor_latex(b, x)).collect();
                s.push(' ');
                s.push_str(&fs.join(" \\wedge "));
            }
            s
        })
        .collect();
    terms.join(" + ")
}

/// Machine-readable terms: coefficient as `"p/q"` and factor powers.
pub fn expr_json(b: &BundleSpec, e: &Expr) -> Value {
    let terms: Vec<Value> = e
        .terms()
        .map(|(m, c)| {
            let factors: Vec<Value> = m
                .factors()
                .iter()
                .map(|(v, k)| json!({ "var": b.var_name(v), "power": k }))
                .collect();
            json!({ "coeff": c.to_string(), "factors": factors })
        })
        .collect();
    let plain = expr_plain(b, e);
    let ast = parse_ast(&plain).expect("rendered expressions parse");
    json!({ "plain": plain, "latex": expr_latex(b, e), "ast": ast, "terms": terms })
}

pub fn form_json(b: &BundleSpec, f: &Form) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .map(|(basis, c)| {
            let fs: Vec<String> = basis.iter().map(|x| factor_plain(b, x)).collect();
            json!({ "basis": fs, "coeff": expr_json(b, c) })
        })
        .collect();
    json!({ "plain": form_plain(b, f), "latex": form_latex(b, f), "terms": terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use varseq_core::expr::{rat, MultiIndex};

    #[test]
    fn plain_signs_and_coefficients() {
        let b = BundleSpec::new(2, 1, 3).unwrap();
        let y = Expr::jet(0, MultiIndex::new([0, 1]));
        let x = Expr::base(0);
        let e = &(&y.pow(2).scale(&rat(-1, 2)) + &x) - &Expr::integer(3);
        assert_eq!(expr_plain(&b, &e), "-3 + x1 - 1/2*y1_12^2");
        assert_eq!(expr_plain(&b, &Expr::zero()), "0");
        assert_eq!(expr_plain(&b, &-x), "-x1");
    }

    #[test]
    fn latex_shapes() {
        let b = BundleSpec::new(2, 1, 3).unwrap();
        let y = Expr::jet(0, MultiIndex::new([0, 1]));
        assert_eq!(expr_latex(&b, &y.pow(2).scale(&rat(1, 2))), "\\frac{1}{2} {y^{1}_{12}}^{2}");
    }

    #[test]
    fn form_plain_uses_contact_names() {
        let b = BundleSpec::new(1, 1, 3).unwrap();
        let f = Form::omega(0, MultiIndex::single(0)).wedge(&Form::dx(0));
        let s = form_plain(&b, &f);
        assert_eq!(s, "(-1) dx1 ^ om(y1_1)");
    }
}
