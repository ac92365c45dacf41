//! Expression DSL.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("-" | "+") unary | power
//! power  := atom ("^" uint)?
//! atom   := uint | symbol | "(" expr ")"
//! symbol := ident ("_" digits)? | ident "[" ints "]" | ident "[" int? ";" ints "]"
//! ```
//!
//! `y2_13` is `y^2` with multi-index `(1,3)`; digits are 1-based base
//! indices. For `n > 9` the bracket form `y2[;1,13]` is used, and
//! `y[2;1,3]` addresses the fibre named `y2`. Division is only allowed by
//! nonzero constants.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use varseq_core::expr::{BundleSpec, ConstFamily, Expr, MultiIndex, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the parsed text.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at byte {})", self.message, self.offset)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        offset,
        message: message.into(),
    })
}

/// Subscript attached to a symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subscript {
    None,
    /// `name_13`.
    Digits(Vec<u16>),
    /// `name[1,2]`.
    List(Vec<u16>),
    /// `name[;1,3]` or `name[2;1,3]`.
    Jet { slot: Option<u16>, index: Vec<u16> },
}

/// Parse tree; serialized into JSON output next to each expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ast {
    Integer(u64),
    Symbol {
        name: String,
        subscript: Subscript,
        offset: usize,
    },
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Pow(Box<Ast>, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Underscore,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let bytes = src.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            let start = i;
            let tok = match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    i += 1;
                    continue;
                }
                b'0'..=b'9' => {
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let v: u64 = src[start..i]
                        .parse()
                        .or_else(|_| err(start, "integer literal too large"))?;
                    toks.push((Tok::Int(v), start, i));
                    continue;
                }
                b'a'..=b'z' | b'A'..=b'Z' => {
                    while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    toks.push((Tok::Ident, start, i));
                    continue;
                }
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'/' => Tok::Slash,
                b'^' => Tok::Caret,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBracket,
                b']' => Tok::RBracket,
                b',' => Tok::Comma,
                b';' => Tok::Semi,
                b'_' => Tok::Underscore,
                _ => {
                    let ch = src[i..].chars().next().unwrap_or('?');
                    return err(i, format!("unexpected character '{ch}'"));
                }
            };
            i += 1;
            toks.push((tok, start, i));
        }
        toks.push((Tok::End, src.len(), src.len()));
        Ok(Lexer { src, toks, pos: 0 })
    }

    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn text(&self) -> &'a str {
        let (_, a, b) = self.toks[self.pos];
        &self.src[a..b]
    }

    /// True if the current token starts right where the previous one ended.
    fn adjacent(&self) -> bool {
        self.pos > 0 && self.toks[self.pos - 1].2 == self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == t {
            self.bump();
            Ok(())
        } else {
            err(self.offset(), format!("expected {what}"))
        }
    }
}

/// Parses text into an AST without resolving names.
pub fn parse_ast(src: &str) -> Result<Ast, ParseError> {
    let mut lx = Lexer::new(src)?;
    if lx.peek() == Tok::End {
        return err(0, "empty expression");
    }
    let e = expr(&mut lx)?;
    if lx.peek() != Tok::End {
        return err(lx.offset(), format!("unexpected '{}'", lx.text()));
    }
    Ok(e)
}

fn expr(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let mut lhs = term(lx)?;
    loop {
        match lx.peek() {
            Tok::Plus => {
                lx.bump();
                lhs = Ast::Add(Box::new(lhs), Box::new(term(lx)?));
            }
            Tok::Minus => {
                lx.bump();
                lhs = Ast::Sub(Box::new(lhs), Box::new(term(lx)?));
            }
            _ => return Ok(lhs),
        }
    }
}

fn term(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let mut lhs = unary(lx)?;
    loop {
        match lx.peek() {
            Tok::Star => {
                lx.bump();
                lhs = Ast::Mul(Box::new(lhs), Box::new(unary(lx)?));
            }
            Tok::Slash => {
                let at = lx.offset();
                lx.bump();
                lhs = Ast::Div(Box::new(lhs), Box::new(unary(lx)?), at);
            }
            _ => return Ok(lhs),
        }
    }
}

fn unary(lx: &mut Lexer) -> Result<Ast, ParseError> {
    match lx.peek() {
        Tok::Minus => {
            lx.bump();
            Ok(Ast::Neg(Box::new(unary(lx)?)))
        }
        Tok::Plus => {
            lx.bump();
            unary(lx)
        }
        _ => power(lx),
    }
}

fn power(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let base = atom(lx)?;
    if lx.peek() != Tok::Caret {
        return Ok(base);
    }
    lx.bump();
    let at = lx.offset();
    match lx.bump() {
        Tok::Int(v) => {
            let e = u32::try_from(v).or_else(|_| err(at, "exponent too large"))?;
            Ok(Ast::Pow(Box::new(base), e))
        }
        Tok::Minus => err(at, "negative exponents are not polynomial"),
        _ => err(at, "expected a non-negative integer exponent"),
    }
}

fn atom(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let at = lx.offset();
    match lx.peek() {
        Tok::Int(v) => {
            lx.bump();
            Ok(Ast::Integer(v))
        }
        Tok::LParen => {
            lx.bump();
            let e = expr(lx)?;
            lx.expect(Tok::RParen, "')'")?;
            Ok(e)
        }
        Tok::Ident => {
            let name = lx.text().to_string();
            lx.bump();
            let subscript = if lx.peek() == Tok::Underscore && lx.adjacent() {
                lx.bump();
                let dat = lx.offset();
                if !lx.adjacent() {
                    return err(dat, "expected digits after '_'");
                }
                match lx.peek() {
                    Tok::Int(_) => {
                        let digits: Vec<u16> = lx.text().bytes().map(|b| (b - b'0') as u16).collect();
                        lx.bump();
                        if digits.contains(&0) {
                            return err(dat, "base indices start at 1");
                        }
                        Subscript::Digits(digits)
                    }
                    _ => return err(dat, "expected digits after '_'"),
                }
            } else if lx.peek() == Tok::LBracket && lx.adjacent() {
                lx.bump();
                bracket(lx)?
            } else {
                Subscript::None
            };
            Ok(Ast::Symbol {
                name,
                subscript,
                offset: at,
            })
        }
        Tok::End => err(at, "unexpected end of expression"),
        _ => err(at, format!("unexpected '{}'", lx.text())),
    }
}

fn int_list(lx: &mut Lexer, stop: &[Tok]) -> Result<Vec<u16>, ParseError> {
    let mut out = Vec::new();
    if stop.contains(&lx.peek()) {
        return Ok(out);
    }
    loop {
        let at = lx.offset();
        match lx.bump() {
            Tok::Int(v) => out.push(u16::try_from(v).or_else(|_| err(at, "index too large"))?),
            _ => return err(at, "expected an integer index"),
        }
        if lx.peek() == Tok::Comma {
            lx.bump();
        } else {
            return Ok(out);
        }
    }
}

fn bracket(lx: &mut Lexer) -> Result<Subscript, ParseError> {
    let first = int_list(lx, &[Tok::Semi, Tok::RBracket])?;
    let sub = if lx.peek() == Tok::Semi {
        let at = lx.offset();
        lx.bump();
        let slot = match first.as_slice() {
            [] => None,
            [s] => Some(*s),
            _ => return err(at, "at most one fibre label before ';'"),
        };
        let index = int_list(lx, &[Tok::RBracket])?;
        Subscript::Jet { slot, index }
    } else {
        Subscript::List(first)
    };
    lx.expect(Tok::RBracket, "']'")?;
    Ok(sub)
}

/// Names an expression may refer to.
#[derive(Clone, Copy)]
pub struct Scope<'a> {
    pub bundle: &'a BundleSpec,
    pub constants: &'a BTreeMap<String, ConstFamily>,
}

impl<'a> Scope<'a> {
    pub fn new(bundle: &'a BundleSpec, constants: &'a BTreeMap<String, ConstFamily>) -> Self {
        Scope { bundle, constants }
    }

    pub fn parse(&self, src: &str) -> Result<Expr, ParseError> {
        self.lower(&parse_ast(src)?)
    }

    pub fn lower(&self, ast: &Ast) -> Result<Expr, ParseError> {
        Ok(match ast {
            Ast::Integer(v) => Expr::constant(Rational::from_integer((*v).into())),
            Ast::Neg(a) => -self.lower(a)?,
            Ast::Add(a, b) => &self.lower(a)? + &self.lower(b)?,
            Ast::Sub(a, b) => &self.lower(a)? - &self.lower(b)?,
            Ast::Mul(a, b) => &self.lower(a)? * &self.lower(b)?,
            Ast::Div(a, b, at) => {
                let d = self.lower(b)?;
                match d.as_rational() {
                    Some(r) if !r.is_zero() => self.lower(a)?.scale(&(Rational::one() / r)),
                    Some(_) => return err(*at, "division by zero"),
                    None => return err(*at, "division by a non-constant is not polynomial"),
                }
            }
            Ast::Pow(a, e) => self.lower(a)?.pow(*e),
            Ast::Symbol {
                name,
                subscript,
                offset,
            } => self.symbol(name, subscript, *offset)?,
        })
    }

    fn multi_index(&self, idx: &[u16], at: usize) -> Result<MultiIndex, ParseError> {
        let n = self.bundle.n();
        let mut out = Vec::with_capacity(idx.len());
        for &i in idx {
            if i == 0 || i as usize > n {
                return err(at, format!("base index {i} out of range 1..={n}"));
            }
            out.push(i as usize - 1);
        }
        if out.len() > self.bundle.r_max() {
            return err(
                at,
                format!("jet order {} exceeds the maximum order {}", out.len(), self.bundle.r_max()),
            );
        }
        Ok(MultiIndex::new(out))
    }

    fn jet_like(&self, name: &str, idx: MultiIndex) -> Option<Expr> {
        if let Some(s) = self.bundle.fibre_names().iter().position(|f| f == name) {
            return Some(Expr::jet(s, idx));
        }
        self.bundle.aux_index(name).map(|a| Expr::aux(a, idx))
    }

    fn symbol(&self, name: &str, sub: &Subscript, at: usize) -> Result<Expr, ParseError> {
        if let Some(i) = self.bundle.base_names().iter().position(|b| b == name) {
            return match sub {
                Subscript::None => Ok(Expr::base(i)),
                _ => err(at, format!("base coordinate {name} takes no subscript")),
            };
        }
        if let Some(fam) = self.constants.get(name) {
            let idx: &[u16] = match sub {
                Subscript::None => &[],
                Subscript::List(v) => v,
                _ => return err(at, format!("constant {name} takes indices as {name}[i,j,...]")),
            };
            return fam.get(idx).or_else(|e| err(at, e.to_string()));
        }
        let (target, index): (String, &[u16]) = match sub {
            Subscript::None => (name.to_string(), &[]),
            Subscript::Digits(d) => (name.to_string(), d),
            Subscript::Jet { slot: None, index } => (name.to_string(), index),
            Subscript::Jet { slot: Some(s), index } => (format!("{name}{s}"), index),
            Subscript::List(_) => return err(at, format!("undeclared constant family '{name}'")),
        };
        let idx = self.multi_index(index, at)?;
        match self.jet_like(&target, idx) {
            Some(e) => Ok(e),
            None => err(at, format!("undeclared identifier '{target}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use varseq_core::expr::{int, rat, IndexSymmetry};

    fn scope_data() -> (BundleSpec, BTreeMap<String, ConstFamily>) {
        let b = BundleSpec::new(3, 2, 4).unwrap().with_aux(vec!["f".into()]).unwrap();
        let mut c = BTreeMap::new();
        c.insert("eta".into(), ConstFamily::opaque("eta", 2, IndexSymmetry::Symmetric));
        c.insert(
            "c".into(),
            ConstFamily::opaque("c", 3, IndexSymmetry::AntisymmetricLastTwo),
        );
        (b, c)
    }

    #[test]
    fn jet_coordinate_with_sorted_index() {
        let (b, c) = scope_data();
        let s = Scope::new(&b, &c);
        assert_eq!(s.parse("y2_31").unwrap(), Expr::jet(1, MultiIndex::new([0, 2])));
        assert_eq!(s.parse("y1_11").unwrap(), Expr::jet(0, MultiIndex::new([0, 0])));
        assert_eq!(s.parse("y[2;1,3]").unwrap(), Expr::jet(1, MultiIndex::new([0, 2])));
        assert_eq!(s.parse("y2[;3,1]").unwrap(), Expr::jet(1, MultiIndex::new([0, 2])));
        assert_eq!(s.parse("f_2").unwrap(), Expr::aux(0, MultiIndex::single(1)));
    }

    #[test]
    fn indexed_constants() {
        let (b, c) = scope_data();
        let s = Scope::new(&b, &c);
        let e = s.parse("eta[1,2]*c[1,2,3]").unwrap();
        let f = s.parse("eta[2,1]*c[1,2,3]").unwrap();
        assert_eq!(e, f);
        assert_eq!(e.len(), 1);
        assert!(s.parse("c[1,2,2]").unwrap().is_zero());
        assert_eq!(s.parse("c[1,3,2]").unwrap(), -s.parse("c[1,2,3]").unwrap());
    }

    #[test]
    fn free_particle_density() {
        let b = BundleSpec::new(1, 1, 4).unwrap();
        let c = BTreeMap::new();
        let s = Scope::new(&b, &c);
        let e = s.parse("1/2 * y1_1^2").unwrap();
        assert_eq!(e, Expr::jet(0, MultiIndex::single(0)).pow(2).scale(&rat(1, 2)));
        let ast = parse_ast("1/2 * y1_1^2").unwrap();
        let y11 = Ast::Symbol {
            name: "y1".into(),
            subscript: Subscript::Digits(vec![1]),
            offset: 6,
        };
        let expected = Ast::Mul(
            Box::new(Ast::Div(Box::new(Ast::Integer(1)), Box::new(Ast::Integer(2)), 1)),
            Box::new(Ast::Pow(Box::new(y11), 2)),
        );
        assert_eq!(ast, expected);
    }

    #[test]
    fn precedence_and_unary_minus() {
        let (b, c) = scope_data();
        let s = Scope::new(&b, &c);
        let x = Expr::base(0);
        assert_eq!(s.parse("-x1^2").unwrap(), -x.pow(2));
        assert_eq!(s.parse("(-x1)^2").unwrap(), x.pow(2));
        assert_eq!(s.parse("2 - -x1").unwrap(), &Expr::integer(2) + &x);
        assert_eq!(s.parse("x1/2/3").unwrap(), x.scale(&rat(1, 6)));
        assert_eq!(s.parse("2*3 + 4").unwrap(), Expr::constant(int(10)));
    }

    #[test]
    fn errors_carry_offsets() {
        let (b, c) = scope_data();
        let s = Scope::new(&b, &c);
        assert_eq!(s.parse("x1 + q").unwrap_err().offset, 5);
        assert!(s.parse("x1 / y1").unwrap_err().message.contains("non-constant"));
        assert!(s.parse("x1^-1").is_err());
        assert!(s.parse("y1_4").unwrap_err().message.contains("out of range"));
        assert!(s.parse("y1_11111").unwrap_err().message.contains("exceeds"));
        assert!(s.parse("sin(x1)").is_err());
        assert!(s.parse("x1 +").is_err());
        assert!(s.parse("(x1").is_err());
        assert!(s.parse("").is_err());
        assert!(s.parse("x1_1").is_err());
        assert!(s.parse("x1 $").unwrap_err().message.contains("unexpected character"));
        assert!(s.parse("1/0").unwrap_err().message.contains("zero"));
    }
}
