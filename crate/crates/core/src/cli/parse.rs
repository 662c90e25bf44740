//! Polynomial expressions in `T` with coefficients built from rationals and
//! the uniformizers `pi(i)`.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? uint)?
//! atom    := uint | 'pi' '(' uint ')' | 'T' | '(' sum ')'
//! ```
//!
//! Division needs a constant single-term right side and negative powers a
//! constant single-term base, so every value stays a polynomial in `T`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::poly::{SymCoeff, SymPoly};
use crate::{Error, Result};

/// Location in the input, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Pi,
    T,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: i + 1 };
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' | '·' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            'T' => Tok::T,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("digits")), pos));
                continue;
            }
            'p' if chars.get(i + 1) == Some(&'i') => {
                i += 2;
                out.push((Tok::Pi, pos));
                continue;
            }
            'π' => Tok::Pi,
            _ => return Err(pos.error(format!("unexpected character '{c}'"))),
        };
        out.push((tok, pos));
        i += 1;
    }
    out.push((
        Tok::End,
        Pos {
            line,
            column: chars.len() + 1,
        },
    ));
    Ok(out)
}

/// Polynomial in `T` with a possible constant term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Value(BTreeMap<usize, SymCoeff>);

impl Value {
    fn constant(c: SymCoeff) -> Self {
        let mut v = Value::default();
        if !c.is_zero() {
            v.0.insert(0, c);
        }
        v
    }

    fn t() -> Self {
        let mut v = Value::default();
        v.0.insert(1, SymCoeff::one());
        v
    }

    fn add(&self, other: &Value) -> Value {
        let mut out = self.0.clone();
        for (&i, c) in &other.0 {
            let s = out.get(&i).map_or_else(|| c.clone(), |a| a.add(c));
            if s.is_zero() {
                out.remove(&i);
            } else {
                out.insert(i, s);
            }
        }
        Value(out)
    }

    fn neg(&self) -> Value {
        Value(self.0.iter().map(|(&i, c)| (i, c.neg())).collect())
    }

    fn mul(&self, other: &Value) -> Value {
        let mut acc = Value::default();
        for (&i, a) in &self.0 {
            let part = Value(other.0.iter().map(|(&j, b)| (i + j, a.mul(b))).collect());
            acc = acc.add(&part);
        }
        acc
    }

    /// The value as a coefficient, when it does not involve `T`.
    fn as_constant(&self) -> Option<SymCoeff> {
        match self.0.keys().next_back() {
            None => Some(SymCoeff::zero()),
            Some(0) => Some(self.0[&0].clone()),
            Some(_) => None,
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    pi_uses: Vec<(u32, Pos)>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let (t, pos) = self.bump();
        if t == tok {
            Ok(())
        } else {
            Err(pos.error(format!("expected {what}")))
        }
    }

    fn uint(&mut self, what: &str) -> Result<(BigInt, Pos)> {
        match self.bump() {
            (Tok::Int(n), pos) => Ok((n, pos)),
            (_, pos) => Err(pos.error(format!("expected {what}"))),
        }
    }

    /// Top-level terms with their starting positions.
    fn sum(&mut self) -> Result<Vec<(Value, Pos)>> {
        let mut terms = Vec::new();
        let pos = self.pos();
        terms.push((self.product()?, pos));
        loop {
            let negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            let pos = self.pos();
            let t = self.product()?;
            terms.push((if negate { t.neg() } else { t }, pos));
        }
        Ok(terms)
    }

    fn sum_value(&mut self) -> Result<Value> {
        Ok(self
            .sum()?
            .iter()
            .fold(Value::default(), |acc, (t, _)| acc.add(t)))
    }

    fn product(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    let inv = rhs
                        .as_constant()
                        .filter(|c| !c.is_zero())
                        .and_then(|c| c.pow(-1))
                        .ok_or_else(|| pos.error("divisor must be a nonzero single-term constant"))?;
                    acc = acc.mul(&Value::constant(inv));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base_pos = self.pos();
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let (n, pos) = self.uint("an integer exponent")?;
        let n: u32 = n.try_into().map_err(|_| pos.error("exponent too large"))?;
        if negative {
            let inv = base
                .as_constant()
                .filter(|c| !c.is_zero())
                .and_then(|c| c.pow(-(n as i64)))
                .ok_or_else(|| base_pos.error("negative powers need a nonzero single-term constant"))?;
            return Ok(Value::constant(inv));
        }
        Ok((0..n).fold(Value::constant(SymCoeff::one()), |acc, _| acc.mul(&base)))
    }

    fn atom(&mut self) -> Result<Value> {
        match self.bump() {
            (Tok::Int(n), _) => Ok(Value::constant(SymCoeff::rational(BigRational::from_integer(n)))),
            (Tok::T, _) => Ok(Value::t()),
            (Tok::Pi, pos) => {
                self.expect(Tok::LParen, "'(' after pi")?;
                let (i, ipos) = self.uint("a uniformizer index")?;
                let i: u32 = i.try_into().map_err(|_| ipos.error("uniformizer index too large"))?;
                self.expect(Tok::RParen, "')'")?;
                self.pi_uses.push((i, pos));
                Ok(Value::constant(SymCoeff::pi(i)))
            }
            (Tok::LParen, _) => {
                let v = self.sum_value()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            (Tok::End, pos) => Err(pos.error("unexpected end of input")),
            (_, pos) => Err(pos.error("expected a number, pi(i), T or '('")),
        }
    }
}

/// A parsed expression before validation against a context.
#[derive(Clone, Debug)]
pub struct Parsed {
    terms: BTreeMap<usize, SymCoeff>,
    /// Start of the first top-level term contributing to each degree.
    origins: BTreeMap<usize, Pos>,
    pi_uses: Vec<(u32, Pos)>,
    start: Pos,
}

impl Parsed {
    pub fn degree(&self) -> usize {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn constant(&self) -> Option<&SymCoeff> {
        self.terms.get(&0)
    }

    fn origin(&self, i: usize) -> Pos {
        self.origins.get(&i).copied().unwrap_or(self.start)
    }

    /// Checks the declared bound and the uniformizer range `pi(i)`, `i <= d`.
    pub fn into_poly(self, degree_bound: usize, d: u32) -> Result<SymPoly> {
        if let Some(&(i, pos)) = self.pi_uses.iter().find(|(i, _)| *i > d) {
            return Err(pos.error(format!("pi({i}) is undefined: indices go up to {d}")));
        }
        if self.constant().is_some() {
            return Err(self.origin(0).error("constant term present"));
        }
        let deg = self.degree();
        if deg > degree_bound {
            return Err(self
                .origin(deg)
                .error(format!("degree {deg} exceeds the bound {degree_bound}")));
        }
        SymPoly::from_terms(self.terms, degree_bound)
    }

    /// The expression as a series with a constant term (for `ê`).
    pub fn into_series(self) -> (Option<SymCoeff>, SymPoly) {
        let mut terms = self.terms;
        let c = terms.remove(&0);
        let deg = terms.keys().next_back().copied().unwrap_or(1);
        (
            c,
            SymPoly::from_terms(terms, deg.max(1)).expect("constant removed"),
        )
    }

    pub fn start(&self) -> Pos {
        self.start
    }
}

/// Parses one expression; `line` is used in error positions.
pub fn parse_expr(text: &str, line: usize) -> Result<Parsed> {
    let toks = lex(text, line)?;
    let start = toks[0].1;
    let mut parser = Parser {
        toks,
        at: 0,
        pi_uses: Vec::new(),
    };
    let top = parser.sum()?;
    if *parser.peek() != Tok::End {
        return Err(parser.pos().error("unexpected trailing input"));
    }
    let mut origins = BTreeMap::new();
    let mut value = Value::default();
    for (t, pos) in &top {
        for &i in t.0.keys() {
            origins.entry(i).or_insert(*pos);
        }
        value = value.add(t);
    }
    let terms = value.0.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    Ok(Parsed {
        terms,
        origins,
        pi_uses: parser.pi_uses,
        start,
    })
}

/// Parses and validates against `(degree_bound, d)`.
pub fn parse_poly(text: &str, degree_bound: usize, d: u32) -> Result<SymPoly> {
    parse_expr(text, 1)?.into_poly(degree_bound, d)
}

/// Rational constant, or an error at `pos`.
pub(crate) fn rational_constant(c: Option<&SymCoeff>, pos: Pos) -> Result<BigRational> {
    match c {
        None => Ok(BigRational::zero()),
        Some(c) => c
            .as_rational()
            .ok_or_else(|| pos.error("expected a rational constant")),
    }
}
