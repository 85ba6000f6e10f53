//! Expression parsing for words of A, polynomials in `U, T` and scalars.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | ident | ident '(' signed integer ')' | group | '(' expr ')'
//! group  := 'perm=[' ... ']' 't=[' ... ']'   (optionally wrapped in '[' ']')
//! ```
//!
//! Division is only allowed by a nonzero constant.

use crate::error::{Error, Result};
use crate::presentation::{x_word, y_word, AGen, AWord};
use crate::rep::PolyUT;
use crate::scalars::{CycElem, CycScalar, ParamAssignment, Rat, Var};
use crate::wreath::GroupElem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    /// An identifier such as `sigma`, `u3` or `u(-1)`.
    Ident {
        name: String,
        index: Option<i64>,
        pos: usize,
    },
    Group {
        text: String,
        pos: usize,
    },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Group(String),
    Sym(char),
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(chars[start..i].iter().collect()), start));
        } else if c.is_ascii_alphabetic() {
            let rest: String = chars[i..].iter().collect();
            if let Some(len) = group_literal_len(&rest, false) {
                out.push((Tok::Group(chars[i..i + len].iter().collect()), start));
                i += len;
                continue;
            }
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if c == '[' {
            let rest: String = chars[i..].iter().collect();
            let len = group_literal_len(&rest, true)
                .ok_or_else(|| syntax(start, "expected a group element [perm=[..]t=[..]]"))?;
            let inner: String = chars[i + 1..i + len - 1].iter().collect();
            out.push((Tok::Group(inner), start));
            i += len;
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), start));
            i += 1;
        } else {
            return Err(syntax(start, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Length in chars of a group literal at the start of `s`, if there is one.
fn group_literal_len(s: &str, bracketed: bool) -> Option<usize> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    let expect = |i: &mut usize, lit: &str| -> bool {
        let lit: Vec<char> = lit.chars().collect();
        if chars.len() >= *i + lit.len() && chars[*i..*i + lit.len()] == lit[..] {
            *i += lit.len();
            true
        } else {
            false
        }
    };
    let list = |i: &mut usize| -> bool {
        while *i < chars.len() && chars[*i] != ']' {
            if !(chars[*i].is_ascii_digit() || chars[*i] == ',' || chars[*i].is_whitespace()) {
                return false;
            }
            *i += 1;
        }
        if *i < chars.len() {
            *i += 1;
            true
        } else {
            false
        }
    };
    if bracketed {
        if !expect(&mut i, "[") {
            return None;
        }
        skip_ws(&mut i);
    }
    if !expect(&mut i, "perm=[") || !list(&mut i) {
        return None;
    }
    skip_ws(&mut i);
    if !expect(&mut i, "t=[") || !list(&mut i) {
        return None;
    }
    if bracketed {
        skip_ws(&mut i);
        if !expect(&mut i, "]") {
            return None;
        }
    }
    Some(i)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Sym('/')) {
                let at = self.here();
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), at);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.here();
            match self.toks.get(self.pos) {
                Some((Tok::Int(s), _)) => {
                    let e = s.parse::<u32>().map_err(|_| syntax(at, "exponent too large"))?;
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(syntax(at, "expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let at = self.here();
        match self.toks.get(self.pos) {
            Some((Tok::Int(s), _)) => {
                let v = s.parse::<i64>().map_err(|_| syntax(at, "index too large"))?;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(syntax(at, "expected an integer")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.here();
        let Some((tok, _)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Int(s) => Ok(Expr::Num(s.parse()?)),
            Tok::Group(text) => Ok(Expr::Group { text, pos: at }),
            Tok::Sym('(') => {
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(syntax(self.here(), "expected ')'"));
                }
                Ok(e)
            }
            Tok::Sym(c) => Err(syntax(at, format!("unexpected {c:?}"))),
            Tok::Ident(word) => {
                let split = word.find(|c: char| c.is_ascii_digit()).unwrap_or(word.len());
                let (name, digits) = word.split_at(split);
                let index = if !digits.is_empty() {
                    Some(digits.parse::<i64>().map_err(|_| syntax(at, "index too large"))?)
                } else if matches!(name, "u" | "t" | "U" | "T") && self.eat('(') {
                    let v = self.signed_int()?;
                    if !self.eat(')') {
                        return Err(syntax(self.here(), "expected ')'"));
                    }
                    Some(v)
                } else {
                    None
                };
                Ok(Expr::Ident {
                    name: name.to_string(),
                    index,
                    pos: at,
                })
            }
        }
    }
}

/// Parses source text into an expression tree.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.chars().count(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.here(), "unexpected trailing input"));
    }
    Ok(e)
}

/// What identifiers and group literals mean in a given target.
trait Target {
    type V: Clone;
    fn scalar(&self, c: CycScalar) -> Self::V;
    fn ident(&self, name: &str, index: Option<i64>, pos: usize) -> Result<Self::V>;
    fn group(&self, g: GroupElem) -> Result<Self::V>;
    fn ell(&self) -> u32;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn as_constant(&self, a: &Self::V) -> Option<CycElem>;
    fn scale(&self, a: &Self::V, c: &CycElem) -> Self::V;
}

fn scalar_ident(name: &str, index: Option<i64>, ell: u32) -> Option<CycScalar> {
    match (name, index) {
        ("hbar", None) => Some(CycScalar::hbar()),
        ("k", None) => Some(CycScalar::k()),
        ("zeta", None) => Some(CycScalar::zeta_pow(ell, 1)),
        ("h", Some(r)) => Some(CycScalar::h(r, ell)),
        _ => None,
    }
}

fn unknown(name: &str, index: Option<i64>, pos: usize) -> Error {
    let shown = match index {
        Some(i) => format!("{name}{i}"),
        None => name.to_string(),
    };
    syntax(pos, format!("unknown identifier {shown:?}"))
}

fn out_of_range(what: &str, i: i64, hi: usize, pos: usize) -> Error {
    Error::IndexOutOfRange(format!("{what}{i} at position {pos}: index must lie in 1..={hi}"))
}

fn lower<T: Target>(e: &Expr, t: &T) -> Result<T::V> {
    Ok(match e {
        Expr::Num(r) => t.scalar(CycScalar::from_rat(r.clone())),
        Expr::Ident { name, index, pos } => t.ident(name, *index, *pos)?,
        Expr::Group { text, pos } => {
            let g = GroupElem::parse(text, t.ell()).map_err(|err| match err {
                Error::Parse { msg, .. } => Error::Parse { pos: *pos, msg },
                other => other,
            })?;
            t.group(g)?
        }
        Expr::Add(a, b) => t.add(&lower(a, t)?, &lower(b, t)?),
        Expr::Sub(a, b) => t.add(&lower(a, t)?, &t.neg(&lower(b, t)?)),
        Expr::Neg(a) => t.neg(&lower(a, t)?),
        Expr::Mul(a, b) => t.mul(&lower(a, t)?, &lower(b, t)?),
        Expr::Div(a, b, pos) => {
            let d = lower(b, t)?;
            let c = t
                .as_constant(&d)
                .ok_or_else(|| syntax(*pos, "can only divide by a constant"))?;
            let inv = c.inv().map_err(|_| syntax(*pos, "division by zero"))?;
            t.scale(&lower(a, t)?, &inv)
        }
        Expr::Pow(a, k) => {
            let base = lower(a, t)?;
            let mut acc = t.scalar(CycScalar::one());
            for _ in 0..*k {
                acc = t.mul(&acc, &base);
            }
            acc
        }
    })
}

struct WordTarget {
    n: usize,
    ell: u32,
}

impl Target for WordTarget {
    type V = AWord;

    fn scalar(&self, c: CycScalar) -> AWord {
        AWord::scalar(c)
    }

    fn ident(&self, name: &str, index: Option<i64>, pos: usize) -> Result<AWord> {
        if let Some(c) = scalar_ident(name, index, self.ell) {
            return Ok(AWord::scalar(c));
        }
        let in_range = |i: i64| i >= 1 && i <= self.n as i64;
        match (name, index) {
            ("sigma", None) => Ok(AWord::sigma()),
            ("tau", None) => Ok(AWord::tau()),
            ("u", Some(i)) => Ok(AWord::u(i)),
            ("t", Some(i)) => Ok(AWord::t(i)),
            ("s", Some(j)) => {
                if j >= 1 && (j as usize) < self.n {
                    Ok(AWord::s(j as usize))
                } else {
                    Err(out_of_range("s", j, self.n.saturating_sub(1), pos))
                }
            }
            ("x", Some(i)) if in_range(i) => x_word(i as usize, self.n, self.ell),
            ("y", Some(i)) if in_range(i) => y_word(i as usize, self.n, self.ell),
            ("x" | "y", Some(i)) => Err(out_of_range(name, i, self.n, pos)),
            _ => Err(unknown(name, index, pos)),
        }
    }

    fn group(&self, g: GroupElem) -> Result<AWord> {
        if g.n() != self.n {
            return Err(Error::Mismatch(format!("group element {g} for n = {}", self.n)));
        }
        Ok(AWord::gen(AGen::Group(g)))
    }

    fn ell(&self) -> u32 {
        self.ell
    }

    fn add(&self, a: &AWord, b: &AWord) -> AWord {
        a + b
    }

    fn neg(&self, a: &AWord) -> AWord {
        -a
    }

    fn mul(&self, a: &AWord, b: &AWord) -> AWord {
        a * b
    }

    fn as_constant(&self, a: &AWord) -> Option<CycElem> {
        match a.normalized().terms() {
            [] => Some(CycElem::zero()),
            [(c, w)] if w.is_empty() => c.as_constant(),
            _ => None,
        }
    }

    fn scale(&self, a: &AWord, c: &CycElem) -> AWord {
        a.scale(&CycScalar::constant(c.clone()))
    }
}

struct PolyTarget {
    n: usize,
    ell: u32,
}

impl Target for PolyTarget {
    type V = PolyUT;

    fn scalar(&self, c: CycScalar) -> PolyUT {
        PolyUT::constant(c, self.n, self.ell)
    }

    fn ident(&self, name: &str, index: Option<i64>, pos: usize) -> Result<PolyUT> {
        if let Some(c) = scalar_ident(name, index, self.ell) {
            return Ok(self.scalar(c));
        }
        match (name, index) {
            ("U" | "T", Some(i)) if i < 1 || i > self.n as i64 => Err(out_of_range(name, i, self.n, pos)),
            ("U", Some(i)) => Ok(PolyUT::u_var(i as usize, self.n, self.ell)),
            ("T", Some(i)) => Ok(PolyUT::t_var(i as usize, self.n, self.ell)),
            _ => Err(unknown(name, index, pos)),
        }
    }

    fn group(&self, g: GroupElem) -> Result<PolyUT> {
        Err(syntax(0, format!("group element {g} is not a polynomial")))
    }

    fn ell(&self) -> u32 {
        self.ell
    }

    fn add(&self, a: &PolyUT, b: &PolyUT) -> PolyUT {
        a + b
    }

    fn neg(&self, a: &PolyUT) -> PolyUT {
        -a
    }

    fn mul(&self, a: &PolyUT, b: &PolyUT) -> PolyUT {
        a * b
    }

    fn as_constant(&self, a: &PolyUT) -> Option<CycElem> {
        if a.is_zero() {
            return Some(CycElem::zero());
        }
        let mut terms = a.terms();
        let ((u, t), c) = terms.next()?;
        if terms.next().is_some() || u.iter().any(|&e| e > 0) || t.iter().any(|&e| e > 0) {
            return None;
        }
        c.as_constant()
    }

    fn scale(&self, a: &PolyUT, c: &CycElem) -> PolyUT {
        a.scale(&CycScalar::constant(c.clone()))
    }
}

struct ScalarTarget {
    ell: u32,
}

impl Target for ScalarTarget {
    type V = CycScalar;

    fn scalar(&self, c: CycScalar) -> CycScalar {
        c
    }

    fn ident(&self, name: &str, index: Option<i64>, pos: usize) -> Result<CycScalar> {
        scalar_ident(name, index, self.ell).ok_or_else(|| unknown(name, index, pos))
    }

    fn group(&self, g: GroupElem) -> Result<CycScalar> {
        Err(syntax(0, format!("group element {g} is not a scalar")))
    }

    fn ell(&self) -> u32 {
        self.ell
    }

    fn add(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        a + b
    }

    fn neg(&self, a: &CycScalar) -> CycScalar {
        -a
    }

    fn mul(&self, a: &CycScalar, b: &CycScalar) -> CycScalar {
        a * b
    }

    fn as_constant(&self, a: &CycScalar) -> Option<CycElem> {
        a.as_constant()
    }

    fn scale(&self, a: &CycScalar, c: &CycElem) -> CycScalar {
        a.scale(c)
    }
}

/// Parses a word of A. `x<i>` and `y<i>` expand to their words in
/// `sigma, tau` and the group; the result has repeated words merged.
pub fn parse_aword(src: &str, n: usize, ell: u32) -> Result<AWord> {
    let e = parse_expr(src)?;
    Ok(lower(&e, &WordTarget { n, ell })?.normalized())
}

/// Parses an element of the polynomial representation in `U<i>`, `T<i>`.
pub fn parse_poly(src: &str, n: usize, ell: u32) -> Result<PolyUT> {
    lower(&parse_expr(src)?, &PolyTarget { n, ell })
}

/// Parses a polynomial in `hbar, k, h<r>` with cyclotomic coefficients.
pub fn parse_scalar(src: &str, ell: u32) -> Result<CycScalar> {
    lower(&parse_expr(src)?, &ScalarTarget { ell })
}

/// Parses `k=1/2,h0=zeta` into an assignment of constants to parameters.
pub fn parse_assignment(src: &str, ell: u32) -> Result<ParamAssignment> {
    let mut out = ParamAssignment::new();
    let mut offset = 0;
    for item in src.split(',') {
        let at = offset;
        offset += item.chars().count() + 1;
        if item.trim().is_empty() {
            continue;
        }
        let (lhs, rhs) = item
            .split_once('=')
            .ok_or_else(|| syntax(at, format!("expected name=value in {item:?}")))?;
        let var = match lhs.trim() {
            "hbar" => Var::Hbar,
            "k" => Var::K,
            other => match other.strip_prefix('h').map(str::parse::<i64>) {
                Some(Ok(r)) => Var::H(r.rem_euclid(ell as i64) as u32),
                _ => return Err(syntax(at, format!("unknown parameter {other:?}"))),
            },
        };
        let value = parse_scalar(rhs, ell)?
            .as_constant()
            .ok_or_else(|| syntax(at, format!("value for {} must be a constant", lhs.trim())))?;
        out.set(var, value);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Presentation;

    #[test]
    fn sigma_tau_word() {
        let w = parse_aword("sigma*tau", 2, 1).unwrap();
        assert_eq!(w, AWord::word(vec![AGen::Sigma, AGen::Tau]));
    }

    #[test]
    fn p_is_not_a_token() {
        match parse_aword("u1 + p", 2, 1) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        for (src, at) in [("sigma*", 6), ("(u1", 3), ("u1 ** u2", 4), ("u1 $ u2", 3), ("t1^x", 3)] {
            match parse_aword(src, 2, 1) {
                Err(Error::Parse { pos, .. }) => assert_eq!(pos, at, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
        assert!(matches!(parse_aword("x3", 2, 1), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(parse_aword("s2", 2, 1), Err(Error::IndexOutOfRange(_))));
    }

    #[test]
    fn precedence() {
        let e = parse_expr("1 + 2*3^2").unwrap();
        let lowered = lower(&e, &ScalarTarget { ell: 1 }).unwrap();
        assert_eq!(lowered, CycScalar::from_int(19));
        let e = parse_scalar("-2^2", 1).unwrap();
        assert_eq!(e, CycScalar::from_int(-4));
        assert_eq!(parse_scalar("6/4*k", 1).unwrap(), CycScalar::k().scale_rat(&Rat::new(3, 2)));
        assert!(parse_scalar("1/k", 1).is_err());
        assert!(parse_scalar("1/0", 1).is_err());
    }

    #[test]
    fn indices_in_parentheses() {
        let w = parse_aword("u(-1)*t(0)", 2, 3).unwrap();
        assert_eq!(w, AWord::word(vec![AGen::U(-1), AGen::T(0)]));
        assert_eq!(parse_aword(&w.to_string(), 2, 3).unwrap(), w);
    }

    #[test]
    fn commutator_word() {
        let p = Presentation::new(2, 1).unwrap();
        let w = parse_aword("x1*y1 - y1*x1", 2, 1).unwrap();
        let h = p.to_h(&w).unwrap();
        assert_eq!(h.to_string(), "hbar - k*perm=[2,1]t=[0,0]");
    }

    #[test]
    fn group_literals() {
        let w = parse_aword("[perm=[2,1] t=[1,0]]*sigma", 2, 2).unwrap();
        let g = GroupElem::from_parts(&[2, 1], &[1, 0], 2).unwrap();
        assert_eq!(w, &AWord::group(g) * &AWord::sigma());
        let bare = parse_aword("perm=[2,1]t=[1,0]*sigma", 2, 2).unwrap();
        assert_eq!(bare, w);
    }

    #[test]
    fn scalar_text_round_trips() {
        for src in ["(h0-h1)*zeta + 3/2*hbar^2", "-zeta^2 - 1", "k*h2 - 1/3"] {
            let c = parse_scalar(src, 3).unwrap();
            assert_eq!(parse_scalar(&c.to_string(), 3).unwrap(), c, "{src} printed as {c}");
        }
    }

    #[test]
    fn poly_text() {
        let f = parse_poly("3*U1^2*T2 + (h0-h1)*U2", 2, 2).unwrap();
        assert_eq!(f.to_string(), "3*U1^2*T2 + (h0-h1)*U2");
        assert_eq!(parse_poly(&f.to_string(), 2, 2).unwrap(), f);
        assert!(parse_poly("U3", 2, 2).is_err());
        assert!(parse_poly("sigma", 2, 2).is_err());
    }

    #[test]
    fn assignments() {
        let a = parse_assignment("k=1/2, h0=zeta+1", 3).unwrap();
        assert_eq!(a.get(Var::K), Some(&CycElem::from_rat(Rat::new(1, 2))));
        assert_eq!(a.get(Var::H(0)), Some(&(&CycElem::zeta(3) + &CycElem::one())));
        assert!(parse_assignment("k=hbar", 3).is_err());
        assert!(parse_assignment("q=1", 3).is_err());
    }
}
