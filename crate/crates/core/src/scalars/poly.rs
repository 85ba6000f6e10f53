//! Sparse polynomials in the formal parameters `hbar`, `k`, `h_0, ..., h_{l-1}`
//! with coefficients in a cyclotomic field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::cyclotomic::CycElem;
use super::rat::Rat;

/// A formal parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    Hbar,
    K,
    H(u32),
}

impl Var {
    pub(crate) fn slot(self) -> usize {
        match self {
            Var::Hbar => 0,
            Var::K => 1,
            Var::H(r) => 2 + r as usize,
        }
    }

    fn from_slot(i: usize) -> Self {
        match i {
            0 => Var::Hbar,
            1 => Var::K,
            r => Var::H((r - 2) as u32),
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::Hbar => "hbar".into(),
            Var::K => "k".into(),
            Var::H(r) => format!("h{r}"),
        }
    }
}

/// Exponent vector over the slots `(hbar, k, h_0, h_1, ...)`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamMonomial(Vec<u16>);

impl ParamMonomial {
    pub fn one() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        let mut e = vec![0; v.slot() + 1];
        e[v.slot()] = 1;
        ParamMonomial(e)
    }

    pub fn from_exponents(mut e: Vec<u16>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        ParamMonomial(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0.get(v.slot()).copied().unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (Var::from_slot(i), e))
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let e = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        ParamMonomial(e)
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", v.name())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A coefficient-ring element: a polynomial in the formal parameters over
/// Q(zeta_l). Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<(ParamMonomial, CycElem)>", from = "Vec<(ParamMonomial, CycElem)>")]
pub struct CycScalar {
    terms: BTreeMap<ParamMonomial, CycElem>,
}

impl CycScalar {
    pub fn zero() -> Self {
        CycScalar::default()
    }

    pub fn one() -> Self {
        Self::constant(CycElem::one())
    }

    pub fn constant(c: CycElem) -> Self {
        Self::term(ParamMonomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(CycElem::from_int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::constant(CycElem::from_rat(r))
    }

    pub fn var(v: Var) -> Self {
        Self::term(ParamMonomial::var(v), CycElem::one())
    }

    pub fn hbar() -> Self {
        Self::var(Var::Hbar)
    }

    pub fn k() -> Self {
        Self::var(Var::K)
    }

    /// `h_r` with the index taken modulo `ell`.
    pub fn h(r: i64, ell: u32) -> Self {
        Self::var(Var::H(r.rem_euclid(ell as i64) as u32))
    }

    pub fn zeta_pow(ell: u32, e: i64) -> Self {
        Self::constant(CycElem::zeta_pow(ell, e))
    }

    pub fn term(m: ParamMonomial, c: CycElem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        CycScalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ParamMonomial, &CycElem)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if this scalar contains no indeterminates.
    pub fn as_constant(&self) -> Option<CycElem> {
        match self.terms.len() {
            0 => Some(CycElem::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: &ParamMonomial, c: &CycElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &CycScalar) {
        for (m, c) in &other.terms {
            self.add_term(m, c);
        }
    }

    pub fn scale(&self, c: &CycElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        CycScalar {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&CycElem::from_rat(r.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Total degree in the parameters; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// True when printing as a factor needs no parentheses.
    pub fn is_atomic(&self) -> bool {
        match self.terms.len() {
            0 => true,
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                c.is_atomic() || !m.is_one()
            }
            _ => false,
        }
    }

    /// True if the canonical text starts with a minus sign.
    pub fn is_negative_leading(&self) -> bool {
        self.terms
            .iter()
            .next_back()
            .is_some_and(|(_, c)| c.is_negative_leading())
    }
}

impl Add<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m, &-c);
        }
        out
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl Mul<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        if self.is_zero() || rhs.is_zero() {
            return CycScalar::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut out = CycScalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(&ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

macro_rules! scalar_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                (&self).$m(rhs)
            }
        }
    };
}

scalar_owned!(Add, add);
scalar_owned!(Sub, sub);
scalar_owned!(Mul, mul);

impl From<CycScalar> for Vec<(ParamMonomial, CycElem)> {
    fn from(x: CycScalar) -> Self {
        x.terms.into_iter().collect()
    }
}

impl From<Vec<(ParamMonomial, CycElem)>> for CycScalar {
    fn from(v: Vec<(ParamMonomial, CycElem)>) -> Self {
        let mut out = CycScalar::zero();
        for (m, c) in &v {
            out.add_term(m, c);
        }
        out
    }
}

impl From<CycElem> for CycScalar {
    fn from(c: CycElem) -> Self {
        CycScalar::constant(c)
    }
}

impl From<Rat> for CycScalar {
    fn from(r: Rat) -> Self {
        CycScalar::from_rat(r)
    }
}

impl From<i64> for CycScalar {
    fn from(n: i64) -> Self {
        CycScalar::from_int(n)
    }
}

/// Writes `c * m`, pulling the sign of a negative atomic coefficient out front.
fn write_term(
    f: &mut fmt::Formatter<'_>,
    m: &ParamMonomial,
    c: &CycElem,
    leading: bool,
) -> fmt::Result {
    let neg = c.is_negative_leading();
    let mag = if neg { -c } else { c.clone() };
    if neg {
        write!(f, "-")?;
    } else if !leading {
        write!(f, "+")?;
    }
    if m.is_one() {
        return write!(f, "{mag}");
    }
    if !mag.is_one() {
        if mag.is_atomic() {
            write!(f, "{mag}*")?;
        } else {
            write!(f, "({mag})*")?;
        }
    }
    write!(f, "{m}")
}

impl fmt::Display for CycScalar {
    /// Terms in descending order of exponent vector over `(hbar, k, h0, h1, ...)`,
    /// so `h0` precedes `h1` and constants come last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            write_term(f, m, c, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
