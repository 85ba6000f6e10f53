//! The rational Cherednik algebra H of G(l,1,n) in its PBW basis.
//!
//! Every element is a combination of monomials `x^a * g * y^b`. Products are
//! straightened by moving y's to the right past x's with the commutator
//! table and moving group elements through by conjugation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{specialize, CycScalar, ParamAssignment};
use crate::wreath::{refl_sum, GroupAlgElem, GroupElem};

/// A normal-form monomial `x^x * g * y^y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PbwMonomial {
    x: Vec<u16>,
    g: GroupElem,
    y: Vec<u16>,
}

impl PbwMonomial {
    pub fn new(x: Vec<u16>, g: GroupElem, y: Vec<u16>) -> Result<Self> {
        if x.len() != g.n() || y.len() != g.n() {
            return Err(Error::Mismatch(format!(
                "exponent vectors of length {} and {} for n = {}",
                x.len(),
                y.len(),
                g.n()
            )));
        }
        Ok(PbwMonomial { x, g, y })
    }

    pub fn identity(n: usize, ell: u32) -> Self {
        PbwMonomial {
            x: vec![0; n],
            g: GroupElem::identity(n, ell),
            y: vec![0; n],
        }
    }

    pub fn xexp(&self) -> &[u16] {
        &self.x
    }

    pub fn group(&self) -> &GroupElem {
        &self.g
    }

    pub fn yexp(&self) -> &[u16] {
        &self.y
    }

    pub fn degree(&self) -> u32 {
        self.x.iter().chain(&self.y).map(|&e| e as u32).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.degree() == 0 && self.g.is_identity()
    }
}

/// Printing order: x-exponents descending, then the group element by
/// one-line permutation and torsion, then y-exponents descending.
impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .x
            .cmp(&self.x)
            .then_with(|| self.g.cmp(&other.g))
            .then_with(|| other.y.cmp(&self.y))
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_powers(parts: &mut Vec<String>, name: &str, e: &[u16]) {
    for (i, &p) in e.iter().enumerate() {
        match p {
            0 => {}
            1 => parts.push(format!("{name}{}", i + 1)),
            _ => parts.push(format!("{name}{}^{p}", i + 1)),
        }
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        write_powers(&mut parts, "x", &self.x);
        if !self.g.is_identity() {
            parts.push(self.g.to_string());
        }
        write_powers(&mut parts, "y", &self.y);
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of H: a finite combination of PBW monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct HElem {
    n: usize,
    ell: u32,
    terms: BTreeMap<PbwMonomial, CycScalar>,
}

impl HElem {
    pub fn zero(n: usize, ell: u32) -> Self {
        HElem {
            n,
            ell,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, ell: u32) -> Self {
        Self::scalar(CycScalar::one(), n, ell)
    }

    pub fn scalar(c: CycScalar, n: usize, ell: u32) -> Self {
        let mut out = Self::zero(n, ell);
        out.add_term(&PbwMonomial::identity(n, ell), &c);
        out
    }

    pub fn monomial(m: PbwMonomial, c: CycScalar) -> Self {
        let mut out = Self::zero(m.g.n(), m.g.ell());
        out.add_term(&m, &c);
        out
    }

    fn unit_vec(i: usize, n: usize) -> Result<Vec<u16>> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange(format!("index {i} not in 1..={n}")));
        }
        let mut e = vec![0; n];
        e[i - 1] = 1;
        Ok(e)
    }

    /// The generator `x_i` (1-based).
    pub fn x(i: usize, n: usize, ell: u32) -> Result<Self> {
        let m = PbwMonomial {
            x: Self::unit_vec(i, n)?,
            g: GroupElem::identity(n, ell),
            y: vec![0; n],
        };
        Ok(Self::monomial(m, CycScalar::one()))
    }

    /// The generator `y_i` (1-based).
    pub fn y(i: usize, n: usize, ell: u32) -> Result<Self> {
        let m = PbwMonomial {
            x: vec![0; n],
            g: GroupElem::identity(n, ell),
            y: Self::unit_vec(i, n)?,
        };
        Ok(Self::monomial(m, CycScalar::one()))
    }

    pub fn group(g: GroupElem) -> Self {
        let n = g.n();
        Self::monomial(
            PbwMonomial {
                x: vec![0; n],
                g,
                y: vec![0; n],
            },
            CycScalar::one(),
        )
    }

    pub fn from_group_alg(a: &GroupAlgElem) -> Self {
        let (n, ell) = (a.n(), a.ell());
        let mut out = Self::zero(n, ell);
        for (g, c) in a.terms() {
            out.add_term(
                &PbwMonomial {
                    x: vec![0; n],
                    g: g.clone(),
                    y: vec![0; n],
                },
                c,
            );
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &CycScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> CycScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: &PbwMonomial, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(v) => {
                v.add_assign_ref(c);
                if v.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    fn add_scaled(&mut self, other: &HElem, c: &CycScalar) {
        for (m, v) in &other.terms {
            self.add_term(m, &(v * c));
        }
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        out.add_scaled(self, c);
        out
    }

    /// Largest total x,y-degree among the terms, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(PbwMonomial::degree).max()
    }

    /// The terms of total x,y-degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        HElem {
            n: self.n,
            ell: self.ell,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient-wise specialization of the formal parameters.
    pub fn specialize(&self, a: &ParamAssignment) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for (m, c) in &self.terms {
            out.add_term(m, &specialize(c, a));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term<'a> {
            x: &'a [u16],
            perm: Vec<usize>,
            tors: &'a [u8],
            y: &'a [u16],
            coeff: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(m, c)| Term {
                x: &m.x,
                perm: m.g.one_line(),
                tors: m.g.tors(),
                y: &m.y,
                coeff: c.to_string(),
            })
            .collect();
        serde_json::json!({ "n": self.n, "ell": self.ell, "terms": terms })
    }

    fn check_same(&self, other: &HElem) -> Result<()> {
        if self.n != other.n || self.ell != other.ell {
            Err(Error::Mismatch(format!(
                "elements of H for (n, ell) = ({}, {}) and ({}, {})",
                self.n, self.ell, other.n, other.ell
            )))
        } else {
            Ok(())
        }
    }
}

impl Add<&HElem> for &HElem {
    type Output = HElem;
    fn add(self, rhs: &HElem) -> HElem {
        let mut out = self.clone();
        out.add_scaled(rhs, &CycScalar::one());
        out
    }
}

impl Sub<&HElem> for &HElem {
    type Output = HElem;
    fn sub(self, rhs: &HElem) -> HElem {
        let mut out = self.clone();
        out.add_scaled(rhs, &CycScalar::from_int(-1));
        out
    }
}

impl Neg for &HElem {
    type Output = HElem;
    fn neg(self) -> HElem {
        self.scale(&CycScalar::from_int(-1))
    }
}

impl fmt::Display for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_leading();
            let mag = if neg { -c } else { c.clone() };
            match (i == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            let coeff = if mag.is_atomic() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            if m.is_identity() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{coeff}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The degree-zero commutators `[x_i, y_j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorTable {
    n: usize,
    ell: u32,
    entries: Vec<GroupAlgElem>,
}

impl CommutatorTable {
    /// `[x_i,y_i] = hbar - k sum_{j != i} sum_p t_i^p t_j^{-p}(ij)
    ///            + sum_s sum_r zeta^{-rs}(h_r - h_{r-1}) t_i^s`
    /// and `[x_i,y_j] = k sum_p zeta^p t_i^p t_j^{-p}(ij)` for `i != j`.
    pub fn build(n: usize, ell: u32) -> Result<Self> {
        if n == 0 || ell == 0 {
            return Err(Error::Invalid("need n >= 1 and ell >= 1".into()));
        }
        let k = CycScalar::k();
        let mut entries = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let e = if i == j {
                    let mut e = GroupAlgElem::scalar(CycScalar::hbar(), n, ell);
                    for other in (1..=n).filter(|&o| o != i) {
                        e = &e - &refl_sum(i, other, false, n, ell)?.scale(&k);
                    }
                    for s in 1..ell as i64 {
                        let mut c = CycScalar::zero();
                        for r in 0..ell as i64 {
                            let dh = &CycScalar::h(r, ell) - &CycScalar::h(r - 1, ell);
                            c.add_assign_ref(&(&dh * &CycScalar::zeta_pow(ell, -r * s)));
                        }
                        e.add_term(&GroupElem::t_pow(i, s, n, ell)?, &c);
                    }
                    e
                } else {
                    refl_sum(i, j, true, n, ell)?.scale(&k)
                };
                entries.push(e);
            }
        }
        Ok(CommutatorTable { n, ell, entries })
    }

    /// `[x_i, y_j]`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &GroupAlgElem {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }
}

type Cache<K> = Mutex<HashMap<K, Arc<HElem>>>;

/// Multiplication context for H with a fixed `(n, ell)`.
///
/// Straightening results for `y_j x^a` and `y^b x^a` are memoised, so one
/// algebra should be reused across many products. It is `Sync` and may be
/// shared between threads.
pub struct CherednikAlgebra {
    n: usize,
    ell: u32,
    table: CommutatorTable,
    zeta: Vec<CycScalar>,
    yx_cache: Cache<(usize, Vec<u16>)>,
    yxx_cache: Cache<(Vec<u16>, Vec<u16>)>,
}

impl CherednikAlgebra {
    pub fn new(n: usize, ell: u32) -> Result<Self> {
        let table = CommutatorTable::build(n, ell)?;
        Ok(CherednikAlgebra {
            n,
            ell,
            table,
            zeta: (0..ell as i64).map(|e| CycScalar::zeta_pow(ell, e)).collect(),
            yx_cache: Mutex::new(HashMap::new()),
            yxx_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn table(&self) -> &CommutatorTable {
        &self.table
    }

    pub fn x(&self, i: usize) -> Result<HElem> {
        HElem::x(i, self.n, self.ell)
    }

    pub fn y(&self, i: usize) -> Result<HElem> {
        HElem::y(i, self.n, self.ell)
    }

    pub fn group(&self, g: &GroupElem) -> Result<HElem> {
        if g.n() != self.n || g.ell() != self.ell {
            return Err(Error::Mismatch(format!("group element {g} for (n, ell) = ({}, {})", self.n, self.ell)));
        }
        Ok(HElem::group(g.clone()))
    }

    pub fn scalar(&self, c: CycScalar) -> HElem {
        HElem::scalar(c, self.n, self.ell)
    }

    pub fn one(&self) -> HElem {
        HElem::one(self.n, self.ell)
    }

    fn zeta(&self, e: i64) -> &CycScalar {
        &self.zeta[e.rem_euclid(self.ell as i64) as usize]
    }

    fn check(&self, a: &HElem) -> Result<()> {
        a.check_same(&HElem::zero(self.n, self.ell))
    }

    /// `g x^a g^{-1} = zeta^e x^{a'}`.
    fn conj_x(g: &GroupElem, a: &[u16]) -> (i64, Vec<u16>) {
        let mut out = vec![0; a.len()];
        let mut e = 0i64;
        for (i, &p) in a.iter().enumerate() {
            if p > 0 {
                let (j, z) = g.act_x(i);
                out[j] += p;
                e += z * p as i64;
            }
        }
        (e, out)
    }

    /// `g y^b g^{-1} = zeta^e y^{b'}`.
    fn conj_y(g: &GroupElem, b: &[u16]) -> (i64, Vec<u16>) {
        let mut out = vec![0; b.len()];
        let mut e = 0i64;
        for (i, &p) in b.iter().enumerate() {
            if p > 0 {
                let (j, z) = g.act_y(i);
                out[j] += p;
                e += z * p as i64;
            }
        }
        (e, out)
    }

    fn left_mul_x(&self, a: &[u16], h: &HElem) -> HElem {
        let mut out = HElem::zero(self.n, self.ell);
        for (m, c) in &h.terms {
            let mut m2 = m.clone();
            for (e, &p) in m2.x.iter_mut().zip(a) {
                *e += p;
            }
            out.terms.insert(m2, c.clone());
        }
        out
    }

    fn left_mul_g(&self, g: &GroupElem, h: &HElem) -> HElem {
        if g.is_identity() {
            return h.clone();
        }
        let mut out = HElem::zero(self.n, self.ell);
        for (m, c) in &h.terms {
            let (e, x) = Self::conj_x(g, &m.x);
            let m2 = PbwMonomial {
                x,
                g: g * &m.g,
                y: m.y.clone(),
            };
            out.add_term(&m2, &(c * self.zeta(e)));
        }
        out
    }

    /// `h * (g y^d)` for an element `h` in normal form.
    fn right_mul_gy(&self, h: &HElem, g: &GroupElem, d: &[u16]) -> HElem {
        let gi = g.inv();
        let mut out = HElem::zero(self.n, self.ell);
        for (m, c) in &h.terms {
            let (e, mut y) = Self::conj_y(&gi, &m.y);
            for (a, &b) in y.iter_mut().zip(d) {
                *a += b;
            }
            let m2 = PbwMonomial {
                x: m.x.clone(),
                g: &m.g * g,
                y,
            };
            out.add_term(&m2, &(c * self.zeta(e)));
        }
        out
    }

    /// Group-algebra element times `x^a`, in normal form.
    fn ga_times_x(&self, a: &GroupAlgElem, xs: &[u16]) -> HElem {
        let mut out = HElem::zero(self.n, self.ell);
        for (g, c) in a.terms() {
            let (e, x) = Self::conj_x(g, xs);
            let m = PbwMonomial {
                x,
                g: g.clone(),
                y: vec![0; self.n],
            };
            out.add_term(&m, &(c * self.zeta(e)));
        }
        out
    }

    /// Normal form of `y_j x^a` (0-based `j`).
    fn yx(&self, j: usize, a: &[u16]) -> Arc<HElem> {
        let key = (j, a.to_vec());
        if let Some(v) = self.yx_cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let result = match a.iter().position(|&p| p > 0) {
            None => {
                let mut y = vec![0; self.n];
                y[j] = 1;
                HElem::monomial(
                    PbwMonomial {
                        x: vec![0; self.n],
                        g: GroupElem::identity(self.n, self.ell),
                        y,
                    },
                    CycScalar::one(),
                )
            }
            Some(i) => {
                // y_j x_i x^r = x_i (y_j x^r) - [x_i, y_j] x^r
                let mut rest = a.to_vec();
                rest[i] -= 1;
                let mut xi = vec![0; self.n];
                xi[i] = 1;
                let inner = self.yx(j, &rest);
                let lhs = self.left_mul_x(&xi, &inner);
                let corr = self.ga_times_x(self.table.get(i + 1, j + 1), &rest);
                &lhs - &corr
            }
        };
        let result = Arc::new(result);
        self.yx_cache.lock().unwrap().insert(key, result.clone());
        result
    }

    /// `y_j * h` for `h` in normal form.
    fn left_mul_y(&self, j: usize, h: &HElem) -> HElem {
        let mut out = HElem::zero(self.n, self.ell);
        for (m, c) in &h.terms {
            let yx = self.yx(j, &m.x);
            out.add_scaled(&self.right_mul_gy(&yx, &m.g, &m.y), c);
        }
        out
    }

    /// Normal form of `y^b x^a`.
    fn yxx(&self, b: &[u16], a: &[u16]) -> Arc<HElem> {
        let key = (b.to_vec(), a.to_vec());
        if let Some(v) = self.yxx_cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let result = match b.iter().position(|&p| p > 0) {
            None => HElem::monomial(
                PbwMonomial {
                    x: a.to_vec(),
                    g: GroupElem::identity(self.n, self.ell),
                    y: vec![0; self.n],
                },
                CycScalar::one(),
            ),
            Some(j) => {
                let mut rest = b.to_vec();
                rest[j] -= 1;
                self.left_mul_y(j, &self.yxx(&rest, a))
            }
        };
        let result = Arc::new(result);
        self.yxx_cache.lock().unwrap().insert(key, result.clone());
        result
    }

    fn mul_monomials(&self, p: &PbwMonomial, q: &PbwMonomial) -> HElem {
        let mid = self.yxx(&p.y, &q.x);
        let right = self.right_mul_gy(&mid, &q.g, &q.y);
        let left = self.left_mul_g(&p.g, &right);
        self.left_mul_x(&p.x, &left)
    }

    pub fn mul(&self, a: &HElem, b: &HElem) -> Result<HElem> {
        self.check(a)?;
        self.check(b)?;
        let mut out = HElem::zero(self.n, self.ell);
        for (p, c) in &a.terms {
            for (q, d) in &b.terms {
                out.add_scaled(&self.mul_monomials(p, q), &(c * d));
            }
        }
        Ok(out)
    }

    /// `ab - ba`.
    pub fn commutator(&self, a: &HElem, b: &HElem) -> Result<HElem> {
        Ok(&self.mul(a, b)? - &self.mul(b, a)?)
    }

    pub fn pow(&self, a: &HElem, e: u32) -> Result<HElem> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Product of a sequence of factors, left to right.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a HElem>) -> Result<HElem> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }
}

#[derive(Serialize, Deserialize)]
struct HElemRepr {
    n: usize,
    ell: u32,
    terms: Vec<(Vec<u16>, GroupElem, Vec<u16>, CycScalar)>,
}

impl Serialize for HElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HElemRepr {
            n: self.n,
            ell: self.ell,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.x.clone(), m.g.clone(), m.y.clone(), c.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = HElemRepr::deserialize(d)?;
        let mut out = HElem::zero(r.n, r.ell);
        for (x, g, y, c) in r.terms {
            let m = PbwMonomial::new(x, g, y).map_err(serde::de::Error::custom)?;
            out.add_term(&m, &c);
        }
        Ok(out)
    }
}
