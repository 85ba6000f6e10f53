//! The polynomial representation on `K[U_1..U_n] (x) K[T_1..T_n]/(T_i^l - 1)`
//! by multiplication, divided differences and shift operators.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{AGen, AWord, Convention, RelationInstance};
use crate::scalars::{p_at_scalar, p_coeffs, s_value, specialize, CycScalar, ParamAssignment, Rat};
use crate::wreath::GroupElem;

type Key = (Vec<u16>, Vec<u8>);

/// A finite combination of monomials `U^a T^b` with `0 <= b_i < l`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyUT {
    n: usize,
    ell: u32,
    terms: BTreeMap<Key, CycScalar>,
}

impl PolyUT {
    pub fn zero(n: usize, ell: u32) -> Self {
        PolyUT {
            n,
            ell,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, ell: u32) -> Self {
        Self::constant(CycScalar::one(), n, ell)
    }

    pub fn constant(c: CycScalar, n: usize, ell: u32) -> Self {
        Self::monomial(vec![0; n], vec![0; n], c, ell)
    }

    /// `c U^u T^t`, with the T-exponents reduced mod `ell`.
    pub fn monomial(u: Vec<u16>, t: Vec<u8>, c: CycScalar, ell: u32) -> Self {
        let n = u.len();
        let mut out = Self::zero(n, ell);
        let t = t.iter().map(|&e| (e as u32 % ell) as u8).collect();
        out.add_term(&(u, t), &c);
        out
    }

    /// `U_i` for `1 <= i <= n`.
    pub fn u_var(i: usize, n: usize, ell: u32) -> Self {
        let mut u = vec![0; n];
        u[i - 1] = 1;
        Self::monomial(u, vec![0; n], CycScalar::one(), ell)
    }

    /// `T_i` for `1 <= i <= n`.
    pub fn t_var(i: usize, n: usize, ell: u32) -> Self {
        let mut t = vec![0; n];
        t[i - 1] = 1;
        Self::monomial(vec![0; n], t, CycScalar::one(), ell)
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

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &CycScalar)> {
        self.terms.iter()
    }

    /// Total U-degree, `None` for zero.
    pub fn u_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(u, _)| u.iter().map(|&e| e as u32).sum()).max()
    }

    pub fn add_term(&mut self, k: &Key, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(k) {
            Some(v) => {
                v.add_assign_ref(c);
                if v.is_zero() {
                    self.terms.remove(k);
                }
            }
            None => {
                self.terms.insert(k.clone(), c.clone());
            }
        }
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for (k, v) in &self.terms {
            out.add_term(k, &(v * c));
        }
        out
    }

    /// Coefficient-wise specialization of the formal parameters.
    pub fn specialize(&self, a: &ParamAssignment) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for (k, c) in &self.terms {
            out.add_term(k, &specialize(c, a));
        }
        out
    }

    /// Keeps only the terms with every T-exponent zero.
    pub fn symmetrize_t(&self) -> Self {
        PolyUT {
            n: self.n,
            ell: self.ell,
            terms: self
                .terms
                .iter()
                .filter(|((_, t), _)| t.iter().all(|&e| e == 0))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Multiplication by the idempotent `l^{-n} prod_i (sum_j T_i^j)`.
    pub fn e_prime(&self) -> Self {
        let mut by_u: BTreeMap<Vec<u16>, CycScalar> = BTreeMap::new();
        for ((u, _), c) in &self.terms {
            by_u.entry(u.clone()).or_default().add_assign_ref(c);
        }
        let norm = CycScalar::from_rat(Rat::new(1, (self.ell as i64).pow(self.n as u32)));
        let mut out = Self::zero(self.n, self.ell);
        for t in all_torsion(self.n, self.ell) {
            for (u, c) in &by_u {
                out.add_term(&(u.clone(), t.clone()), &(c * &norm));
            }
        }
        out
    }

    /// The coefficient of `U^a T^b` collected as a polynomial in `U` with
    /// `T` set to 1; inverse of multiplying by `e'` on its image.
    pub fn at_t_one(&self) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for ((u, _), c) in &self.terms {
            out.add_term(&(u.clone(), vec![0; self.n]), c);
        }
        out
    }

    /// Applies a ring endomorphism given by the images of every `U_i` and
    /// the permutation-with-scaling images `T_i -> zeta^{e_i} T_{dest_i}`.
    fn substitute(&self, u_images: &[PolyUT], t_images: &[(usize, i64)]) -> Self {
        let mut powers: Vec<Vec<PolyUT>> = u_images.iter().map(|p| vec![PolyUT::one(self.n, self.ell), p.clone()]).collect();
        let mut out = Self::zero(self.n, self.ell);
        for ((u, t), c) in &self.terms {
            let mut tdest = vec![0u8; self.n];
            let mut z = 0i64;
            for (i, &e) in t.iter().enumerate() {
                let (d, s) = t_images[i];
                tdest[d] = ((tdest[d] as u32 + e as u32) % self.ell) as u8;
                z += s * e as i64;
            }
            let mut acc = PolyUT::monomial(vec![0; self.n], tdest, c * &CycScalar::zeta_pow(self.ell, z), self.ell);
            for (i, &e) in u.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &u_images[i];
                    powers[i].push(next);
                }
                acc = &acc * &powers[i][e as usize];
            }
            out = &out + &acc;
        }
        out
    }

    fn swap(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for ((u, t), c) in &self.terms {
            let (mut u, mut t) = (u.clone(), t.clone());
            u.swap(j - 1, j);
            t.swap(j - 1, j);
            out.add_term(&(u, t), c);
        }
        out
    }

    /// Multiplication by `l^{-1} sum_p T_j^p T_{j+1}^{-p}`, the idempotent
    /// cutting out the joint eigenspace where `T_j` and `T_{j+1}` agree.
    fn project_eigen(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        let norm = CycScalar::from_rat(Rat::new(1, self.ell as i64));
        for ((u, t), c) in &self.terms {
            for p in 0..self.ell {
                let mut t2 = t.clone();
                t2[j - 1] = ((t2[j - 1] as u32 + p) % self.ell) as u8;
                t2[j] = ((t2[j] as u32 + self.ell - p) % self.ell) as u8;
                out.add_term(&(u.clone(), t2), &(c * &norm));
            }
        }
        out
    }

    fn project_equal_exponents(&self, j: usize) -> Self {
        PolyUT {
            n: self.n,
            ell: self.ell,
            terms: self
                .terms
                .iter()
                .filter(|((_, t), _)| t[j - 1] == t[j])
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Exact quotient by `U_{j+1} - U_j`.
    fn divide_by_difference(&self, j: usize) -> Result<Self> {
        let (a, b) = (j, j - 1);
        let mut rem = self.clone();
        let mut quo = Self::zero(self.n, self.ell);
        // Long division in U_{j+1}: peel the highest power until none is left.
        while let Some(((u, t), c)) = rem
            .terms
            .iter()
            .filter(|((u, _), _)| u[a] > 0)
            .max_by_key(|((u, _), _)| u[a])
            .map(|(k, c)| (k.clone(), c.clone()))
        {
            let mut q = u.clone();
            q[a] -= 1;
            quo.add_term(&(q.clone(), t.clone()), &c);
            rem.add_term(&(u, t.clone()), &-&c);
            let mut shifted = q;
            shifted[b] += 1;
            rem.add_term(&(shifted, t), &c);
        }
        if rem.is_zero() {
            Ok(quo)
        } else {
            Err(Error::InexactDivision(format!("remainder {rem} after dividing by U{} - U{}", j + 1, j)))
        }
    }
}

fn all_torsion(n: usize, ell: u32) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..ell as u8).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

impl Add<&PolyUT> for &PolyUT {
    type Output = PolyUT;
    fn add(self, rhs: &PolyUT) -> PolyUT {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }
}

impl Sub<&PolyUT> for &PolyUT {
    type Output = PolyUT;
    fn sub(self, rhs: &PolyUT) -> PolyUT {
        self + &(-rhs)
    }
}

impl Neg for &PolyUT {
    type Output = PolyUT;
    fn neg(self) -> PolyUT {
        self.scale(&CycScalar::from_int(-1))
    }
}

impl Mul<&PolyUT> for &PolyUT {
    type Output = PolyUT;
    // Exponents add, and T-exponents wrap modulo l.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &PolyUT) -> PolyUT {
        let mut out = PolyUT::zero(self.n, self.ell);
        for ((u1, t1), c1) in &self.terms {
            for ((u2, t2), c2) in &rhs.terms {
                let u = u1.iter().zip(u2).map(|(a, b)| a + b).collect();
                let t = t1
                    .iter()
                    .zip(t2)
                    .map(|(a, b)| ((*a as u32 + *b as u32) % self.ell) as u8)
                    .collect();
                out.add_term(&(u, t), &(c1 * c2));
            }
        }
        out
    }
}

fn write_vars(parts: &mut Vec<String>, name: &str, e: &[impl Copy + Into<u32>]) {
    for (i, &p) in e.iter().enumerate() {
        match p.into() {
            0 => {}
            1 => parts.push(format!("{name}{}", i + 1)),
            p => parts.push(format!("{name}{}^{p}", i + 1)),
        }
    }
}

impl fmt::Display for PolyUT {
    /// Terms by descending U-exponents, then descending T-exponents.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((u, t), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative_leading();
            let mag = if neg { -c } else { c.clone() };
            match (i == 0, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            write_vars(&mut parts, "U", u);
            write_vars(&mut parts, "T", t);
            let coeff = if mag.is_atomic() { mag.to_string() } else { format!("({mag})") };
            if parts.is_empty() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "{coeff}*{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyUT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    n: usize,
    ell: u32,
    terms: Vec<(Vec<u16>, Vec<u8>, CycScalar)>,
}

impl Serialize for PolyUT {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr {
            n: self.n,
            ell: self.ell,
            terms: self.terms.iter().map(|((u, t), c)| (u.clone(), t.clone(), c.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyUT {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        let mut out = PolyUT::zero(r.n, r.ell);
        for (u, t, c) in r.terms {
            if u.len() != r.n || t.len() != r.n {
                return Err(serde::de::Error::custom("exponent vector of wrong length"));
            }
            let t = t.iter().map(|&e| (e as u32 % r.ell.max(1)) as u8).collect();
            out.add_term(&(u, t), &c);
        }
        Ok(out)
    }
}

/// How the projection in the divided-difference operator treats torsion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Projection {
    /// Multiplication by the idempotent onto `T_j = T_{j+1}`.
    #[default]
    Eigenspace,
    /// Keep the T-monomials whose `j` and `j+1` exponents agree.
    Monomial,
}

/// Every `U^a T^b` with `|a| <= max_u_degree` and `0 <= b_i < ell`.
pub fn basis_monomials(n: usize, ell: u32, max_u_degree: u16) -> Vec<PolyUT> {
    let mut us: Vec<Vec<u16>> = vec![vec![]];
    for _ in 0..n {
        us = us
            .into_iter()
            .flat_map(|a| {
                let used: u16 = a.iter().sum();
                (0..=max_u_degree - used).map(move |e| {
                    let mut b = a.clone();
                    b.push(e);
                    b
                })
            })
            .collect();
    }
    let mut ts: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..n {
        ts = ts
            .into_iter()
            .flat_map(|a| {
                (0..ell as u8).map(move |e| {
                    let mut b = a.clone();
                    b.push(e);
                    b
                })
            })
            .collect();
    }
    let mut out = Vec::with_capacity(us.len() * ts.len());
    for u in &us {
        for t in &ts {
            out.push(PolyUT::monomial(u.clone(), t.clone(), CycScalar::one(), ell));
        }
    }
    out
}

/// The action of A on `PolyUT` for a fixed `(n, ell)`.
pub struct PolyRep {
    n: usize,
    ell: u32,
    conv: Convention,
    projection: Projection,
}

impl PolyRep {
    pub fn new(n: usize, ell: u32) -> Result<Self> {
        Self::with_convention(n, ell, Convention::default())
    }

    pub fn with_convention(n: usize, ell: u32, conv: Convention) -> Result<Self> {
        if n == 0 || ell == 0 {
            return Err(Error::Invalid("need n >= 1 and ell >= 1".into()));
        }
        Ok(PolyRep {
            n,
            ell,
            conv,
            projection: Projection::default(),
        })
    }

    pub fn with_projection(mut self, projection: Projection) -> Self {
        self.projection = projection;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// `lhs . f - rhs . f` for a relation instance.
    pub fn relation_residual(&self, r: &RelationInstance, f: &PolyUT) -> Result<PolyUT> {
        Ok(&self.act_word(&r.lhs, f)? - &self.act_word(&r.rhs, f)?)
    }

    fn check(&self, f: &PolyUT) -> Result<()> {
        if f.n != self.n || f.ell != self.ell {
            Err(Error::Mismatch(format!(
                "polynomial for (n, ell) = ({}, {}) acted on by ({}, {})",
                f.n, f.ell, self.n, self.ell
            )))
        } else {
            Ok(())
        }
    }

    fn reduce_index(&self, i: i64) -> (usize, i64) {
        let n = self.n as i64;
        let q = (i - 1).div_euclid(n);
        ((i - q * n) as usize, q)
    }

    /// `U_i` for any integer `i`, via `U_i = U_{i-n} + s hbar`.
    pub fn u_ext(&self, i: i64) -> PolyUT {
        let (i0, q) = self.reduce_index(i);
        let shift = CycScalar::hbar().scale_rat(&Rat::from_int(q * self.conv.shift as i64));
        &PolyUT::u_var(i0, self.n, self.ell) + &PolyUT::constant(shift, self.n, self.ell)
    }

    /// `T_i = zeta^q T_{i0}` as `(i0 - 1, q)`.
    fn t_ext(&self, i: i64) -> (usize, i64) {
        let (i0, q) = self.reduce_index(i);
        (i0 - 1, q)
    }

    /// `U_1 + p(T_1)`.
    pub fn sigma_unit(&self) -> PolyUT {
        let mut out = PolyUT::u_var(1, self.n, self.ell);
        for (idx, c) in p_coeffs(self.ell).into_iter().enumerate() {
            let mut t = vec![0; self.n];
            t[0] = (idx + 1) as u8;
            out.add_term(&(vec![0; self.n], t), &c);
        }
        out
    }

    fn act_transposition(&self, j: usize, f: &PolyUT) -> Result<PolyUT> {
        if j == 0 || j >= self.n {
            return Err(Error::IndexOutOfRange(format!("transposition s{j} needs 1 <= j < {}", self.n)));
        }
        let fs = f.swap(j);
        let diff = match self.projection {
            Projection::Eigenspace => (&fs - f).project_eigen(j),
            Projection::Monomial => (&fs - f).project_equal_exponents(j),
        };
        let q = diff.divide_by_difference(j)?;
        let kl = CycScalar::k().scale_rat(&Rat::from_int(self.ell as i64));
        Ok(&fs - &q.scale(&kl))
    }

    fn act_sigma(&self, f: &PolyUT) -> PolyUT {
        let us: Vec<PolyUT> = (1..=self.n as i64).map(|i| self.u_ext(i + 1)).collect();
        let ts: Vec<(usize, i64)> = (1..=self.n as i64).map(|i| self.t_ext(i + 1)).collect();
        &self.sigma_unit() * &f.substitute(&us, &ts)
    }

    fn act_tau(&self, f: &PolyUT) -> PolyUT {
        let us: Vec<PolyUT> = (1..=self.n as i64).map(|i| self.u_ext(i - 1)).collect();
        let ts: Vec<(usize, i64)> = (1..=self.n as i64).map(|i| self.t_ext(i - 1)).collect();
        f.substitute(&us, &ts)
    }

    fn act_t(&self, i: i64, e: i64, f: &PolyUT) -> PolyUT {
        let (i0, q) = self.t_ext(i);
        let mut t = vec![0u8; self.n];
        t[i0] = (e.rem_euclid(self.ell as i64)) as u8;
        let m = PolyUT::monomial(vec![0; self.n], t, CycScalar::zeta_pow(self.ell, q * e), self.ell);
        &m * f
    }

    fn act_group(&self, g: &GroupElem, f: &PolyUT) -> Result<PolyUT> {
        if g.n() != self.n || g.ell() != self.ell {
            return Err(Error::Mismatch(format!("group element {g} on (n, ell) = ({}, {})", self.n, self.ell)));
        }
        let (tors, word) = g.factorize();
        let mut out = f.clone();
        for &j in word.iter().rev() {
            out = self.act_transposition(j, &out)?;
        }
        for (i, &a) in tors.iter().enumerate() {
            out = self.act_t(i as i64 + 1, a as i64, &out);
        }
        Ok(out)
    }

    pub fn act(&self, gen: &AGen, f: &PolyUT) -> Result<PolyUT> {
        self.check(f)?;
        match gen {
            AGen::Sigma => Ok(self.act_sigma(f)),
            AGen::Tau => Ok(self.act_tau(f)),
            AGen::U(i) => Ok(&self.u_ext(*i) * f),
            AGen::T(i) => Ok(self.act_t(*i, 1, f)),
            AGen::Transp(j) => self.act_transposition(*j, f),
            AGen::Group(g) => self.act_group(g, f),
            AGen::Scalar(c) => Ok(f.scale(c)),
        }
    }

    /// Left action of a word: the rightmost generator acts first.
    pub fn act_word(&self, w: &AWord, f: &PolyUT) -> Result<PolyUT> {
        self.check(f)?;
        let mut out = PolyUT::zero(self.n, self.ell);
        for (c, gens) in w.terms() {
            let mut v = f.clone();
            for g in gens.iter().rev() {
                v = self.act(g, &v)?;
            }
            out = &out + &v.scale(c);
        }
        Ok(out)
    }
}

/// Elementary symmetric functions `e_0, ..., e_m` of the given values.
pub fn elementary_symmetric(values: &[CycScalar]) -> Vec<CycScalar> {
    let mut e = vec![CycScalar::one()];
    for v in values {
        let mut next = e.clone();
        next.push(CycScalar::zero());
        for i in 1..next.len() {
            next[i] = &e.get(i).cloned().unwrap_or_default() + &(&e[i - 1] * v);
        }
        e = next;
    }
    e
}

/// The outcome of comparing the rank-one shift-element polynomials.
#[derive(Clone, Debug)]
pub struct Push1Report {
    pub ell: u32,
    /// `U^l + sum_i e_i(s_0, ..., s_{l-1}) U^{l-i}`.
    pub target: PolyUT,
    /// `prod_m (U - m hbar + p(zeta^{-m}))`, the product as written.
    pub product: PolyUT,
    /// The T-degree-zero part of `sigma^l . 1`.
    pub sigma_route: PolyUT,
    /// `e' sigma^l e' . 1` with `e'` stripped off, a polynomial in `U`.
    pub idempotent_route: PolyUT,
}

impl Push1Report {
    pub fn product_matches(&self) -> bool {
        self.product == self.target
    }

    pub fn sigma_route_matches(&self) -> bool {
        self.sigma_route == self.target
    }

    pub fn passed(&self) -> bool {
        self.product_matches() && self.sigma_route_matches()
    }
}

/// Rank-one comparison of the shift element on the unit with the
/// polynomial whose roots are `-s_m`.
pub fn push1_check(ell: u32) -> Result<Push1Report> {
    let rep = PolyRep::new(1, ell)?;
    let u = PolyUT::u_var(1, 1, ell);
    let c = |x: CycScalar| PolyUT::constant(x, 1, ell);

    let s: Vec<CycScalar> = (0..ell as i64).map(|m| s_value(ell, m)).collect();
    let e = elementary_symmetric(&s);
    let mut target = PolyUT::zero(1, ell);
    for (i, ei) in e.iter().enumerate() {
        let pow = (ell as usize - i) as u16;
        target = &target + &PolyUT::monomial(vec![pow], vec![0], ei.clone(), ell);
    }

    let mut product = PolyUT::one(1, ell);
    for m in 0..ell as i64 {
        let shift = &p_at_scalar(ell, -m) - &CycScalar::hbar().scale_rat(&Rat::from_int(m));
        product = &product * &(&u + &c(shift));
    }

    let sigma_l = AWord::sigma().pow(ell);
    let one = PolyUT::one(1, ell);
    let sigma_route = rep.act_word(&sigma_l, &one)?.symmetrize_t();
    let idempotent_route = rep.act_word(&sigma_l, &one.e_prime())?.e_prime().at_t_one();

    Ok(Push1Report {
        ell,
        target,
        product,
        sigma_route,
        idempotent_route,
    })
}

/// `prod_{m} (U + p(zeta^m) + m hbar)`, the value of `e' sigma^l e'` on the unit.
pub fn shift_element_on_unit(ell: u32) -> PolyUT {
    let u = PolyUT::u_var(1, 1, ell);
    let mut out = PolyUT::one(1, ell);
    for m in 0..ell as i64 {
        let shift = &p_at_scalar(ell, m) + &CycScalar::hbar().scale_rat(&Rat::from_int(m));
        out = &out * &(&u + &PolyUT::constant(shift, 1, ell));
    }
    out
}
