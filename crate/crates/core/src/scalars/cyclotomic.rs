//! Exact arithmetic in the cyclotomic field Q(zeta_l), stored in the power
//! basis modulo the l-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::rat::Rat;
use crate::error::{Error, Result};

/// Integer coefficients of the cyclotomic polynomial `Phi_l`, lowest degree first.
pub fn cyclotomic_poly(ell: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    assert!(ell >= 1, "cyclotomic index must be positive");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&ell) {
        return p.clone();
    }
    // z^l - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; ell as usize + 1];
    num[0] = -1;
    num[ell as usize] = 1;
    for d in 1..ell {
        if ell.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            num = int_exact_div(&num, &div);
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(ell, p.clone());
    p
}

/// Euler's totient, i.e. the degree of `Phi_l`.
pub fn totient(ell: u32) -> usize {
    cyclotomic_poly(ell).len() - 1
}

fn int_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0i64; rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// An element of Q(zeta_l).
///
/// Rational elements are always stored with `ell == 1` so that equality is
/// value equality across fields; mixing two different non-trivial fields is a
/// programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "RawCycElem")]
pub struct CycElem {
    ell: u32,
    coeffs: Vec<Rat>,
}

#[derive(Deserialize)]
struct RawCycElem {
    ell: u32,
    coeffs: Vec<Rat>,
}

impl From<RawCycElem> for CycElem {
    fn from(r: RawCycElem) -> Self {
        CycElem::canonical(r.ell.max(1), r.coeffs)
    }
}

fn trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn reduce_mod(mut v: Vec<Rat>, phi: &[i64]) -> Vec<Rat> {
    let d = phi.len() - 1;
    trim(&mut v);
    while v.len() > d {
        let top = v.len() - 1;
        let c = v[top].clone();
        for (j, &pc) in phi.iter().enumerate() {
            if pc != 0 {
                let idx = top - d + j;
                v[idx] = &v[idx] - &(&c * &Rat::from_int(pc));
            }
        }
        trim(&mut v);
    }
    v
}

impl CycElem {
    fn canonical(ell: u32, coeffs: Vec<Rat>) -> Self {
        let phi = cyclotomic_poly(ell);
        let coeffs = reduce_mod(coeffs, &phi);
        if coeffs.len() <= 1 {
            CycElem { ell: 1, coeffs }
        } else {
            CycElem { ell, coeffs }
        }
    }

    pub fn zero() -> Self {
        CycElem {
            ell: 1,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_int(n))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::canonical(1, vec![r])
    }

    /// Build from power-basis coefficients `c_0 + c_1 z + ...`, reduced mod `Phi_l`.
    pub fn from_coeffs(ell: u32, coeffs: Vec<Rat>) -> Self {
        Self::canonical(ell, coeffs)
    }

    /// The primitive root `zeta = exp(2 pi i / l)`.
    pub fn zeta(ell: u32) -> Self {
        Self::zeta_pow(ell, 1)
    }

    /// `zeta^e` for any integer `e`.
    pub fn zeta_pow(ell: u32, e: i64) -> Self {
        let e = e.rem_euclid(ell as i64) as usize;
        let mut c = vec![Rat::zero(); e + 1];
        c[e] = Rat::one();
        Self::canonical(ell, c)
    }

    /// The field index; 1 for rational elements.
    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn common_ell(&self, other: &Self) -> u32 {
        match (self.ell, other.ell) {
            (1, b) => b,
            (a, 1) => a,
            (a, b) if a == b => a,
            (a, b) => panic!("mixing elements of Q(zeta_{a}) and Q(zeta_{b})"),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycElem {
            ell: self.ell,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[z].
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rat() {
            return Ok(Self::from_rat(r.inv()?));
        }
        let phi: Vec<Rat> = cyclotomic_poly(self.ell)
            .iter()
            .map(|&c| Rat::from_int(c))
            .collect();
        // Invariant: s_i * a == r_i (mod phi).
        let (mut r0, mut r1) = (phi, self.coeffs.clone());
        let (mut s0, mut s1) = (Vec::<Rat>::new(), vec![Rat::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Phi_l is irreducible.
        let c = r1[0].inv()?;
        Ok(Self::canonical(
            self.ell,
            s1.into_iter().map(|x| x * &c).collect(),
        ))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// True if printing needs no parentheses when used as a factor.
    pub fn is_atomic(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() <= 1
    }

    /// True if the leading printed sign is a minus.
    pub fn is_negative_leading(&self) -> bool {
        self.is_atomic() && self.coeffs.iter().any(|c| c.is_negative())
    }
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += &(x * y);
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rat> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].inv().expect("nonzero leading coefficient");
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut q = vec![Rat::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = &rem[rem.len() - 1] * &lead;
        for (j, bc) in b.iter().enumerate() {
            rem[shift + j] = &rem[shift + j] - &(&c * bc);
        }
        q[shift] = c;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut q);
    (q, rem)
}

impl Add<&CycElem> for &CycElem {
    type Output = CycElem;
    fn add(self, rhs: &CycElem) -> CycElem {
        let ell = self.common_ell(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut c: Vec<Rat> = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Rat::zero(),
            })
            .collect();
        trim(&mut c);
        if c.len() <= 1 {
            CycElem { ell: 1, coeffs: c }
        } else {
            CycElem { ell, coeffs: c }
        }
    }
}

impl Sub<&CycElem> for &CycElem {
    type Output = CycElem;
    fn sub(self, rhs: &CycElem) -> CycElem {
        self + &(-rhs)
    }
}

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        CycElem {
            ell: self.ell,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        -&self
    }
}

impl Mul<&CycElem> for &CycElem {
    type Output = CycElem;
    fn mul(self, rhs: &CycElem) -> CycElem {
        if self.is_zero() || rhs.is_zero() {
            return CycElem::zero();
        }
        if let Some(r) = self.as_rat() {
            return rhs.scale(&r);
        }
        if let Some(r) = rhs.as_rat() {
            return self.scale(&r);
        }
        let ell = self.common_ell(rhs);
        CycElem::canonical(ell, poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

macro_rules! cyc_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycElem> for CycElem {
            type Output = CycElem;
            fn $m(self, rhs: CycElem) -> CycElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycElem> for CycElem {
            type Output = CycElem;
            fn $m(self, rhs: &CycElem) -> CycElem {
                (&self).$m(rhs)
            }
        }
    };
}

cyc_owned!(Add, add);
cyc_owned!(Sub, sub);
cyc_owned!(Mul, mul);

impl fmt::Display for CycElem {
    /// Power basis in `zeta`, e.g. `1+2*zeta-zeta^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "zeta")?;
                    } else {
                        write!(f, "zeta^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if self.ell > 1 {
            write!(f, " [Q(zeta_{})]", self.ell)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(ell: u32) -> CycElem {
        CycElem::zeta(ell)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(totient(5), 4);
    }

    #[test]
    fn zeta_squared_for_ell_two() {
        assert_eq!(&z(2) * &z(2), CycElem::one());
        assert_eq!(z(2), CycElem::from_int(-1));
    }

    #[test]
    fn ell_four_product() {
        let one = CycElem::one();
        let a = &one + &z(4);
        let b = &one - &z(4);
        assert_eq!(&a * &b, CycElem::from_int(2));
    }

    #[test]
    fn ell_three_inverse() {
        let inv = z(3).inv().unwrap();
        assert_eq!(inv, CycElem::zeta_pow(3, 2));
        let expected = &CycElem::from_int(-1) - &z(3);
        assert_eq!(inv, expected);
        assert_eq!(inv.to_string(), "-1-zeta");
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(CycElem::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn phi_vanishes_at_zeta() {
        for ell in 1..=8 {
            let mut acc = CycElem::zero();
            for (i, &c) in cyclotomic_poly(ell).iter().enumerate() {
                acc = &acc + &CycElem::zeta_pow(ell, i as i64).scale(&Rat::from_int(c));
            }
            assert!(acc.is_zero(), "Phi_{ell}(zeta) != 0");
        }
    }

    #[test]
    fn zeta_has_order_ell() {
        for ell in 1..=8u32 {
            assert!(z(ell).pow(ell).is_one());
            for e in 1..ell {
                assert!(!z(ell).pow(e).is_one());
            }
        }
    }
}
