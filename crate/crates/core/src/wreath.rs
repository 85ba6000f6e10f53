//! The group G(l,1,n) of monomial matrices with l-th roots of unity as
//! entries, and its group algebra over [`CycScalar`].
//!
//! An element is stored as `diag(zeta^tors) * P(perm)` where `P(perm)` sends
//! the basis vector `e_i` to `e_{perm(i)}`. Products are matrix products, so
//! `perm_{ab} = perm_a . perm_b` and `tors_{ab}[j] = tors_a[j] + tors_b[perm_a^{-1}(j)]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{p_coeffs, CycElem, CycScalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElem {
    /// 0-based one-line notation: `perm[i]` is the image of `i`.
    perm: Vec<u8>,
    /// Exponents of zeta on the diagonal, reduced to `[0, ell)`.
    tors: Vec<u8>,
    ell: u32,
}

impl GroupElem {
    pub fn identity(n: usize, ell: u32) -> Self {
        GroupElem {
            perm: (0..n as u8).collect(),
            tors: vec![0; n],
            ell,
        }
    }

    /// From 1-based one-line notation and torsion exponents.
    pub fn from_parts(perm: &[usize], tors: &[i64], ell: u32) -> Result<Self> {
        let n = perm.len();
        if tors.len() != n {
            return Err(Error::Mismatch(format!(
                "permutation of length {n} with {} torsion entries",
                tors.len()
            )));
        }
        if ell == 0 {
            return Err(Error::Invalid("ell must be positive".into()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p == 0 || p > n || seen[p - 1] {
                return Err(Error::Invalid(format!("{perm:?} is not a permutation")));
            }
            seen[p - 1] = true;
        }
        Ok(GroupElem {
            perm: perm.iter().map(|&p| (p - 1) as u8).collect(),
            tors: tors.iter().map(|&t| t.rem_euclid(ell as i64) as u8).collect(),
            ell,
        })
    }

    fn check_index(i: usize, n: usize) -> Result<()> {
        if i == 0 || i > n {
            Err(Error::IndexOutOfRange(format!("index {i} not in 1..={n}")))
        } else {
            Ok(())
        }
    }

    /// `t_i^e`, the diagonal matrix with `zeta^e` in position `i` (1-based).
    pub fn t_pow(i: usize, e: i64, n: usize, ell: u32) -> Result<Self> {
        Self::check_index(i, n)?;
        let mut g = Self::identity(n, ell);
        g.tors[i - 1] = e.rem_euclid(ell as i64) as u8;
        Ok(g)
    }

    pub fn t(i: usize, n: usize, ell: u32) -> Result<Self> {
        Self::t_pow(i, 1, n, ell)
    }

    /// The transposition `(i j)`, 1-based.
    pub fn transposition(i: usize, j: usize, n: usize, ell: u32) -> Result<Self> {
        Self::cycle(&[i, j], n, ell)
    }

    /// The cycle `(a_1, ..., a_m)` mapping `a_1 -> a_2 -> ... -> a_m -> a_1`.
    pub fn cycle(points: &[usize], n: usize, ell: u32) -> Result<Self> {
        let mut g = Self::identity(n, ell);
        for &p in points {
            Self::check_index(p, n)?;
        }
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(Error::Invalid(format!("repeated point in cycle {points:?}")));
        }
        for w in 0..points.len() {
            let from = points[w] - 1;
            let to = points[(w + 1) % points.len()] - 1;
            g.perm[from] = to as u8;
        }
        Ok(g)
    }

    /// `chi_i = (i, i-1, ..., 1)`.
    pub fn chi(i: usize, n: usize, ell: u32) -> Result<Self> {
        Self::check_index(i, n)?;
        let pts: Vec<usize> = (1..=i).rev().collect();
        Self::cycle(&pts, n, ell)
    }

    /// `upsilon_i = (i, i+1, ..., n)`.
    pub fn upsilon(i: usize, n: usize, ell: u32) -> Result<Self> {
        Self::check_index(i, n)?;
        let pts: Vec<usize> = (i..=n).collect();
        Self::cycle(&pts, n, ell)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn is_identity(&self) -> bool {
        self.tors.iter().all(|&t| t == 0) && self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    /// Image of the 0-based index `i` under the permutation part.
    pub fn perm_image(&self, i: usize) -> usize {
        self.perm[i] as usize
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.perm.iter().map(|&p| p as usize + 1).collect()
    }

    pub fn tors(&self) -> &[u8] {
        &self.tors
    }

    pub fn is_diagonal(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p as usize == i)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() || self.ell != other.ell {
            return Err(Error::Mismatch(format!(
                "G({},1,{}) and G({},1,{})",
                self.ell,
                self.n(),
                other.ell,
                other.n()
            )));
        }
        Ok(self.compose(other))
    }

    fn compose(&self, other: &Self) -> Self {
        let n = self.n();
        let mut inv_a = vec![0usize; n];
        for (i, &p) in self.perm.iter().enumerate() {
            inv_a[p as usize] = i;
        }
        let ell = self.ell;
        let perm = other.perm.iter().map(|&p| self.perm[p as usize]).collect();
        let tors = (0..n)
            .map(|j| ((self.tors[j] as u32 + other.tors[inv_a[j]] as u32) % ell) as u8)
            .collect();
        GroupElem { perm, tors, ell }
    }

    pub fn inv(&self) -> Self {
        let n = self.n();
        let mut perm = vec![0u8; n];
        for (i, &p) in self.perm.iter().enumerate() {
            perm[p as usize] = i as u8;
        }
        let ell = self.ell;
        let tors = (0..n)
            .map(|j| ((ell - self.tors[self.perm[j] as usize] as u32) % ell) as u8)
            .collect();
        GroupElem { perm, tors, ell }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.n(), self.ell);
        for _ in 0..e {
            acc = acc.compose(self);
        }
        acc
    }

    /// Conjugation action on the x-variables: `g x_i g^{-1} = zeta^e x_j`,
    /// returned as `(j, e)` with 0-based indices. The x-variables carry the
    /// dual of the matrix representation, so `t_i x_i t_i^{-1} = zeta^{-1} x_i`.
    pub fn act_x(&self, i: usize) -> (usize, i64) {
        let j = self.perm[i] as usize;
        (j, -(self.tors[j] as i64))
    }

    /// Conjugation action on the y-variables: `g y_i g^{-1} = zeta^e y_j`.
    pub fn act_y(&self, i: usize) -> (usize, i64) {
        let j = self.perm[i] as usize;
        (j, self.tors[j] as i64)
    }

    /// Decomposition `g = t_1^{a_1} ... t_n^{a_n} s_{j_1} ... s_{j_m}` into
    /// torsion exponents and adjacent transpositions `s_j = (j, j+1)` (1-based j).
    pub fn factorize(&self) -> (Vec<u8>, Vec<usize>) {
        // Bubble-sort the one-line notation: w = s_{j_1} ... s_{j_m}.
        let mut p: Vec<u8> = self.perm.clone();
        let mut word_rev = Vec::new();
        let n = p.len();
        loop {
            let mut swapped = false;
            for j in 0..n.saturating_sub(1) {
                if p[j] > p[j + 1] {
                    p.swap(j, j + 1);
                    word_rev.push(j + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        // perm . s_{j_1} . ... . s_{j_m} = id (right multiplication swaps
        // positions), hence perm = s_{j_m} ... s_{j_1}.
        word_rev.reverse();
        (self.tors.clone(), word_rev)
    }

    /// Every element of G(l,1,n), in no particular order.
    pub fn enumerate(n: usize, ell: u32) -> Vec<Self> {
        let mut perms: Vec<Vec<u8>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for p in &perms {
                for v in 0..n as u8 {
                    if !p.contains(&v) {
                        let mut q = p.clone();
                        q.push(v);
                        next.push(q);
                    }
                }
            }
            perms = next;
        }
        let total = (ell as usize).pow(n as u32);
        let mut out = Vec::with_capacity(perms.len() * total);
        for p in &perms {
            for code in 0..total {
                let mut c = code;
                let tors = (0..n)
                    .map(|_| {
                        let d = (c % ell as usize) as u8;
                        c /= ell as usize;
                        d
                    })
                    .collect();
                out.push(GroupElem {
                    perm: p.clone(),
                    tors,
                    ell,
                });
            }
        }
        out
    }
}

impl Mul<&GroupElem> for &GroupElem {
    type Output = GroupElem;
    /// Panics on mismatched groups; see [`GroupElem::try_mul`].
    fn mul(self, rhs: &GroupElem) -> GroupElem {
        self.try_mul(rhs).expect("group elements of different groups")
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
        let t: Vec<String> = self.tors.iter().map(|v| v.to_string()).collect();
        write!(f, "perm=[{}]t=[{}]", p.join(","), t.join(","))
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl GroupElem {
    /// Parses `perm=[2,3,1] t=[1,0,2]` (whitespace optional).
    pub fn parse(s: &str, ell: u32) -> Result<Self> {
        let err = |m: &str| Error::Parse {
            pos: 0,
            msg: format!("{m} in group element {s:?}"),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact.strip_prefix("perm=[").ok_or_else(|| err("expected perm=["))?;
        let (perm_s, rest) = rest.split_once(']').ok_or_else(|| err("unclosed ["))?;
        let rest = rest.strip_prefix("t=[").ok_or_else(|| err("expected t=["))?;
        let tors_s = rest.strip_suffix(']').ok_or_else(|| err("unclosed ["))?;
        let list = |x: &str| -> Result<Vec<i64>> {
            if x.is_empty() {
                return Ok(Vec::new());
            }
            x.split(',')
                .map(|v| v.parse::<i64>().map_err(|_| err("bad integer")))
                .collect()
        };
        let perm: Vec<usize> = list(perm_s)?
            .into_iter()
            .map(|v| usize::try_from(v).map_err(|_| err("negative entry")))
            .collect::<Result<_>>()?;
        GroupElem::from_parts(&perm, &list(tors_s)?, ell)
    }
}

/// Finitely supported `CycScalar` combination of group elements.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GroupAlgRepr", from = "GroupAlgRepr")]
pub struct GroupAlgElem {
    n: usize,
    ell: u32,
    terms: BTreeMap<GroupElem, CycScalar>,
}

#[derive(Serialize, Deserialize)]
struct GroupAlgRepr {
    n: usize,
    ell: u32,
    terms: Vec<(GroupElem, CycScalar)>,
}

impl From<GroupAlgElem> for GroupAlgRepr {
    fn from(a: GroupAlgElem) -> Self {
        GroupAlgRepr {
            n: a.n,
            ell: a.ell,
            terms: a.terms.into_iter().collect(),
        }
    }
}

impl From<GroupAlgRepr> for GroupAlgElem {
    fn from(r: GroupAlgRepr) -> Self {
        let mut out = GroupAlgElem::zero(r.n, r.ell);
        for (g, c) in &r.terms {
            out.add_term(g, c);
        }
        out
    }
}

impl GroupAlgElem {
    pub fn zero(n: usize, ell: u32) -> Self {
        GroupAlgElem {
            n,
            ell,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, ell: u32) -> Self {
        Self::from_group(GroupElem::identity(n, ell))
    }

    pub fn from_group(g: GroupElem) -> Self {
        Self::term(g, CycScalar::one())
    }

    pub fn scalar(c: CycScalar, n: usize, ell: u32) -> Self {
        Self::term_in(GroupElem::identity(n, ell), c, n, ell)
    }

    pub fn term(g: GroupElem, c: CycScalar) -> Self {
        let (n, ell) = (g.n(), g.ell());
        Self::term_in(g, c, n, ell)
    }

    fn term_in(g: GroupElem, c: CycScalar, n: usize, ell: u32) -> Self {
        let mut out = Self::zero(n, ell);
        out.add_term(&g, &c);
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

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElem, &CycScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &GroupElem) -> CycScalar {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: &GroupElem, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(g) {
            Some(v) => {
                v.add_assign_ref(c);
                if v.is_zero() {
                    self.terms.remove(g);
                }
            }
            None => {
                self.terms.insert(g.clone(), c.clone());
            }
        }
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut out = Self::zero(self.n, self.ell);
        for (g, v) in &self.terms {
            out.add_term(g, &(v * c));
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.ell != other.ell {
            return Err(Error::Mismatch("group algebra elements of different groups".into()));
        }
        let mut out = Self::zero(self.n, self.ell);
        for (g, a) in &self.terms {
            for (h, b) in &other.terms {
                out.add_term(&g.compose(h), &(a * b));
            }
        }
        Ok(out)
    }
}

impl Add<&GroupAlgElem> for &GroupAlgElem {
    type Output = GroupAlgElem;
    fn add(self, rhs: &GroupAlgElem) -> GroupAlgElem {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g, c);
        }
        out
    }
}

impl Sub<&GroupAlgElem> for &GroupAlgElem {
    type Output = GroupAlgElem;
    fn sub(self, rhs: &GroupAlgElem) -> GroupAlgElem {
        self + &(-rhs)
    }
}

impl Neg for &GroupAlgElem {
    type Output = GroupAlgElem;
    fn neg(self) -> GroupAlgElem {
        GroupAlgElem {
            n: self.n,
            ell: self.ell,
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c)).collect(),
        }
    }
}

impl Mul<&GroupAlgElem> for &GroupAlgElem {
    type Output = GroupAlgElem;
    fn mul(self, rhs: &GroupAlgElem) -> GroupAlgElem {
        self.try_mul(rhs).expect("group algebra elements of different groups")
    }
}

impl fmt::Display for GroupAlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupAlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for GroupElem {
    type Err = Error;
    /// Parses with `ell` inferred as one more than the largest torsion entry;
    /// prefer [`GroupElem::parse`] when the group is known.
    fn from_str(s: &str) -> Result<Self> {
        let g = GroupElem::parse(s, u8::MAX as u32)?;
        let ell = g.tors.iter().map(|&t| t as u32 + 1).max().unwrap_or(1);
        Ok(GroupElem { ell, ..g })
    }
}

/// `sum_{p=0}^{l-1} c_p t_i^p t_j^{-p} (i j)` with `c_p = 1` (unweighted) or
/// `c_p = zeta^p` (weighted). Indices are 1-based.
pub fn refl_sum(i: usize, j: usize, weighted: bool, n: usize, ell: u32) -> Result<GroupAlgElem> {
    if i == j {
        return Err(Error::Invalid(format!("reflection sum needs i != j, got {i} = {j}")));
    }
    let s = GroupElem::transposition(i, j, n, ell)?;
    let mut out = GroupAlgElem::zero(n, ell);
    for p in 0..ell as i64 {
        let d = GroupElem::t_pow(i, p, n, ell)?.compose(&GroupElem::t_pow(j, -p, n, ell)?);
        let c = if weighted {
            CycScalar::zeta_pow(ell, p)
        } else {
            CycScalar::one()
        };
        out.add_term(&d.compose(&s), &c);
    }
    Ok(out)
}

/// `p(zeta^twist t_i) = sum_s c_s zeta^{twist*s} t_i^s`.
pub fn p_of_t(i: usize, twist: i64, n: usize, ell: u32) -> Result<GroupAlgElem> {
    let mut out = GroupAlgElem::zero(n, ell);
    GroupElem::check_index(i, n)?;
    for (idx, c) in p_coeffs(ell).iter().enumerate() {
        let s = idx as i64 + 1;
        let g = GroupElem::t_pow(i, s, n, ell)?;
        out.add_term(&g, &c.scale(&CycElem::zeta_pow(ell, twist * s)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize, n: usize, ell: u32) -> GroupElem {
        GroupElem::t(i, n, ell).unwrap()
    }

    fn s(i: usize, j: usize, n: usize, ell: u32) -> GroupElem {
        GroupElem::transposition(i, j, n, ell).unwrap()
    }

    #[test]
    fn torsion_squares_to_identity() {
        let t1 = t(1, 2, 2);
        assert!((&t1 * &t1).is_identity());
    }

    #[test]
    fn transposition_conjugates_torsion() {
        let s12 = s(1, 2, 2, 3);
        assert_eq!(&(&s12 * &t(1, 2, 3)) * &s12, t(2, 2, 3));
    }

    #[test]
    fn cycles() {
        assert!(GroupElem::chi(1, 3, 1).unwrap().is_identity());
        let u1 = GroupElem::upsilon(1, 3, 1).unwrap();
        assert_eq!(u1.one_line(), vec![2, 3, 1]);
        let chi3 = GroupElem::chi(3, 3, 1).unwrap();
        assert_eq!(chi3, u1.inv());
        assert_eq!(chi3.one_line(), vec![3, 1, 2]);
        assert!((&chi3 * &chi3.inv()).is_identity());
    }

    #[test]
    fn chi_moves_under_adjacent_conjugation() {
        let n = 4;
        for i in 1..n {
            let lhs = &s(i, i + 1, n, 1) * &GroupElem::chi(i, n, 1).unwrap();
            assert_eq!(lhs, GroupElem::chi(i + 1, n, 1).unwrap());
        }
    }

    #[test]
    fn mismatched_groups_error() {
        let a = t(1, 2, 2);
        let b = t(1, 3, 2);
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_mul(&t(1, 2, 3)).is_err());
    }

    #[test]
    fn index_errors() {
        assert!(GroupElem::chi(0, 3, 1).is_err());
        assert!(GroupElem::upsilon(4, 3, 1).is_err());
        assert!(refl_sum(2, 2, false, 3, 2).is_err());
    }

    #[test]
    fn group_order_by_enumeration() {
        for (n, ell) in [(1, 1), (2, 2), (3, 2), (3, 3), (4, 2), (2, 5)] {
            let all = GroupElem::enumerate(n, ell);
            let fact: usize = (1..=n).product();
            assert_eq!(all.len(), (ell as usize).pow(n as u32) * fact);
            let set: std::collections::BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            // closure under multiplication
            let g = &all[all.len() / 2];
            for h in &all {
                assert!(set.contains(&(g * h)));
            }
        }
    }

    #[test]
    fn coxeter_relations() {
        let (n, ell) = (4, 3);
        for i in 1..n {
            let si = s(i, i + 1, n, ell);
            assert!((&si * &si).is_identity());
            if i + 1 < n {
                let sj = s(i + 1, i + 2, n, ell);
                assert_eq!(&(&si * &sj) * &si, &(&sj * &si) * &sj);
            }
            for j in i + 2..n {
                let sj = s(j, j + 1, n, ell);
                assert_eq!(&si * &sj, &sj * &si);
            }
        }
        for i in 1..=n {
            assert!(t(i, n, ell).pow(ell).is_identity());
        }
    }

    #[test]
    fn factorization_reconstructs() {
        for g in GroupElem::enumerate(3, 2) {
            let (tors, word) = g.factorize();
            let mut acc = GroupElem::identity(3, 2);
            for (i, &a) in tors.iter().enumerate() {
                acc = &acc * &GroupElem::t_pow(i + 1, a as i64, 3, 2).unwrap();
            }
            for j in word {
                acc = &acc * &s(j, j + 1, 3, 2);
            }
            assert_eq!(acc, g);
        }
    }

    #[test]
    fn refl_sums() {
        let one = refl_sum(1, 2, false, 2, 1).unwrap();
        assert_eq!(one, GroupAlgElem::from_group(s(1, 2, 2, 1)));

        let t1t2s = &(&t(1, 2, 2) * &t(2, 2, 2)) * &s(1, 2, 2, 2);
        let s12 = s(1, 2, 2, 2);
        let unweighted = refl_sum(1, 2, false, 2, 2).unwrap();
        let mut expect = GroupAlgElem::from_group(s12.clone());
        expect.add_term(&t1t2s, &CycScalar::one());
        assert_eq!(unweighted, expect);

        let weighted = refl_sum(1, 2, true, 2, 2).unwrap();
        let mut expect = GroupAlgElem::from_group(s12);
        expect.add_term(&t1t2s, &CycScalar::from_int(-1));
        assert_eq!(weighted, expect);
    }

    #[test]
    fn p_of_t_examples() {
        assert!(p_of_t(1, 0, 1, 1).unwrap().is_zero());
        let d = &CycScalar::h(0, 2) - &CycScalar::h(1, 2);
        assert_eq!(
            p_of_t(1, 0, 2, 2).unwrap(),
            GroupAlgElem::term(t(1, 2, 2), d.clone())
        );
        assert_eq!(p_of_t(2, 1, 2, 2).unwrap(), GroupAlgElem::term(t(2, 2, 2), -d));
    }

    #[test]
    fn text_form_round_trip() {
        let g = GroupElem::from_parts(&[2, 3, 1], &[1, 0, 2], 3).unwrap();
        assert_eq!(g.to_string(), "perm=[2,3,1]t=[1,0,2]");
        assert_eq!(GroupElem::parse("perm=[2,3,1] t=[1,0,2]", 3).unwrap(), g);
    }
}
