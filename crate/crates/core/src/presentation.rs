//! The cylindrical presentation A: generators sigma, tau, u_i, t_i and the
//! transpositions, evaluated inside H through the isomorphism
//! `x_i -> chi_i sigma upsilon_i^{-1}`, `y_i -> upsilon_i tau chi_i^{-1}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pbw::{CherednikAlgebra, HElem};
use crate::scalars::{p_coeffs, CycElem, CycScalar, Rat};
use crate::wreath::{p_of_t, refl_sum, GroupAlgElem, GroupElem};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AGen {
    Sigma,
    Tau,
    /// `u_i` for any integer `i`, reduced into `1..=n` by the shift rule.
    U(i64),
    /// `t_i` for any integer `i`, with `t_i = zeta t_{i-n}`.
    T(i64),
    /// The transposition `(j, j+1)`.
    Transp(usize),
    Group(GroupElem),
    Scalar(CycScalar),
}

impl fmt::Display for AGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AGen::Sigma => write!(f, "sigma"),
            AGen::Tau => write!(f, "tau"),
            AGen::U(i) if *i >= 1 => write!(f, "u{i}"),
            AGen::U(i) => write!(f, "u({i})"),
            AGen::T(i) if *i >= 1 => write!(f, "t{i}"),
            AGen::T(i) => write!(f, "t({i})"),
            AGen::Transp(j) => write!(f, "s{j}"),
            AGen::Group(g) => write!(f, "[{g}]"),
            AGen::Scalar(c) if c.is_atomic() && !c.is_negative_leading() => write!(f, "{c}"),
            AGen::Scalar(c) => write!(f, "({c})"),
        }
    }
}

impl fmt::Debug for AGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A formal linear combination of words in the generators of A.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AWord {
    terms: Vec<(CycScalar, Vec<AGen>)>,
}

impl AWord {
    pub fn zero() -> Self {
        AWord::default()
    }

    pub fn one() -> Self {
        AWord {
            terms: vec![(CycScalar::one(), Vec::new())],
        }
    }

    pub fn gen(g: AGen) -> Self {
        AWord {
            terms: vec![(CycScalar::one(), vec![g])],
        }
    }

    pub fn word(gens: Vec<AGen>) -> Self {
        AWord {
            terms: vec![(CycScalar::one(), gens)],
        }
    }

    pub fn scalar(c: CycScalar) -> Self {
        AWord {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn sigma() -> Self {
        Self::gen(AGen::Sigma)
    }

    pub fn tau() -> Self {
        Self::gen(AGen::Tau)
    }

    pub fn u(i: i64) -> Self {
        Self::gen(AGen::U(i))
    }

    pub fn t(i: i64) -> Self {
        Self::gen(AGen::T(i))
    }

    pub fn s(j: usize) -> Self {
        Self::gen(AGen::Transp(j))
    }

    pub fn group(g: GroupElem) -> Self {
        Self::gen(AGen::Group(g))
    }

    pub fn terms(&self) -> &[(CycScalar, Vec<AGen>)] {
        &self.terms
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        AWord {
            terms: self.terms.iter().map(|(d, w)| (d * c, w.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Merges repeated words, keeping first occurrences in order, and drops
    /// zero coefficients.
    pub fn normalized(&self) -> Self {
        let mut terms: Vec<(CycScalar, Vec<AGen>)> = Vec::new();
        for (c, w) in &self.terms {
            match terms.iter_mut().find(|(_, v)| v == w) {
                Some((d, _)) => *d = &*d + c,
                None => terms.push((c.clone(), w.clone())),
            }
        }
        terms.retain(|(c, _)| !c.is_zero());
        AWord { terms }
    }

    /// Length of the longest word.
    pub fn max_len(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }

    /// `p(zeta^twist t_i)` as a word.
    pub fn p_of_t(i: i64, twist: i64, ell: u32) -> Self {
        let mut out = Self::zero();
        for (idx, c) in p_coeffs(ell).into_iter().enumerate() {
            let s = idx as i64 + 1;
            let w = Self::t(i).pow(s as u32);
            out = &out + &w.scale(&c.scale(&CycElem::zeta_pow(ell, twist * s)));
        }
        out
    }
}

impl Add<&AWord> for &AWord {
    type Output = AWord;
    fn add(self, rhs: &AWord) -> AWord {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        AWord { terms }
    }
}

impl Sub<&AWord> for &AWord {
    type Output = AWord;
    fn sub(self, rhs: &AWord) -> AWord {
        self + &(-rhs)
    }
}

impl Neg for &AWord {
    type Output = AWord;
    fn neg(self) -> AWord {
        self.scale(&CycScalar::from_int(-1))
    }
}

impl Mul<&AWord> for &AWord {
    type Output = AWord;
    fn mul(self, rhs: &AWord) -> AWord {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (c, v) in &self.terms {
            for (d, w) in &rhs.terms {
                let mut vw = v.clone();
                vw.extend(w.iter().cloned());
                terms.push((c * d, vw));
            }
        }
        AWord { terms }
    }
}

impl fmt::Display for AWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, w)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let body: Vec<String> = w.iter().map(|g| g.to_string()).collect();
            match (c.is_one(), body.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", body.join("*"))?,
                (false, true) => write!(f, "({c})")?,
                (false, false) => write!(f, "({c})*{}", body.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `chi_i sigma upsilon_i^{-1}`, the word for `x_i`.
pub fn x_word(i: usize, n: usize, ell: u32) -> Result<AWord> {
    Ok(&(&AWord::group(GroupElem::chi(i, n, ell)?) * &AWord::sigma())
        * &AWord::group(GroupElem::upsilon(i, n, ell)?.inv()))
}

/// `upsilon_i tau chi_i^{-1}`, the word for `y_i`.
pub fn y_word(i: usize, n: usize, ell: u32) -> Result<AWord> {
    Ok(&(&AWord::group(GroupElem::upsilon(i, n, ell)?) * &AWord::tau())
        * &AWord::group(GroupElem::chi(i, n, ell)?.inv()))
}

/// The two sign choices left open by the printed relations.
///
/// `tau_sigma_hbar` is the sign `e` in `tau sigma = u_n + e hbar + p(zeta^{-1} t_n)`,
/// and `shift` is the sign `s` in `u_i = u_{i-n} + s hbar`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Convention {
    pub tau_sigma_hbar: i8,
    pub shift: i8,
}

impl Convention {
    /// The combination under which the relations hold in H for ell <= 2.
    pub const CONSISTENT: Convention = Convention {
        tau_sigma_hbar: -1,
        shift: 1,
    };

    /// The opposite pair of signs.
    pub const AS_PRINTED: Convention = Convention {
        tau_sigma_hbar: 1,
        shift: -1,
    };

    pub fn all() -> [Convention; 4] {
        [
            Convention { tau_sigma_hbar: 1, shift: 1 },
            Convention { tau_sigma_hbar: 1, shift: -1 },
            Convention { tau_sigma_hbar: -1, shift: 1 },
            Convention { tau_sigma_hbar: -1, shift: -1 },
        ]
    }
}

impl Default for Convention {
    fn default() -> Self {
        Self::CONSISTENT
    }
}

/// The algebra A realized inside H.
pub struct Presentation {
    alg: CherednikAlgebra,
    conv: Convention,
    sigma: HElem,
    tau: HElem,
    u: Vec<HElem>,
    t: Vec<HElem>,
}

impl Presentation {
    pub fn new(n: usize, ell: u32) -> Result<Self> {
        Self::with_convention(n, ell, Convention::default())
    }

    pub fn with_convention(n: usize, ell: u32, conv: Convention) -> Result<Self> {
        let alg = CherednikAlgebra::new(n, ell)?;
        let ups = alg.group(&GroupElem::upsilon(1, n, ell)?)?;
        let ups_inv = alg.group(&GroupElem::upsilon(1, n, ell)?.inv())?;
        let sigma = alg.mul(&alg.x(1)?, &ups)?;
        let tau = alg.mul(&ups_inv, &alg.y(1)?)?;
        let t = (1..=n)
            .map(|i| alg.group(&GroupElem::t(i, n, ell)?))
            .collect::<Result<Vec<_>>>()?;
        let mut p = Presentation {
            alg,
            conv,
            sigma,
            tau,
            u: Vec::new(),
            t,
        };
        p.u = (1..=n).map(|i| p.u_from_xy(i)).collect::<Result<Vec<_>>>()?;
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.alg.n()
    }

    pub fn ell(&self) -> u32 {
        self.alg.ell()
    }

    pub fn convention(&self) -> Convention {
        self.conv
    }

    pub fn algebra(&self) -> &CherednikAlgebra {
        &self.alg
    }

    pub fn sigma_h(&self) -> &HElem {
        &self.sigma
    }

    pub fn tau_h(&self) -> &HElem {
        &self.tau
    }

    fn ga(&self, a: &GroupAlgElem) -> HElem {
        HElem::from_group_alg(a)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            Err(Error::IndexOutOfRange(format!("index {i} not in 1..={}", self.n())))
        } else {
            Ok(())
        }
    }

    /// `u_i = x_i y_i - p(t_i) + k sum_{j<i} sum_p t_j^p t_i^{-p} (ij)`.
    fn u_from_xy(&self, i: usize) -> Result<HElem> {
        let (n, ell) = (self.n(), self.ell());
        let a = &self.alg;
        let mut out = &a.mul(&a.x(i)?, &a.y(i)?)? - &self.ga(&p_of_t(i, 0, n, ell)?);
        for j in 1..i {
            out = &out + &self.ga(&refl_sum(j, i, false, n, ell)?.scale(&CycScalar::k()));
        }
        Ok(out)
    }

    /// `u_i = y_i x_i - p(zeta^{-1} t_i) - k sum_{j>i} sum_p t_j^p t_i^{-p} (ij) + hbar`.
    pub fn u_from_yx(&self, i: usize) -> Result<HElem> {
        self.check_index(i)?;
        let (n, ell) = (self.n(), self.ell());
        let a = &self.alg;
        let mut out = &a.mul(&a.y(i)?, &a.x(i)?)? - &self.ga(&p_of_t(i, -1, n, ell)?);
        for j in i + 1..=n {
            out = &out - &self.ga(&refl_sum(j, i, false, n, ell)?.scale(&CycScalar::k()));
        }
        Ok(&out + &a.scalar(CycScalar::hbar()))
    }

    /// The image of `u_i` for `1 <= i <= n`.
    pub fn u_h(&self, i: usize) -> Result<HElem> {
        self.check_index(i)?;
        Ok(self.u[i - 1].clone())
    }

    /// `(i0, q)` with `i = i0 + q n` and `1 <= i0 <= n`.
    fn reduce_index(&self, i: i64) -> (usize, i64) {
        let n = self.n() as i64;
        let q = (i - 1).div_euclid(n);
        ((i - q * n) as usize, q)
    }

    pub fn gen_h(&self, g: &AGen) -> Result<HElem> {
        let (n, ell) = (self.n(), self.ell());
        match g {
            AGen::Sigma => Ok(self.sigma.clone()),
            AGen::Tau => Ok(self.tau.clone()),
            AGen::U(i) => {
                let (i0, q) = self.reduce_index(*i);
                let shift = CycScalar::hbar().scale_rat(&Rat::from_int(q * self.conv.shift as i64));
                Ok(&self.u[i0 - 1] + &self.alg.scalar(shift))
            }
            AGen::T(i) => {
                let (i0, q) = self.reduce_index(*i);
                Ok(self.t[i0 - 1].scale(&CycScalar::zeta_pow(ell, q)))
            }
            AGen::Transp(j) => {
                if *j == 0 || *j >= n {
                    return Err(Error::IndexOutOfRange(format!("transposition s{j} needs 1 <= j < {n}")));
                }
                self.alg.group(&GroupElem::transposition(*j, j + 1, n, ell)?)
            }
            AGen::Group(g) => self.alg.group(g),
            AGen::Scalar(c) => Ok(self.alg.scalar(c.clone())),
        }
    }

    /// Evaluates a word of A in H.
    pub fn to_h(&self, w: &AWord) -> Result<HElem> {
        let mut out = HElem::zero(self.n(), self.ell());
        for (c, gens) in w.terms() {
            let mut acc = self.alg.scalar(c.clone());
            for g in gens {
                acc = self.alg.mul(&acc, &self.gen_h(g)?)?;
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// `chi_i sigma upsilon_i^{-1}` as a word.
    pub fn x_word(&self, i: usize) -> Result<AWord> {
        x_word(i, self.n(), self.ell())
    }

    /// `upsilon_i tau chi_i^{-1}` as a word.
    pub fn y_word(&self, i: usize) -> Result<AWord> {
        y_word(i, self.n(), self.ell())
    }

    pub fn x_image(&self, i: usize) -> Result<HElem> {
        self.to_h(&self.x_word(i)?)
    }

    pub fn y_image(&self, i: usize) -> Result<HElem> {
        self.to_h(&self.y_word(i)?)
    }

    /// Rewrites a PBW expression as a word of A, sending `x_i`, `y_i` to their
    /// words and group elements to themselves.
    pub fn h_to_word(&self, h: &HElem) -> Result<AWord> {
        let xs = (1..=self.n()).map(|i| self.x_word(i)).collect::<Result<Vec<_>>>()?;
        let ys = (1..=self.n()).map(|i| self.y_word(i)).collect::<Result<Vec<_>>>()?;
        let mut out = AWord::zero();
        for (m, c) in h.terms() {
            let mut w = AWord::scalar(c.clone());
            for (i, &e) in m.xexp().iter().enumerate() {
                w = &w * &xs[i].pow(e as u32);
            }
            if !m.group().is_identity() {
                w = &w * &AWord::group(m.group().clone());
            }
            for (i, &e) in m.yexp().iter().enumerate() {
                w = &w * &ys[i].pow(e as u32);
            }
            out = &out + &w;
        }
        Ok(out)
    }

    /// `sum_i u_i + n/2`.
    pub fn euler(&self) -> HElem {
        let mut out = self.alg.scalar(CycScalar::from_rat(Rat::new(self.n() as i64, 2)));
        for u in &self.u {
            out = &out + u;
        }
        out
    }

    /// Every instance of every relation family, in a fixed order.
    pub fn relations(&self) -> Vec<RelationInstance> {
        enumerate_relations(self.n(), self.ell(), self.conv)
    }

    pub fn residual(&self, r: &RelationInstance) -> Result<HElem> {
        Ok(&self.to_h(&r.lhs)? - &self.to_h(&r.rhs)?)
    }

    /// Evaluates every relation instance in parallel.
    pub fn check_all(&self) -> Result<CheckReport> {
        let instances = self.relations();
        let residuals: Vec<Result<HElem>> = instances.par_iter().map(|r| self.residual(r)).collect();
        let mut entries = Vec::with_capacity(instances.len());
        for (r, res) in instances.into_iter().zip(residuals) {
            entries.push(ResidualEntry {
                id: r.id,
                indices: r.indices,
                residual: res?,
            });
        }
        let skipped = RelationId::ALL
            .iter()
            .copied()
            .filter(|id| !entries.iter().any(|e| e.id == *id))
            .collect();
        Ok(CheckReport {
            n: self.n(),
            ell: self.ell(),
            convention: self.conv,
            entries,
            skipped,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationId {
    /// `u_i (j,j+1) = (j,j+1) u_{s_j i} - k a_j(e_i) sum_p t_j^p t_{j+1}^{-p}`.
    Hecke,
    /// `sigma (j,j-1) = (j+1,j) sigma`.
    SigmaIsotopy,
    /// `tau (j,j+1) = (j-1,j) tau`.
    TauIsotopy,
    /// `sigma tau = u_1 + p(t_1)`.
    SigmaTau,
    /// `tau sigma = u_n + e hbar + p(zeta^{-1} t_n)`.
    TauSigma,
    UCommute,
    /// `u_i sigma = sigma u_{i-1}`.
    USigma,
    /// `u_i tau = tau u_{i+1}`.
    UTau,
    /// `t_i sigma = sigma t_{i-1}`.
    TSigma,
    /// `t_i tau = tau t_{i+1}`.
    TTau,
    /// `tau (1,2) sigma = sigma (n-1,n) tau - k sum_p zeta^p t_n^p t_1^{-p}`.
    Seam,
    TorsionOrder,
    TorsionCommute,
    Involution,
    Braid,
    FarCommute,
    TorsionConjugate,
}

impl RelationId {
    pub const ALL: [RelationId; 17] = [
        RelationId::Hecke,
        RelationId::SigmaIsotopy,
        RelationId::TauIsotopy,
        RelationId::SigmaTau,
        RelationId::TauSigma,
        RelationId::UCommute,
        RelationId::USigma,
        RelationId::UTau,
        RelationId::TSigma,
        RelationId::TTau,
        RelationId::Seam,
        RelationId::TorsionOrder,
        RelationId::TorsionCommute,
        RelationId::Involution,
        RelationId::Braid,
        RelationId::FarCommute,
        RelationId::TorsionConjugate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationId::Hecke => "hecke",
            RelationId::SigmaIsotopy => "sigma-isotopy",
            RelationId::TauIsotopy => "tau-isotopy",
            RelationId::SigmaTau => "sigma-tau",
            RelationId::TauSigma => "tau-sigma",
            RelationId::UCommute => "u-commute",
            RelationId::USigma => "u-sigma",
            RelationId::UTau => "u-tau",
            RelationId::TSigma => "t-sigma",
            RelationId::TTau => "t-tau",
            RelationId::Seam => "seam",
            RelationId::TorsionOrder => "torsion-order",
            RelationId::TorsionCommute => "torsion-commute",
            RelationId::Involution => "involution",
            RelationId::Braid => "braid",
            RelationId::FarCommute => "far-commute",
            RelationId::TorsionConjugate => "torsion-conjugate",
        }
    }

    pub fn is_group_relation(self) -> bool {
        self >= RelationId::TorsionOrder
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct RelationInstance {
    pub id: RelationId,
    pub indices: Vec<i64>,
    pub lhs: AWord,
    pub rhs: AWord,
}

/// `sum_p c_p t_a^p t_b^{-p}` with `c_p = zeta^p` when `weighted`, else 1.
fn torsion_sum(a: i64, b: i64, weighted: bool, ell: u32) -> AWord {
    let mut w = AWord::zero();
    for p in 0..ell {
        let term = &AWord::t(a).pow(p) * &AWord::t(b).pow((ell - p) % ell);
        let c = if weighted {
            CycScalar::zeta_pow(ell, p as i64)
        } else {
            CycScalar::one()
        };
        w = &w + &term.scale(&c);
    }
    w
}

/// The seam relation with the weighted torsion sum taken as
/// `sum_p zeta^p t_1^p t_n^{-p}`. This is the form that holds for every `ell`;
/// the enumerated `Seam` instance keeps `t_n^p t_1^{-p}`, which agrees with it
/// only for `ell <= 2`.
pub fn seam_reversed_weights(n: usize, ell: u32) -> Option<RelationInstance> {
    (n >= 2).then(|| {
        let ni = n as i64;
        RelationInstance {
            id: RelationId::Seam,
            indices: vec![],
            lhs: &(&AWord::tau() * &AWord::s(1)) * &AWord::sigma(),
            rhs: &(&(&AWord::sigma() * &AWord::s(n - 1)) * &AWord::tau())
                - &torsion_sum(1, ni, true, ell).scale(&CycScalar::k()),
        }
    })
}

/// Every relation instance for `(n, ell)`. Families indexed by all integers
/// are taken over the window `1-n ..= 2n`, which covers both seams.
pub fn enumerate_relations(n: usize, ell: u32, conv: Convention) -> Vec<RelationInstance> {
    let mut out = Vec::new();
    let ni = n as i64;
    let k = CycScalar::k();
    let mut push = |id, indices: Vec<i64>, lhs: AWord, rhs: AWord| {
        out.push(RelationInstance { id, indices, lhs, rhs });
    };
    let torsion_sum = |a, b, weighted| torsion_sum(a, b, weighted, ell);

    for j in 1..n {
        for i in 1..=n {
            let si = if i == j {
                j + 1
            } else if i == j + 1 {
                j
            } else {
                i
            };
            let coroot = (i == j) as i64 - (i == j + 1) as i64;
            let lhs = &AWord::u(i as i64) * &AWord::s(j);
            let mut rhs = &AWord::s(j) * &AWord::u(si as i64);
            if coroot != 0 {
                let corr = torsion_sum(j as i64, j as i64 + 1, false).scale(&k.scale_rat(&Rat::from_int(coroot)));
                rhs = &rhs - &corr;
            }
            push(RelationId::Hecke, vec![i as i64, j as i64], lhs, rhs);
        }
    }
    for j in 2..n {
        push(
            RelationId::SigmaIsotopy,
            vec![j as i64],
            &AWord::sigma() * &AWord::s(j - 1),
            &AWord::s(j) * &AWord::sigma(),
        );
        push(
            RelationId::TauIsotopy,
            vec![j as i64],
            &AWord::tau() * &AWord::s(j),
            &AWord::s(j - 1) * &AWord::tau(),
        );
    }
    push(
        RelationId::SigmaTau,
        vec![],
        &AWord::sigma() * &AWord::tau(),
        &AWord::u(1) + &AWord::p_of_t(1, 0, ell),
    );
    let e = CycScalar::hbar().scale_rat(&Rat::from_int(conv.tau_sigma_hbar as i64));
    push(
        RelationId::TauSigma,
        vec![],
        &AWord::tau() * &AWord::sigma(),
        &(&AWord::u(ni) + &AWord::scalar(e)) + &AWord::p_of_t(ni, -1, ell),
    );
    let window = 1 - ni..=2 * ni;
    for i in window.clone() {
        for j in window.clone() {
            if i < j {
                push(
                    RelationId::UCommute,
                    vec![i, j],
                    &AWord::u(i) * &AWord::u(j),
                    &AWord::u(j) * &AWord::u(i),
                );
            }
        }
    }
    for i in window.clone() {
        push(
            RelationId::USigma,
            vec![i],
            &AWord::u(i) * &AWord::sigma(),
            &AWord::sigma() * &AWord::u(i - 1),
        );
        push(
            RelationId::UTau,
            vec![i],
            &AWord::u(i) * &AWord::tau(),
            &AWord::tau() * &AWord::u(i + 1),
        );
        push(
            RelationId::TSigma,
            vec![i],
            &AWord::t(i) * &AWord::sigma(),
            &AWord::sigma() * &AWord::t(i - 1),
        );
        push(
            RelationId::TTau,
            vec![i],
            &AWord::t(i) * &AWord::tau(),
            &AWord::tau() * &AWord::t(i + 1),
        );
    }
    if n >= 2 {
        push(
            RelationId::Seam,
            vec![],
            &(&AWord::tau() * &AWord::s(1)) * &AWord::sigma(),
            &(&(&AWord::sigma() * &AWord::s(n - 1)) * &AWord::tau()) - &torsion_sum(ni, 1, true).scale(&k),
        );
    }

    for i in 1..=ni {
        push(RelationId::TorsionOrder, vec![i], AWord::t(i).pow(ell), AWord::one());
        for j in i + 1..=ni {
            push(
                RelationId::TorsionCommute,
                vec![i, j],
                &AWord::t(i) * &AWord::t(j),
                &AWord::t(j) * &AWord::t(i),
            );
        }
    }
    for j in 1..n {
        push(RelationId::Involution, vec![j as i64], AWord::s(j).pow(2), AWord::one());
        if j + 1 < n {
            push(
                RelationId::Braid,
                vec![j as i64],
                &(&AWord::s(j) * &AWord::s(j + 1)) * &AWord::s(j),
                &(&AWord::s(j + 1) * &AWord::s(j)) * &AWord::s(j + 1),
            );
        }
        for m in j + 2..n {
            push(
                RelationId::FarCommute,
                vec![j as i64, m as i64],
                &AWord::s(j) * &AWord::s(m),
                &AWord::s(m) * &AWord::s(j),
            );
        }
        for i in 1..=n {
            let si = if i == j {
                j + 1
            } else if i == j + 1 {
                j
            } else {
                i
            };
            push(
                RelationId::TorsionConjugate,
                vec![i as i64, j as i64],
                &(&AWord::s(j) * &AWord::t(i as i64)) * &AWord::s(j),
                AWord::t(si as i64),
            );
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ResidualEntry {
    pub id: RelationId,
    pub indices: Vec<i64>,
    pub residual: HElem,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub n: usize,
    pub ell: u32,
    pub convention: Convention,
    pub entries: Vec<ResidualEntry>,
    /// Families with no instance for this `(n, ell)`.
    pub skipped: Vec<RelationId>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.residual.is_zero())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResidualEntry> {
        self.entries.iter().filter(|e| !e.residual.is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .entries
            .iter()
            .map(|e| {
                serde_json::json!({
                    "relation": e.id.name(),
                    "indices": e.indices,
                    "pass": e.residual.is_zero(),
                    "residual": e.residual.to_string(),
                })
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "ell": self.ell,
            "convention": self.convention,
            "pass": self.passed(),
            "skipped": self.skipped.iter().map(|id| id.name()).collect::<Vec<_>>(),
            "instances": entries,
        })
    }
}

/// The conventions under which every relation holds for all given `(n, ell)`.
pub fn select_convention(shapes: &[(usize, u32)]) -> Result<Vec<Convention>> {
    let mut winners = Vec::new();
    for conv in Convention::all() {
        let mut ok = true;
        for &(n, ell) in shapes {
            if !Presentation::with_convention(n, ell, conv)?.check_all()?.passed() {
                ok = false;
                break;
            }
        }
        if ok {
            winners.push(conv);
        }
    }
    Ok(winners)
}

/// ASCII picture of a single word on the cut-open cylinder; the seam is the
/// pair of `:` columns. Rows are read bottom to top, one per generator.
pub fn render_ascii(word: &[AGen], n: usize) -> String {
    let strands = |marks: &[(usize, char)]| {
        let mut row = String::from(":");
        for i in 1..=n {
            let c = marks.iter().find(|(j, _)| *j == i).map(|(_, c)| *c).unwrap_or('|');
            row.push(' ');
            row.push(c);
        }
        row.push_str(" :");
        row
    };
    let wrap = |i: i64| ((i - 1).rem_euclid(n as i64) + 1) as usize;
    let mut rows = Vec::new();
    for g in word {
        let (row, label) = match g {
            AGen::Sigma => (strands(&(1..=n).map(|i| (i, '/')).collect::<Vec<_>>()), "sigma".to_string()),
            AGen::Tau => (strands(&(1..=n).map(|i| (i, '\\')).collect::<Vec<_>>()), "tau".to_string()),
            AGen::U(i) => (strands(&[(wrap(*i), 'o')]), g.to_string()),
            AGen::T(i) => (strands(&[(wrap(*i), '*')]), g.to_string()),
            AGen::Transp(j) => (strands(&[(*j, '\\'), (j + 1, '/')]), g.to_string()),
            AGen::Group(_) | AGen::Scalar(_) => (strands(&[]), g.to_string()),
        };
        rows.push(format!("{row}   {label}"));
    }
    rows.push(strands(&[]));
    rows.reverse();
    rows.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(n: usize, ell: u32) -> Presentation {
        Presentation::new(n, ell).unwrap()
    }

    #[test]
    fn sigma_and_tau_images() {
        let p = pres(1, 1);
        assert_eq!(p.sigma_h().to_string(), "x1");
        assert_eq!(p.tau_h().to_string(), "y1");
        let p = pres(2, 2);
        assert_eq!(p.sigma_h().to_string(), "x1*perm=[2,1]t=[0,0]");
        let st = p.algebra().mul(p.sigma_h(), p.tau_h()).unwrap();
        assert_eq!(st.to_string(), "x1*y1");
    }

    #[test]
    fn u_images_small() {
        let p = pres(1, 1);
        assert_eq!(p.u_h(1).unwrap().to_string(), "x1*y1");
        let p = pres(2, 1);
        assert_eq!(p.u_h(1).unwrap().to_string(), "x1*y1");
        assert_eq!(p.u_h(2).unwrap().to_string(), "x2*y2 + k*perm=[2,1]t=[0,0]");
    }

    #[test]
    fn both_u_forms_agree() {
        for (n, ell) in [(2, 2), (3, 2), (2, 3)] {
            let p = pres(n, ell);
            for i in 1..=n {
                assert_eq!(p.u_h(i).unwrap(), p.u_from_yx(i).unwrap(), "(n, ell, i) = ({n}, {ell}, {i})");
            }
        }
    }

    #[test]
    fn images_of_x_and_y() {
        for (n, ell) in [(1, 1), (3, 1), (3, 2)] {
            let p = pres(n, ell);
            for i in 1..=n {
                assert_eq!(p.x_image(i).unwrap(), p.algebra().x(i).unwrap());
                assert_eq!(p.y_image(i).unwrap(), p.algebra().y(i).unwrap());
            }
        }
    }

    #[test]
    fn shift_rules() {
        let p = pres(2, 3);
        let u0 = p.to_h(&AWord::u(0)).unwrap();
        let expect = &p.u_h(2).unwrap() - &p.algebra().scalar(CycScalar::hbar());
        assert_eq!(u0, expect);
        let t3 = p.to_h(&AWord::t(3)).unwrap();
        assert_eq!(t3, p.to_h(&AWord::t(1)).unwrap().scale(&CycScalar::zeta_pow(3, 1)));
    }

    #[test]
    fn sigma_tau_for_ell_one() {
        let p = pres(2, 1);
        let lhs = p.to_h(&(&AWord::sigma() * &AWord::tau())).unwrap();
        assert_eq!(lhs, p.to_h(&AWord::u(1)).unwrap());
        let comm = &(&AWord::u(1) * &AWord::u(2)) - &(&AWord::u(2) * &AWord::u(1));
        assert!(p.to_h(&comm).unwrap().is_zero());
    }

    #[test]
    fn small_relation_suite_passes() {
        for (n, ell) in [(1, 1), (2, 1), (2, 2), (1, 3)] {
            let rep = pres(n, ell).check_all().unwrap();
            let bad: Vec<_> = rep.failures().map(|e| format!("{} {:?}: {}", e.id, e.indices, e.residual)).collect();
            assert!(bad.is_empty(), "(n, ell) = ({n}, {ell}): {bad:#?}");
        }
    }

    #[test]
    fn vacuous_families_are_skipped() {
        let rep = pres(1, 1).check_all().unwrap();
        for id in [RelationId::Hecke, RelationId::Seam, RelationId::SigmaIsotopy, RelationId::Braid] {
            assert!(rep.skipped.contains(&id));
        }
        assert!(!rep.skipped.contains(&RelationId::SigmaTau));
    }

    #[test]
    fn exactly_one_convention_survives() {
        let winners = select_convention(&[(2, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(winners, vec![Convention::CONSISTENT]);
    }

    #[test]
    fn h_to_word_round_trips() {
        let p = pres(2, 2);
        let a = p.algebra();
        let g = GroupElem::from_parts(&[2, 1], &[1, 0], 2).unwrap();
        let h = a
            .product([&a.x(1).unwrap(), &a.group(&g).unwrap(), &a.y(2).unwrap()])
            .unwrap();
        let h = &h + &a.scalar(CycScalar::k());
        assert_eq!(p.to_h(&p.h_to_word(&h).unwrap()).unwrap(), h);
    }

    #[test]
    fn seam_with_reversed_weights_holds_for_ell_three() {
        for (n, ell) in [(2, 1), (2, 2), (2, 3), (3, 3), (2, 4)] {
            let p = pres(n, ell);
            let r = seam_reversed_weights(n, ell).unwrap();
            assert!(p.residual(&r).unwrap().is_zero(), "(n, ell) = ({n}, {ell})");
        }
        assert!(seam_reversed_weights(1, 3).is_none());
    }

    #[test]
    fn enumerated_seam_differs_only_from_ell_three() {
        for (n, ell, holds) in [(2, 2, true), (3, 2, true), (2, 3, false), (3, 3, false)] {
            let p = pres(n, ell);
            let seam = p.relations().into_iter().find(|r| r.id == RelationId::Seam).unwrap();
            assert_eq!(p.residual(&seam).unwrap().is_zero(), holds, "(n, ell) = ({n}, {ell})");
        }
    }

    #[test]
    fn euler_grades_x_down_and_y_up() {
        for (n, ell) in [(1, 1), (2, 2), (2, 3)] {
            let p = pres(n, ell);
            let a = p.algebra();
            let eu = p.euler();
            let hbar = CycScalar::hbar();
            for i in 1..=n {
                let x = a.x(i).unwrap();
                let y = a.y(i).unwrap();
                assert_eq!(a.commutator(&eu, &x).unwrap(), x.scale(&-&hbar));
                assert_eq!(a.commutator(&eu, &y).unwrap(), y.scale(&hbar));
            }
            for g in GroupElem::enumerate(n, ell) {
                let gh = a.group(&g).unwrap();
                assert!(a.commutator(&eu, &gh).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn index_errors() {
        let p = pres(2, 1);
        assert!(p.to_h(&AWord::s(2)).is_err());
        assert!(p.u_h(3).is_err());
        assert!(p.x_word(0).is_err());
    }

    #[test]
    fn render_has_one_row_per_generator() {
        let pic = render_ascii(&[AGen::Sigma, AGen::U(1), AGen::Transp(1)], 2);
        assert_eq!(pic.lines().count(), 4);
        assert!(pic.lines().all(|l| l.starts_with(':')));
    }
}
