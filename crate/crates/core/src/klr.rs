//! Weighted-KLR parameter combinatorics: residues modulo `ℓℤ`, the quiver on
//! a residue set, loadings of eigenvalue tuples, unsteadiness, KZ weight
//! tuples and the case split for straight-line crossings.
//!
//! Numbers live in the field `ℚ + ℚk`. Throughout `ħ = 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::Rat;

/// How `k` is treated: either a fixed rational `a/e`, or a formal symbol
/// together with the chosen value of `Υ(k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KMode {
    Rational(Rat),
    Transcendental { upsilon_k: Rat },
}

impl KMode {
    pub fn rational(a: i64, e: i64) -> Self {
        KMode::Rational(Rat::new(a, e))
    }

    pub fn transcendental() -> Self {
        KMode::Transcendental {
            upsilon_k: Rat::zero(),
        }
    }

    pub fn upsilon_k(&self) -> Rat {
        match self {
            KMode::Rational(k) => k.clone(),
            KMode::Transcendental { upsilon_k } => upsilon_k.clone(),
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, KMode::Rational(_))
    }

    /// Denominator `e` of `k = a/e` in lowest terms.
    pub fn e(&self) -> Option<BigInt> {
        match self {
            KMode::Rational(k) => Some(k.denom().clone()),
            KMode::Transcendental { .. } => None,
        }
    }

    /// The parameter `k` itself.
    pub fn k(&self) -> ParamNumber {
        ParamNumber::new(Rat::zero(), Rat::one(), self.clone())
    }
}

impl fmt::Display for KMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KMode::Rational(k) => write!(f, "rational:{k}"),
            KMode::Transcendental { upsilon_k } if upsilon_k.is_zero() => {
                write!(f, "transcendental")
            }
            KMode::Transcendental { upsilon_k } => write!(f, "transcendental:{upsilon_k}"),
        }
    }
}

impl FromStr for KMode {
    type Err = Error;

    /// Accepts `rational:a/e`, `transcendental` and `transcendental:<Υ(k)>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h.trim(), Some(t.trim())),
            None => (s, None),
        };
        match (head, tail) {
            ("rational", Some(t)) => Ok(KMode::Rational(t.parse()?)),
            ("transcendental", None) => Ok(KMode::transcendental()),
            ("transcendental", Some(t)) => Ok(KMode::Transcendental {
                upsilon_k: t.parse()?,
            }),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown k-mode {s:?}; expected rational:a/e or transcendental"),
            }),
        }
    }
}

/// An element `q0 + q1·k` of `ℚ + ℚk`.
///
/// In rational mode the `k` part is folded into `q0`, so `q1` is always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParamNumber {
    q0: Rat,
    q1: Rat,
    mode: KMode,
}

impl ParamNumber {
    pub fn new(q0: Rat, q1: Rat, mode: KMode) -> Self {
        match &mode {
            KMode::Rational(k) => ParamNumber {
                q0: q0 + &(&q1 * k),
                q1: Rat::zero(),
                mode,
            },
            KMode::Transcendental { .. } => ParamNumber { q0, q1, mode },
        }
    }

    pub fn rat(q0: Rat, mode: &KMode) -> Self {
        ParamNumber::new(q0, Rat::zero(), mode.clone())
    }

    pub fn int(n: i64, mode: &KMode) -> Self {
        ParamNumber::rat(Rat::from_int(n), mode)
    }

    pub fn zero(mode: &KMode) -> Self {
        ParamNumber::int(0, mode)
    }

    pub fn q0(&self) -> &Rat {
        &self.q0
    }

    pub fn q1(&self) -> &Rat {
        &self.q1
    }

    pub fn mode(&self) -> &KMode {
        &self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.q0.is_zero() && self.q1.is_zero()
    }

    /// `Υ(q0 + q1 k) = q0 + q1 Υ(k)`.
    pub fn upsilon(&self) -> Rat {
        &self.q0 + &(&self.q1 * &self.mode.upsilon_k())
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = Rat::from_int(c);
        ParamNumber {
            q0: &self.q0 * &c,
            q1: &self.q1 * &c,
            mode: self.mode.clone(),
        }
    }

    /// Parses `3/2`, `k`, `-2k`, `1/2 + 3/4*k` and similar.
    pub fn parse(s: &str, mode: &KMode) -> Result<Self> {
        let bad = |msg: String| Error::Parse { pos: 0, msg };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty number".into()));
        }
        let mut q0 = Rat::zero();
        let mut q1 = Rat::zero();
        let mut start = 0;
        let bytes = compact.as_bytes();
        let mut pieces = Vec::new();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i] == b'+' || bytes[i] == b'-' {
                pieces.push(&compact[start..i]);
                start = i;
            }
        }
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'-' => (-1, &piece[1..]),
                b'+' => (1, &piece[1..]),
                _ => (1, piece),
            };
            let (coeff, is_k) = match body.strip_suffix('k') {
                Some(c) => {
                    let c = c.strip_suffix('*').unwrap_or(c);
                    if c.is_empty() {
                        (Rat::one(), true)
                    } else {
                        (c.parse::<Rat>()?, true)
                    }
                }
                None => (body.parse::<Rat>()?, false),
            };
            let coeff = coeff * Rat::from_int(sign);
            if is_k {
                q1 = q1 + coeff;
            } else {
                q0 = q0 + coeff;
            }
        }
        Ok(ParamNumber::new(q0, q1, mode.clone()))
    }
}

impl Add<&ParamNumber> for &ParamNumber {
    type Output = ParamNumber;
    fn add(self, rhs: &ParamNumber) -> ParamNumber {
        debug_assert_eq!(self.mode, rhs.mode);
        ParamNumber {
            q0: &self.q0 + &rhs.q0,
            q1: &self.q1 + &rhs.q1,
            mode: self.mode.clone(),
        }
    }
}

impl Sub<&ParamNumber> for &ParamNumber {
    type Output = ParamNumber;
    fn sub(self, rhs: &ParamNumber) -> ParamNumber {
        self + &(-rhs)
    }
}

impl Neg for &ParamNumber {
    type Output = ParamNumber;
    fn neg(self) -> ParamNumber {
        ParamNumber {
            q0: -self.q0.clone(),
            q1: -self.q1.clone(),
            mode: self.mode.clone(),
        }
    }
}

fn fmt_q0_q1(q0: &Rat, q1: &Rat, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let kpart = |c: &Rat| -> String {
        if c.is_one() {
            "k".to_string()
        } else if *c == Rat::from_int(-1) {
            "-k".to_string()
        } else {
            format!("{c}*k")
        }
    };
    match (q0.is_zero(), q1.is_zero()) {
        (_, true) => write!(f, "{q0}"),
        (true, false) => write!(f, "{}", kpart(q1)),
        (false, false) if q1.is_negative() => write!(f, "{q0} - {}", kpart(&q1.abs())),
        (false, false) => write!(f, "{q0} + {}", kpart(q1)),
    }
}

impl fmt::Display for ParamNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_q0_q1(&self.q0, &self.q1, f)
    }
}

/// A class in `𝕂/ℓℤ`, with `q0` reduced into `[0, ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    q0: Rat,
    q1: Rat,
    ell: u32,
}

impl Residue {
    pub fn of(a: &ParamNumber, ell: u32) -> Self {
        assert!(ell >= 1);
        Residue {
            q0: a.q0.rem_euclid(&Rat::from_int(ell as i64)),
            q1: a.q1.clone(),
            ell,
        }
    }

    pub fn q0(&self) -> &Rat {
        &self.q0
    }

    pub fn q1(&self) -> &Rat {
        &self.q1
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    /// Adds `c` to the class.
    pub fn shift(&self, c: &ParamNumber) -> Self {
        let a = ParamNumber::new(&self.q0 + &c.q0, &self.q1 + &c.q1, c.mode.clone());
        Residue::of(&a, self.ell)
    }

    /// The lift `φ(d)` with `Υ(φ(d)) ∈ [0, ℓ)`.
    pub fn lift(&self, mode: &KMode) -> ParamNumber {
        let l = Rat::from_int(self.ell as i64);
        let ups = &self.q0 + &(&self.q1 * &mode.upsilon_k());
        let target = ups.rem_euclid(&l);
        ParamNumber::new(&self.q0 + &(target - ups), self.q1.clone(), mode.clone())
    }
}

impl Add<&Residue> for &Residue {
    type Output = Residue;
    fn add(self, rhs: &Residue) -> Residue {
        assert_eq!(self.ell, rhs.ell);
        let l = Rat::from_int(self.ell as i64);
        Residue {
            q0: (&self.q0 + &rhs.q0).rem_euclid(&l),
            q1: &self.q1 + &rhs.q1,
            ell: self.ell,
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_q0_q1(&self.q0, &self.q1, f)
    }
}

/// `Σ(a, ζ^m)`: the class of `a + m` modulo `ℓℤ`.
pub fn sigma_residue(a: &ParamNumber, m: i64, ell: u32) -> Residue {
    Residue::of(&(a + &ParamNumber::int(m, &a.mode)), ell)
}

/// Reduces an exponent of `ζ` into `[0, ℓ)`.
pub fn zeta_exp(m: i64, ell: u32) -> i64 {
    m.rem_euclid(ell as i64)
}

/// Global structure promised by the choice of `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuiverClass {
    /// A subgraph of a union of `e`-cycles.
    ECycles { e: String },
    /// A subgraph of a union of infinite linear quivers.
    Linear,
}

/// The quiver on a residue set with arrows `m → m − kℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverD {
    pub ell: u32,
    pub k: ParamNumber,
    pub vertices: BTreeSet<Residue>,
    pub arrows: Vec<(Residue, Residue)>,
}

/// Builds the quiver, adding an arrow whenever both ends lie in `d`.
pub fn build_quiver(d: &BTreeSet<Residue>, k: &ParamNumber, ell: u32) -> QuiverD {
    let shift = -&k.scale(ell as i64);
    let arrows = d
        .iter()
        .filter_map(|m| {
            let target = m.shift(&shift);
            d.contains(&target).then(|| (m.clone(), target))
        })
        .collect();
    QuiverD {
        ell,
        k: k.clone(),
        vertices: d.clone(),
        arrows,
    }
}

impl QuiverD {
    pub fn class(&self) -> QuiverClass {
        match self.k.mode.e() {
            Some(e) => QuiverClass::ECycles { e: e.to_string() },
            None => QuiverClass::Linear,
        }
    }

    fn successor_map(&self) -> BTreeMap<&Residue, &Residue> {
        self.arrows.iter().map(|(s, t)| (s, t)).collect()
    }

    pub fn out_degree(&self, v: &Residue) -> usize {
        self.arrows.iter().filter(|(s, _)| s == v).count()
    }

    pub fn in_degree(&self, v: &Residue) -> usize {
        self.arrows.iter().filter(|(_, t)| t == v).count()
    }

    /// Lengths of the directed cycles; every vertex has out-degree at most one,
    /// so each cycle is found by walking successors.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let succ = self.successor_map();
        let mut seen: BTreeSet<&Residue> = BTreeSet::new();
        let mut lengths = Vec::new();
        for start in &self.vertices {
            if seen.contains(start) {
                continue;
            }
            let mut path: Vec<&Residue> = Vec::new();
            let mut pos: BTreeMap<&Residue, usize> = BTreeMap::new();
            let mut cur = start;
            loop {
                if let Some(&i) = pos.get(cur) {
                    lengths.push(path.len() - i);
                    break;
                }
                if seen.contains(cur) {
                    break;
                }
                pos.insert(cur, path.len());
                path.push(cur);
                match succ.get(cur) {
                    Some(&next) => cur = next,
                    None => break,
                }
            }
            seen.extend(path);
        }
        lengths
    }

    pub fn is_acyclic(&self) -> bool {
        self.cycle_lengths().is_empty()
    }

    /// Checks the structural claim for the mode: degrees at most one, and
    /// either every cycle has length `e` or there are no cycles at all.
    pub fn satisfies_structure(&self) -> bool {
        let degrees_ok = self
            .vertices
            .iter()
            .all(|v| self.out_degree(v) <= 1 && self.in_degree(v) <= 1);
        if !degrees_ok {
            return false;
        }
        match self.k.mode.e() {
            Some(e) => {
                let e = e.to_usize().unwrap_or(usize::MAX);
                self.cycle_lengths().iter().all(|&c| c == e)
            }
            None => self.is_acyclic(),
        }
    }
}

/// Parameters for the loading and category-O combinatorics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlrParams {
    pub ell: u32,
    pub mode: KMode,
    /// `s_1, …, s_ℓ`.
    pub s: Vec<ParamNumber>,
}

impl KlrParams {
    pub fn new(ell: u32, mode: KMode, s: Vec<ParamNumber>) -> Result<Self> {
        if ell == 0 {
            return Err(Error::Invalid("ell must be positive".into()));
        }
        if s.len() != ell as usize {
            return Err(Error::Mismatch(format!(
                "expected {ell} values of s, got {}",
                s.len()
            )));
        }
        Ok(KlrParams { ell, mode, s })
    }

    /// All `s_i = 0`.
    pub fn zero_s(ell: u32, mode: KMode) -> Self {
        let s = vec![ParamNumber::zero(&mode); ell as usize];
        KlrParams { ell, mode, s }
    }

    pub fn k(&self) -> ParamNumber {
        self.mode.k()
    }

    /// `p(ζ^m) = s_m + m` for `m` taken in `1..=ℓ`.
    pub fn p_at(&self, m: i64) -> ParamNumber {
        let l = self.ell as i64;
        let idx = (m - 1).rem_euclid(l) + 1;
        &self.s[(idx - 1) as usize] + &ParamNumber::int(idx, &self.mode)
    }

    /// Red points: `Υ(−p(ζ^i))` labelled by the class of `−s_i`.
    pub fn red_points(&self) -> Vec<RedPoint> {
        (1..=self.ell as i64)
            .map(|i| RedPoint {
                index: i as u32,
                position: (-&self.p_at(i)).upsilon(),
                label: Residue::of(&-&self.s[(i - 1) as usize], self.ell),
            })
            .collect()
    }
}

/// `{s_i + mk : m ∈ [−n, n]}` modulo `ℓℤ`.
pub fn category_o_residues(params: &KlrParams, n: usize) -> BTreeSet<Residue> {
    let k = params.k();
    let n = n as i64;
    params
        .s
        .iter()
        .flat_map(|s| {
            let k = &k;
            (-n..=n).map(move |m| Residue::of(&(s + &k.scale(m)), params.ell))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LoadingPoint {
    pub position: Rat,
    pub label: Residue,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RedPoint {
    pub index: u32,
    pub position: Rat,
    pub label: Residue,
}

/// Labelled points on the real line; `points[i]` belongs to strand `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Loading {
    pub epsilon: Rat,
    pub upsilon_k: Rat,
    pub points: Vec<LoadingPoint>,
    pub red: Vec<RedPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum EpsilonPolicy {
    /// Minimal nonzero `|Υ(a_i − a_j)|` divided by `2n`, or `1/(2n)`.
    #[default]
    Auto,
    /// A caller-supplied value; it must be positive and below every
    /// nonzero `|Υ(a_i − a_j)|/n`.
    Fixed(Rat),
    /// Like `Auto`, but also small against the distances to the red points
    /// and to the `|Υk|` windows, so the tie-break cannot move a point across
    /// a threshold of the unsteadiness test.
    Inert,
}

/// The computed tie-break `ε`.
pub fn auto_epsilon(a: &[ParamNumber]) -> Rat {
    let n = a.len().max(1) as i64;
    let mut gap: Option<Rat> = None;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let d = (&a[i] - &a[j]).upsilon().abs();
            if !d.is_zero() && gap.as_ref().is_none_or(|g| d < *g) {
                gap = Some(d);
            }
        }
    }
    let g = gap.unwrap_or_else(Rat::one);
    g * Rat::new(1, 2 * n)
}

/// `ε` below half of every nonzero critical distance, divided by `n`. The
/// critical distances are `|x − y ± g|` and `|x − y|` for `x` a black point
/// and `y` a black or red point, with `g = |Υk|`.
pub fn inert_epsilon(a: &[ParamNumber], params: &KlrParams) -> Rat {
    let n = a.len().max(1) as i64;
    let g = params.mode.upsilon_k().abs();
    let xs: Vec<Rat> = a.iter().map(ParamNumber::upsilon).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .cloned()
        .chain(params.red_points().into_iter().map(|r| r.position))
        .collect();
    let mut best: Option<Rat> = None;
    for x in &xs {
        for y in &ys {
            let d = x - y;
            for c in [d.clone(), &d + &g, &d - &g] {
                let c = c.abs();
                if !c.is_zero() && best.as_ref().is_none_or(|b| c < *b) {
                    best = Some(c);
                }
            }
        }
    }
    if !g.is_zero() && best.as_ref().is_none_or(|b| g < *b) {
        best = Some(g);
    }
    best.unwrap_or_else(Rat::one) * Rat::new(1, 2 * n)
}

/// The loading sending `Υ(a_i) + iε` to `Σ(a_i, z_i)`. `z[i]` is the exponent
/// of `ζ`.
pub fn loading_from_pair(
    a: &[ParamNumber],
    z: &[i64],
    params: &KlrParams,
    policy: &EpsilonPolicy,
) -> Result<Loading> {
    if a.len() != z.len() {
        return Err(Error::Mismatch(format!(
            "a has length {}, z has length {}",
            a.len(),
            z.len()
        )));
    }
    let auto = auto_epsilon(a);
    let epsilon = match policy {
        EpsilonPolicy::Auto => auto,
        EpsilonPolicy::Inert => inert_epsilon(a, params),
        EpsilonPolicy::Fixed(e) => {
            if e.is_negative() || e.is_zero() || *e >= auto.clone() * Rat::from_int(2) {
                return Err(Error::Invalid(format!("epsilon {e} is not admissible")));
            }
            e.clone()
        }
    };
    let points = a
        .iter()
        .zip(z)
        .enumerate()
        .map(|(i, (ai, &zi))| LoadingPoint {
            position: ai.upsilon() + &epsilon * &Rat::from_int(i as i64 + 1),
            label: sigma_residue(ai, zi, params.ell),
        })
        .collect();
    Ok(Loading {
        epsilon,
        upsilon_k: params.mode.upsilon_k(),
        points,
        red: params.red_points(),
    })
}

impl Loading {
    /// The black points sorted by position.
    pub fn sorted_points(&self) -> Vec<LoadingPoint> {
        let mut p = self.points.clone();
        p.sort();
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Positive,
    Negative,
}

impl Stability {
    pub fn sign(self) -> i64 {
        match self {
            Stability::Positive => 1,
            Stability::Negative => -1,
        }
    }
}

impl FromStr for Stability {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "positive" | "pos" => Ok(Stability::Positive),
            "-" | "negative" | "neg" => Ok(Stability::Negative),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown stability {s:?}"),
            }),
        }
    }
}

/// Reading of the bound on `δ` relative to the red points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedQuantifier {
    /// `δ` is beyond every red point.
    #[default]
    All,
    /// `δ` is beyond at least one red point.
    Some,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnsteadyWitness {
    pub delta: Rat,
    /// 1-based strands in the separated cluster.
    pub strands: Vec<usize>,
}

/// Decides unsteadiness, returning a witness `δ` when one exists.
pub fn is_unsteady(
    loading: &Loading,
    stability: Stability,
    quantifier: RedQuantifier,
) -> Option<UnsteadyWitness> {
    if loading.points.is_empty() || loading.red.is_empty() {
        return None;
    }
    // The negative condition is the positive one after x ↦ −x.
    let sign = Rat::from_int(stability.sign());
    let xs: Vec<Rat> = loading.points.iter().map(|p| &p.position * &sign).collect();
    let reds = loading.red.iter().map(|r| &r.position * &sign);
    let bound = match quantifier {
        RedQuantifier::All => reds.max(),
        RedQuantifier::Some => reds.min(),
    }
    .expect("red points present");
    let gap = loading.upsilon_k.abs();
    let mut candidates: Vec<&Rat> = std::iter::once(&bound)
        .chain(xs.iter().filter(|x| **x >= bound))
        .collect();
    candidates.sort();
    candidates.dedup();
    for delta in candidates {
        let high = delta + &gap;
        let strands: Vec<usize> = (0..xs.len()).filter(|&i| xs[i] > high).map(|i| i + 1).collect();
        let rest_ok = xs.iter().all(|x| *x > high || x <= delta);
        if !strands.is_empty() && rest_ok {
            return Some(UnsteadyWitness {
                delta: delta * &sign,
                strands,
            });
        }
    }
    None
}

/// An `ℓ`-tuple of partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multipartition(pub Vec<Vec<usize>>);

/// Box `(u, v, w)`: row, column, component, all 1-based.
pub type BoxAddr = (usize, usize, usize);

impl Multipartition {
    pub fn new(parts: Vec<Vec<usize>>) -> Result<Self> {
        for p in &parts {
            if p.windows(2).any(|w| w[0] < w[1]) || p.contains(&0) {
                return Err(Error::Invalid(format!("{p:?} is not a partition")));
            }
        }
        Ok(Multipartition(parts))
    }

    pub fn ell(&self) -> usize {
        self.0.len()
    }

    pub fn size(&self) -> usize {
        self.0.iter().flatten().sum()
    }

    pub fn boxes(&self) -> Vec<BoxAddr> {
        let mut out = Vec::new();
        for (w, p) in self.0.iter().enumerate() {
            for (u, &len) in p.iter().enumerate() {
                for v in 0..len {
                    out.push((u + 1, v + 1, w + 1));
                }
            }
        }
        out
    }

    /// Row reading, component by component: entry `m` sits in `boxes()[m-1]`.
    pub fn canonical_tableau(&self) -> Vec<BoxAddr> {
        self.boxes()
    }

    /// Every standard filling, each listed as the box holding `1, 2, …, n`.
    pub fn standard_tableaux(&self) -> Vec<Vec<BoxAddr>> {
        let mut out = Vec::new();
        let mut filled: Vec<Vec<usize>> = self.0.iter().map(|p| vec![0; p.len()]).collect();
        let mut path = Vec::new();
        self.extend_tableaux(&mut filled, &mut path, &mut out);
        out
    }

    fn extend_tableaux(
        &self,
        filled: &mut Vec<Vec<usize>>,
        path: &mut Vec<BoxAddr>,
        out: &mut Vec<Vec<BoxAddr>>,
    ) {
        if path.len() == self.size() {
            out.push(path.clone());
            return;
        }
        for w in 0..self.0.len() {
            for u in 0..self.0[w].len() {
                let v = filled[w][u];
                let addable = v < self.0[w][u] && (u == 0 || filled[w][u - 1] > v);
                if addable {
                    filled[w][u] += 1;
                    path.push((u + 1, v + 1, w + 1));
                    self.extend_tableaux(filled, path, out);
                    path.pop();
                    filled[w][u] -= 1;
                }
            }
        }
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<String> = self
            .0
            .iter()
            .map(|p| {
                let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        write!(f, "({})", comps.join(","))
    }
}

impl FromStr for Multipartition {
    type Err = Error;

    /// Components separated by `|`, parts by `,`: `2,1|1` or `|3`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('|')
            .map(|comp| {
                comp.split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<usize>().map_err(|_| Error::Parse {
                            pos: 0,
                            msg: format!("bad part {t:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Multipartition::new(parts)
    }
}

/// `a_m = w + (ℓ/e)(v − u)` and `z_m = ζ^{−w}` for the box holding `m`.
pub fn tableau_pair(tableau: &[BoxAddr], e: i64, ell: u32) -> (Vec<ParamNumber>, Vec<i64>) {
    let mode = KMode::rational(1, e);
    let scale = Rat::new(ell as i64, e);
    tableau
        .iter()
        .map(|&(u, v, w)| {
            let content = Rat::from_int(v as i64 - u as i64);
            let a = ParamNumber::rat(Rat::from_int(w as i64) + &scale * &content, &mode);
            (a, zeta_exp(-(w as i64), ell))
        })
        .unzip()
}

/// The `(a, z)` pair and loading of the canonical tableau, with `k = 1/e`.
pub fn multipartition_loading(
    xi: &Multipartition,
    e: i64,
    params: &KlrParams,
) -> Result<(Vec<ParamNumber>, Vec<i64>, Loading)> {
    if xi.ell() != params.ell as usize {
        return Err(Error::Mismatch(format!(
            "multipartition has {} components but ell = {}",
            xi.ell(),
            params.ell
        )));
    }
    if params.mode != KMode::rational(1, e) {
        return Err(Error::Invalid(format!("multipartition loadings need k = 1/{e}")));
    }
    let (a, z) = tableau_pair(&xi.canonical_tableau(), e, params.ell);
    let loading = loading_from_pair(&a, &z, params, &EpsilonPolicy::Auto)?;
    Ok((a, z, loading))
}

/// The `N` used for KZ weights: the least multiple of `ℓ` that is at least
/// `⌈max(|Υ(p(ζ^i))|, |Υ(k)|, |Υ(φ(d))|)⌉ + 1` and at least `2ℓ + 1`. Being a
/// multiple of `ℓ` keeps the label of `φ(d_m) ∓ mN` equal to `d_m`.
pub fn kz_spacing(params: &KlrParams, d: &[Residue]) -> BigInt {
    let mut m = params.mode.upsilon_k().abs();
    for i in 1..=params.ell as i64 {
        m = m.max(params.p_at(i).upsilon().abs());
    }
    for di in d {
        m = m.max(di.lift(&params.mode).upsilon().abs());
    }
    let ell = BigInt::from(params.ell);
    let floor = BigInt::from(2 * params.ell as i64 + 1);
    let least = (m.ceil() + BigInt::from(1)).max(floor);
    (&least + &ell - BigInt::from(1)) / &ell * &ell
}

/// `a_d^± = (φ(d_1) ∓ N, …, φ(d_n) ∓ nN)`. Every `z_m` is the identity, so
/// the exponents are all zero.
pub fn kz_weight_tuples_with(
    d: &[Residue],
    stability: Stability,
    n_spacing: &BigInt,
    mode: &KMode,
) -> (Vec<ParamNumber>, Vec<i64>) {
    let big = Rat::from(n_spacing.clone());
    let a = d
        .iter()
        .enumerate()
        .map(|(i, di)| {
            let off = &big * &Rat::from_int((i as i64 + 1) * stability.sign());
            &di.lift(mode) - &ParamNumber::rat(off, mode)
        })
        .collect();
    (a, vec![0; d.len()])
}

pub fn kz_weight_tuples(
    d: &[Residue],
    stability: Stability,
    params: &KlrParams,
) -> (Vec<ParamNumber>, Vec<i64>, BigInt) {
    let n_spacing = kz_spacing(params, d);
    let (a, z) = kz_weight_tuples_with(d, stability, &n_spacing, &params.mode);
    (a, z, n_spacing)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiCase {
    Plain,
    Ghost,
    SameLabel,
    Loop,
    PlainSwap,
}

impl XiCase {
    pub fn name(self) -> &'static str {
        match self {
            XiCase::Plain => "plain",
            XiCase::Ghost => "ghost",
            XiCase::SameLabel => "same-label",
            XiCase::Loop => "loop",
            XiCase::PlainSwap => "plain-swap",
        }
    }

    /// Image of the crossing `r_m` as a formula in the completed algebra.
    pub fn formula(self) -> &'static str {
        match self {
            XiCase::Plain => "e(a,z) * 1/(u_m - u_{m+1} + k*l) * theta_m",
            XiCase::Ghost => "e(a,z) * theta_m",
            XiCase::SameLabel => "e(a,z) * 1/(u_{m+1} - u_m - k*l) * (r_m - 1)",
            XiCase::Loop => "e(a,z) * (1 - r_m)",
            XiCase::PlainSwap => "e(a,z) * r_m",
        }
    }
}

/// Classifies the crossing of strands `m` and `m + 1` (1-based).
pub fn xi_case(a: &[ParamNumber], z: &[i64], m: usize, ell: u32) -> Result<XiCase> {
    let n = a.len();
    if z.len() != n {
        return Err(Error::Mismatch("a and z differ in length".into()));
    }
    if m == 0 || m >= n {
        return Err(Error::IndexOutOfRange(format!("m = {m} with n = {n}")));
    }
    let (am, am1) = (&a[m - 1], &a[m]);
    if zeta_exp(z[m - 1], ell) != zeta_exp(z[m], ell) {
        return Ok(XiCase::PlainSwap);
    }
    let kl = am.mode.k().scale(ell as i64);
    let ghost = &(am + &kl) == am1;
    let same = am1 == am;
    Ok(match (ghost, same) {
        (false, false) => XiCase::Plain,
        (true, false) => XiCase::Ghost,
        (false, true) => XiCase::SameLabel,
        (true, true) => XiCase::Loop,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NuCase {
    RedActive,
    RedInactive,
}

impl NuCase {
    pub fn name(self) -> &'static str {
        match self {
            NuCase::RedActive => "red-active",
            NuCase::RedInactive => "red-inactive",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            NuCase::RedActive => "sigma",
            NuCase::RedInactive => "1/(u_1 + p(z_1)) * sigma",
        }
    }
}

/// Whether the rotation meets its red line non-trivially: `a_1 = −p(z_1)`.
pub fn nu_case(a: &[ParamNumber], z: &[i64], params: &KlrParams) -> Result<NuCase> {
    let (Some(a1), Some(&z1)) = (a.first(), z.first()) else {
        return Err(Error::Invalid("nu needs at least one strand".into()));
    };
    Ok(if *a1 == -&params.p_at(z1) {
        NuCase::RedActive
    } else {
        NuCase::RedInactive
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> Rat {
        Rat::new(a, b)
    }

    fn tr() -> KMode {
        KMode::transcendental()
    }

    #[test]
    fn residues() {
        let m = KMode::transcendental();
        assert_eq!(
            sigma_residue(&ParamNumber::zero(&m), 0, 1),
            Residue::of(&ParamNumber::zero(&m), 1)
        );
        let a = ParamNumber::rat(r(3, 2), &m);
        let res = sigma_residue(&a, 1, 2);
        assert_eq!(res.q0(), &r(1, 2));
        assert_eq!(res.to_string(), "1/2");
    }

    #[test]
    fn rational_mode_folds_k() {
        let m = KMode::rational(2, 4);
        let x = ParamNumber::new(r(1, 1), r(3, 1), m);
        assert_eq!(x.q0(), &r(5, 2));
        assert!(x.q1().is_zero());
    }

    #[test]
    fn parse_numbers() {
        let m = tr();
        let x = ParamNumber::parse("1/2 - 3k", &m).unwrap();
        assert_eq!((x.q0().clone(), x.q1().clone()), (r(1, 2), r(-3, 1)));
        assert_eq!(x.to_string(), "1/2 - 3*k");
        let y = ParamNumber::parse("-k", &m).unwrap();
        assert_eq!(y.to_string(), "-k");
        assert!(ParamNumber::parse("2x", &m).is_err());
        assert_eq!("rational:1/3".parse::<KMode>().unwrap(), KMode::rational(1, 3));
    }

    #[test]
    fn quiver_examples() {
        let m = tr();
        let k = m.k();
        let d: BTreeSet<_> = [
            Residue::of(&ParamNumber::zero(&m), 1),
            Residue::of(&(-&k), 1),
        ]
        .into();
        let q = build_quiver(&d, &k, 1);
        assert_eq!(q.arrows.len(), 1);
        assert_eq!(q.arrows[0].0, Residue::of(&ParamNumber::zero(&m), 1));
        assert!(q.is_acyclic());
        assert_eq!(q.class(), QuiverClass::Linear);

        let m = KMode::rational(1, 2);
        let d: BTreeSet<_> = [
            Residue::of(&ParamNumber::zero(&m), 1),
            Residue::of(&ParamNumber::rat(r(1, 2), &m), 1),
        ]
        .into();
        let q = build_quiver(&d, &m.k(), 1);
        assert_eq!(q.arrows.len(), 2);
        assert_eq!(q.cycle_lengths(), vec![2]);
        assert!(q.satisfies_structure());

        let single: BTreeSet<_> = [Residue::of(&ParamNumber::zero(&tr()), 1)].into();
        assert!(build_quiver(&single, &tr().k(), 1).arrows.is_empty());
    }

    #[test]
    fn category_o_examples() {
        let m = tr();
        let p = KlrParams::zero_s(1, m.clone());
        let d = category_o_residues(&p, 1);
        let k = m.k();
        let expect: BTreeSet<_> = [-&k, ParamNumber::zero(&m), k.clone()]
            .iter()
            .map(|x| Residue::of(x, 1))
            .collect();
        assert_eq!(d, expect);

        let m0 = KMode::rational(0, 1);
        let p = KlrParams::new(
            2,
            m0.clone(),
            vec![ParamNumber::int(1, &m0), ParamNumber::int(1, &m0)],
        )
        .unwrap();
        assert_eq!(category_o_residues(&p, 3).len(), 1);
    }

    #[test]
    fn loading_examples() {
        let m = tr();
        let p = KlrParams::zero_s(1, m.clone());
        let a = vec![ParamNumber::zero(&m), ParamNumber::int(1, &m)];
        let l = loading_from_pair(&a, &[0, 0], &p, &EpsilonPolicy::Auto).unwrap();
        assert_eq!(l.epsilon, r(1, 4));
        assert_eq!(l.points[0].position, r(1, 4));
        assert_eq!(l.points[1].position, r(3, 2));

        let a = vec![ParamNumber::zero(&m); 2];
        let l = loading_from_pair(&a, &[0, 0], &p, &EpsilonPolicy::Auto).unwrap();
        assert_eq!(l.epsilon, r(1, 4));
        assert_eq!(l.points[0].label, l.points[1].label);
        assert_ne!(l.points[0].position, l.points[1].position);

        let bad = EpsilonPolicy::Fixed(r(1, 1));
        let a = vec![ParamNumber::zero(&m), ParamNumber::int(1, &m)];
        assert!(loading_from_pair(&a, &[0, 0], &p, &bad).is_err());
    }

    #[test]
    fn unsteady_examples() {
        let m = KMode::rational(1, 2);
        let p = KlrParams::zero_s(1, m.clone());
        let red_max = p.red_points()[0].position.clone();
        assert_eq!(red_max, r(-1, 1));

        let far = ParamNumber::rat(&red_max + &r(2, 1), &m);
        let near = ParamNumber::rat(&red_max - &r(1, 1), &m);
        let l = loading_from_pair(&[near.clone(), far], &[0, 0], &p, &EpsilonPolicy::Auto).unwrap();
        let w = is_unsteady(&l, Stability::Positive, RedQuantifier::All).unwrap();
        assert_eq!(w.delta, red_max);
        assert_eq!(w.strands, vec![2]);

        let l = loading_from_pair(&[near.clone(), near], &[0, 0], &p, &EpsilonPolicy::Auto).unwrap();
        assert!(is_unsteady(&l, Stability::Positive, RedQuantifier::All).is_none());

        let empty = loading_from_pair(&[], &[], &p, &EpsilonPolicy::Auto).unwrap();
        assert!(is_unsteady(&empty, Stability::Positive, RedQuantifier::All).is_none());
        assert!(is_unsteady(&empty, Stability::Negative, RedQuantifier::All).is_none());
    }

    fn verdicts(a: &[ParamNumber], p: &KlrParams, policy: &EpsilonPolicy) -> [bool; 2] {
        let z = vec![0; a.len()];
        let l = loading_from_pair(a, &z, p, policy).unwrap();
        [Stability::Positive, Stability::Negative].map(|s| is_unsteady(&l, s, RedQuantifier::All).is_some())
    }

    #[test]
    fn auto_epsilon_can_cross_the_k_window() {
        let m = KMode::rational(1, 2);
        let p = KlrParams::new(1, m.clone(), vec![ParamNumber::int(-11, &m)]).unwrap();
        let x = |a: i64, b: i64| ParamNumber::rat(r(a, b), &m);
        let a = [x(10, 1), x(10, 1), x(15, 2)];
        let b = [x(10, 1), x(15, 2), x(10, 1)];
        assert_eq!(verdicts(&a, &p, &EpsilonPolicy::Auto), [false, true]);
        assert_eq!(verdicts(&b, &p, &EpsilonPolicy::Auto), [true, true]);
        assert_eq!(
            verdicts(&a, &p, &EpsilonPolicy::Inert),
            verdicts(&b, &p, &EpsilonPolicy::Inert)
        );
    }

    #[test]
    fn auto_epsilon_can_cross_a_red_point() {
        let m = tr();
        let p = KlrParams::new(1, m.clone(), vec![ParamNumber::int(-2, &m)]).unwrap();
        let a = [ParamNumber::int(3, &m), ParamNumber::int(-1, &m)];
        let b = [ParamNumber::int(-1, &m), ParamNumber::int(3, &m)];
        assert_ne!(verdicts(&a, &p, &EpsilonPolicy::Auto), verdicts(&b, &p, &EpsilonPolicy::Auto));
        assert_eq!(
            verdicts(&a, &p, &EpsilonPolicy::Inert),
            verdicts(&b, &p, &EpsilonPolicy::Inert)
        );
    }

    #[test]
    fn resonant_pair_depends_on_order_for_any_epsilon() {
        let m = KMode::rational(1, 2);
        let p = KlrParams::new(1, m.clone(), vec![ParamNumber::int(-3, &m)]).unwrap();
        let x = |a: i64, b: i64| ParamNumber::rat(r(a, b), &m);
        let a = [x(2, 1), x(-2, 1), x(5, 2)];
        let b = [x(5, 2), x(2, 1), x(-2, 1)];
        for policy in [EpsilonPolicy::Auto, EpsilonPolicy::Inert, EpsilonPolicy::Fixed(r(1, 1000))] {
            assert_eq!(verdicts(&a, &p, &policy), [true, true]);
            assert_eq!(verdicts(&b, &p, &policy), [false, true]);
        }
    }

    #[test]
    fn inert_epsilon_is_admissible() {
        let m = KMode::rational(1, 2);
        let p = KlrParams::zero_s(1, m.clone());
        let a = [ParamNumber::int(0, &m), ParamNumber::int(4, &m)];
        assert_eq!(auto_epsilon(&a), r(1, 1));
        // Red point at -1, |Υk| = 1/2: the smallest distance is 1/2.
        assert_eq!(inert_epsilon(&a, &p), r(1, 8));
        assert_eq!(inert_epsilon(&[], &p), r(1, 4));
    }

    #[test]
    fn negative_stability_mirrors() {
        let m = KMode::rational(1, 3);
        let p = KlrParams::zero_s(1, m.clone());
        let low = ParamNumber::int(-5, &m);
        let high = ParamNumber::int(0, &m);
        let l = loading_from_pair(&[low, high], &[0, 0], &p, &EpsilonPolicy::Auto).unwrap();
        let w = is_unsteady(&l, Stability::Negative, RedQuantifier::All).unwrap();
        assert_eq!(w.strands, vec![1]);
    }

    #[test]
    fn multipartition_examples() {
        let m = KMode::rational(1, 2);
        let p = KlrParams::zero_s(1, m.clone());
        let xi: Multipartition = "2".parse().unwrap();
        let (a, z, _) = multipartition_loading(&xi, 2, &p).unwrap();
        assert_eq!(a, vec![ParamNumber::int(1, &m), ParamNumber::rat(r(3, 2), &m)]);
        assert_eq!(z, vec![0, 0]);

        let p2 = KlrParams::zero_s(2, m.clone());
        let xi: Multipartition = "1|1".parse().unwrap();
        let (a, z, _) = multipartition_loading(&xi, 2, &p2).unwrap();
        assert_eq!(a, vec![ParamNumber::int(1, &m), ParamNumber::int(2, &m)]);
        assert_eq!(z, vec![zeta_exp(-1, 2), zeta_exp(-2, 2)]);

        let empty: Multipartition = "|".parse().unwrap();
        let (a, _, l) = multipartition_loading(&empty, 2, &p2).unwrap();
        assert!(a.is_empty() && l.points.is_empty());
    }

    #[test]
    fn standard_tableaux_counts() {
        // hook length formula: f^(2,1) = 2, f^(3,1) = 3, f^(2,2) = 2.
        let count = |s: &str| s.parse::<Multipartition>().unwrap().standard_tableaux().len();
        assert_eq!(count("2,1"), 2);
        assert_eq!(count("3,1"), 3);
        assert_eq!(count("2,2"), 2);
        // ((1),(1)): two orderings of independent boxes.
        assert_eq!(count("1|1"), 2);
        assert_eq!(count("2|1"), 3);
        assert!("1,2".parse::<Multipartition>().is_err());
    }

    #[test]
    fn kz_examples() {
        let m = KMode::rational(1, 2);
        let d = vec![Residue::of(&ParamNumber::zero(&m), 1)];
        let (a, z) = kz_weight_tuples_with(&d, Stability::Negative, &BigInt::from(5), &m);
        assert_eq!(a, vec![ParamNumber::int(5, &m)]);
        assert_eq!(z, vec![0]);
        let (a, _) = kz_weight_tuples_with(&d, Stability::Positive, &BigInt::from(5), &m);
        assert_eq!(a, vec![ParamNumber::int(-5, &m)]);

        let p = KlrParams::zero_s(2, m.clone());
        let d2 = vec![
            Residue::of(&ParamNumber::rat(r(3, 2), &m), 2),
            Residue::of(&ParamNumber::zero(&m), 2),
        ];
        for st in [Stability::Positive, Stability::Negative] {
            let (a, _, big) = kz_weight_tuples(&d2, st, &p);
            assert_eq!(big, BigInt::from(6));
            assert!((&a[1] - &a[0]).upsilon().abs() > Rat::from_int(2));
            let labels: Vec<_> = a.iter().map(|x| sigma_residue(x, 0, 2)).collect();
            assert_eq!(labels, d2);
        }
    }

    #[test]
    fn lift_lands_in_window() {
        let m = KMode::Transcendental { upsilon_k: r(7, 3) };
        let d = Residue::of(&ParamNumber::new(r(1, 2), r(2, 1), m.clone()), 3);
        let phi = d.lift(&m);
        assert_eq!(Residue::of(&phi, 3), d);
        let u = phi.upsilon();
        assert!(!u.is_negative() && u < Rat::from_int(3));
    }

    #[test]
    fn xi_cases() {
        let m = tr();
        let k = m.k();
        let a0 = ParamNumber::int(0, &m);
        let a1 = ParamNumber::rat(r(1, 3), &m);
        assert_eq!(xi_case(&[a0.clone(), a1], &[0, 0], 1, 1).unwrap(), XiCase::Plain);
        let g = &a0 + &k;
        assert_eq!(xi_case(&[a0.clone(), g], &[0, 0], 1, 1).unwrap(), XiCase::Ghost);
        assert_eq!(
            xi_case(&[a0.clone(), a0.clone()], &[0, 0], 1, 1).unwrap(),
            XiCase::SameLabel
        );
        assert_eq!(
            xi_case(&[a0.clone(), a0.clone()], &[0, 1], 1, 2).unwrap(),
            XiCase::PlainSwap
        );
        let m0 = KMode::rational(0, 1);
        let b = ParamNumber::int(2, &m0);
        assert_eq!(xi_case(&[b.clone(), b], &[0, 0], 1, 1).unwrap(), XiCase::Loop);
        assert!(xi_case(std::slice::from_ref(&a0), &[0], 1, 1).is_err());
    }

    #[test]
    fn nu_cases() {
        let m = KMode::rational(1, 2);
        let p = KlrParams::new(2, m.clone(), vec![ParamNumber::int(1, &m), ParamNumber::int(1, &m)])
            .unwrap();
        // p(ζ^1) = s_1 + 1 = 2.
        let a = vec![ParamNumber::int(-2, &m)];
        assert_eq!(nu_case(&a, &[1], &p).unwrap(), NuCase::RedActive);
        assert_eq!(nu_case(&a, &[0], &p).unwrap(), NuCase::RedInactive);
        let red = p.red_points();
        assert_eq!(red[0].position, r(-2, 1));
        assert_eq!(red[0].label, Residue::of(&ParamNumber::int(-1, &m), 2));
    }
}
