//! Named check suites shared by the command line and the acceptance tests.
//! Each produces a flat list of pass/fail entries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::parse::parse_aword;
use crate::pbw::HElem;
use crate::presentation::{AGen, AWord, Presentation};
use crate::rep::{basis_monomials, push1_check, PolyRep, PolyUT};
use crate::scalars::{CycScalar, ParamAssignment};
use crate::wreath::GroupElem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteEntry {
    pub name: String,
    pub pass: bool,
    /// Residual or mismatch, empty when passing.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: usize,
    pub ell: u32,
    pub entries: Vec<SuiteEntry>,
    /// Families with no instance for this shape.
    pub skipped: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str, n: usize, ell: u32) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            n,
            ell,
            entries: Vec::new(),
            skipped: Vec::new(),
        }
    }

    fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.entries.push(SuiteEntry {
            name: name.into(),
            pass,
            detail: if pass { String::new() } else { detail.into() },
        });
    }

    fn push_eq<T: PartialEq + std::fmt::Display>(&mut self, name: impl Into<String>, actual: &T, expected: &T) {
        let pass = actual == expected;
        self.push(name, pass, format!("got {actual}, expected {expected}"));
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["pass"] = serde_json::Value::Bool(self.passed());
        v
    }

    /// One line per entry, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            if e.pass {
                out.push_str(&format!("PASS {}\n", e.name));
            } else {
                out.push_str(&format!("FAIL {}: {}\n", e.name, e.detail));
            }
        }
        for s in &self.skipped {
            out.push_str(&format!("SKIP {s}\n"));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} (n={}, ell={}): {} checked, {} failed\n",
            self.suite,
            self.n,
            self.ell,
            self.entries.len(),
            failed
        ));
        out
    }
}

fn specialize_h(h: &HElem, set: Option<&ParamAssignment>) -> HElem {
    match set {
        Some(a) => h.specialize(a),
        None => h.clone(),
    }
}

/// Every relation of A pushed through to H.
pub fn relations(p: &Presentation, set: Option<&ParamAssignment>) -> Result<SuiteReport> {
    let rep = p.check_all()?;
    let mut out = SuiteReport::new("relations", p.n(), p.ell());
    for e in rep.entries {
        let residual = specialize_h(&e.residual, set);
        let name = format!("{}{:?}", e.id.name(), e.indices);
        out.push(name, residual.is_zero(), format!("residual {residual}"));
    }
    out.skipped = rep.skipped.iter().map(|id| id.name().to_string()).collect();
    Ok(out)
}

/// The isomorphism round trip: images of `x_i`, `y_i`, both forms of `u_i`,
/// the commutators of the images, and text stability of their normal forms.
pub fn roundtrip(p: &Presentation) -> Result<SuiteReport> {
    let (n, ell) = (p.n(), p.ell());
    let a = p.algebra();
    let mut out = SuiteReport::new("roundtrip", n, ell);
    let xs = (1..=n).map(|i| p.x_image(i)).collect::<Result<Vec<_>>>()?;
    let ys = (1..=n).map(|i| p.y_image(i)).collect::<Result<Vec<_>>>()?;
    for i in 1..=n {
        out.push_eq(format!("x_image({i})"), &xs[i - 1], &a.x(i)?);
        out.push_eq(format!("y_image({i})"), &ys[i - 1], &a.y(i)?);
        out.push_eq(format!("u_forms({i})"), &p.u_h(i)?, &p.u_from_yx(i)?);
    }
    for i in 1..=n {
        for j in 1..=n {
            let c = a.commutator(&xs[i - 1], &ys[j - 1])?;
            let expected = HElem::from_group_alg(a.table().get(i, j));
            out.push_eq(format!("commutator(x{i},y{j})"), &c, &expected);
            let text = c.to_string();
            let reparsed = p.to_h(&parse_aword(&text, n, ell)?)?;
            out.push_eq(format!("text(x{i},y{j})"), &reparsed, &c);
        }
    }
    Ok(out)
}

/// `[eu, x_i] = hbar x_i`, `[eu, y_i] = -hbar y_i` and `[eu, g] = 0`.
pub fn euler(p: &Presentation) -> Result<SuiteReport> {
    let (n, ell) = (p.n(), p.ell());
    let a = p.algebra();
    let eu = p.euler();
    let hbar = CycScalar::hbar();
    let mut out = SuiteReport::new("euler", n, ell);
    for i in 1..=n {
        let x = a.x(i)?;
        let y = a.y(i)?;
        out.push_eq(format!("[eu,x{i}]"), &a.commutator(&eu, &x)?, &x.scale(&hbar));
        out.push_eq(format!("[eu,y{i}]"), &a.commutator(&eu, &y)?, &y.scale(&-&hbar));
    }
    let zero = HElem::zero(n, ell);
    for g in GroupElem::enumerate(n, ell) {
        let c = a.commutator(&eu, &a.group(&g)?)?;
        out.push_eq(format!("[eu,{g}]"), &c, &zero);
    }
    Ok(out)
}

/// Identity comparing the shift element with the polynomial in the `s_m`.
pub fn push1(ell: u32) -> Result<SuiteReport> {
    let r = push1_check(ell)?;
    let mut out = SuiteReport::new("push1", 1, ell);
    out.push_eq("product", &r.product, &r.target);
    out.push_eq("symmetrized sigma^l.1", &r.sigma_route, &r.target);
    Ok(out)
}

/// Options for the operator suite.
#[derive(Clone, Debug)]
pub struct OperatorOptions {
    pub max_degree: u16,
    pub random_words: usize,
    pub max_word_len: usize,
    pub seed: u64,
}

impl Default for OperatorOptions {
    fn default() -> Self {
        OperatorOptions {
            max_degree: 3,
            random_words: 100,
            max_word_len: 5,
            seed: 0x5eed,
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, len: usize) -> AWord {
    let gens: Vec<AGen> = (0..len)
        .map(|_| {
            let idx = rng.gen_range(1..=n as i64);
            match rng.gen_range(0..5) {
                0 => AGen::Sigma,
                1 => AGen::Tau,
                2 => AGen::U(idx),
                3 => AGen::T(idx),
                _ if n > 1 => AGen::Transp(rng.gen_range(1..n)),
                _ => AGen::T(idx),
            }
        })
        .collect();
    AWord::word(gens)
}

/// The polynomial representation against the relations, against evaluation
/// through H, and the freeness of the `u`-action on the unit.
pub fn operators(p: &Presentation, opts: &OperatorOptions) -> Result<SuiteReport> {
    let (n, ell) = (p.n(), p.ell());
    let rep = PolyRep::with_convention(n, ell, p.convention())?;
    let mut out = SuiteReport::new("operators", n, ell);

    let basis = basis_monomials(n, ell, opts.max_degree);
    let relations = p.relations();
    let results: Vec<Result<Option<String>>> = relations
        .par_iter()
        .map(|r| {
            for f in &basis {
                let res = rep.relation_residual(r, f)?;
                if !res.is_zero() {
                    return Ok(Some(format!("on {f}: {res}")));
                }
            }
            Ok(None)
        })
        .collect();
    for (r, res) in relations.iter().zip(results) {
        let name = format!("{}{:?}", r.id.name(), r.indices);
        match res? {
            None => out.push(name, true, ""),
            Some(d) => out.push(name, false, d),
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((n as u64) << 8) ^ ell as u64);
    let linear = basis_monomials(n, ell, 1);
    let cases: Vec<(AWord, PolyUT)> = (0..opts.random_words)
        .map(|_| {
            let len = rng.gen_range(1..=opts.max_word_len);
            let w = random_word(&mut rng, n, len);
            let f = linear[rng.gen_range(0..linear.len())].clone();
            (w, f)
        })
        .collect();
    let routes: Vec<Result<(PolyUT, PolyUT)>> = cases
        .par_iter()
        .map(|(w, f)| {
            let direct = rep.act_word(w, f)?;
            let via_h = rep.act_word(&p.h_to_word(&p.to_h(w)?)?, f)?;
            Ok((direct, via_h))
        })
        .collect();
    for ((w, f), r) in cases.iter().zip(routes) {
        let (direct, via_h) = r?;
        out.push_eq(format!("route {w} on {f}"), &via_h, &direct);
    }

    let one = PolyUT::one(n, ell);
    for f in basis_monomials(n, ell, opts.max_degree) {
        let ((alpha, tors), _) = f.terms().next().expect("monomial");
        if tors.iter().any(|&t| t != 0) {
            continue;
        }
        let mut w = AWord::one();
        for (i, &e) in alpha.iter().enumerate() {
            w = &w * &AWord::u(i as i64 + 1).pow(e as u32);
        }
        out.push_eq(format!("free {w}"), &rep.act_word(&w, &one)?, &f);
    }
    Ok(out)
}
