//! `cherednik`: normal forms, polynomial actions, relation suites and the
//! loading combinatorics from the command line.
//!
//! Exit codes: 0 on success, 1 when a check finds a nonzero residual, 2 on
//! usage or parse errors.

mod diagram;

use std::collections::BTreeSet;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cherednik::klr::{
    build_quiver, category_o_residues, is_unsteady, kz_weight_tuples, loading_from_pair, multipartition_loading,
    EpsilonPolicy, KMode, KlrParams, Loading, Multipartition, ParamNumber, QuiverClass, RedQuantifier, Residue,
    Stability,
};
use cherednik::parse::{parse_assignment, parse_aword, parse_poly};
use cherednik::presentation::Presentation;
use cherednik::rep::PolyRep;
use cherednik::scalars::{ParamAssignment, Rat};
use cherednik::suites::{self, OperatorOptions, SuiteReport};
use cherednik::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "cherednik", version, about = "Exact computations in the rational Cherednik algebra of G(l,1,n)")]
struct Cli {
    /// Order of the cyclic group.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    ell: u32,

    /// Rank.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,

    /// Parameter specialization, e.g. `k=1/2,h0=zeta,hbar=1`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    set: Option<String>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// `rational:a/e`, `transcendental` or `transcendental:<value of Υ(k)>`.
    #[arg(long = "k-mode", global = true, default_value = "transcendental")]
    k_mode: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical PBW form of an expression in the generators of A.
    NormalForm { expr: String },
    /// Action of an expression on a polynomial in U and T.
    ActPoly {
        expr: String,
        #[arg(default_value = "1")]
        poly: String,
    },
    /// Run a named check suite.
    Check(CheckArgs),
    /// The quiver on a residue set.
    Quiver {
        /// Semicolon-separated residues, e.g. `0;1/2;k`. Defaults to the
        /// category O set built from `--s` and `--n`.
        #[arg(long, allow_hyphen_values = true)]
        residues: Option<String>,
        #[command(flatten)]
        s: SArg,
    },
    /// The loading of an eigenvalue tuple.
    Loading {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        s: SArg,
        #[arg(long, default_value = "auto")]
        epsilon: String,
    },
    /// KZ weight tuples of a residue sequence.
    KzWeights {
        /// Semicolon-separated residues `d_1;…;d_n`.
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        stability: String,
        #[command(flatten)]
        s: SArg,
    },
    /// Unsteadiness of a loading, given either as a tuple or a multipartition.
    Steady {
        #[command(flatten)]
        pair: PairArgs,
        /// Multipartition such as `2,1|1`; needs `--k-mode rational:1/e`.
        #[arg(long, conflicts_with_all = ["a", "z"])]
        multipartition: Option<String>,
        #[command(flatten)]
        s: SArg,
        #[arg(long, value_enum, default_value_t = Quantifier::All)]
        quantifier: Quantifier,
        #[arg(long, default_value = "auto")]
        epsilon: String,
    },
    /// ASCII strand picture of each word in an expression.
    RenderDiagram { expr: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Relations,
    Operators,
    Euler,
    Push1,
    Roundtrip,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Largest U-degree of the test monomials for `operators`.
    #[arg(long, default_value_t = 3)]
    max_degree: u16,
    /// Number of random words for `operators`.
    #[arg(long, default_value_t = 100)]
    words: usize,
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Semicolon-separated entries of `a`, e.g. `0;1/2 + k`.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Comma-separated exponents of `ζ`; defaults to all zero.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
}

#[derive(Args, Debug)]
struct SArg {
    /// Semicolon-separated `s_1;…;s_ℓ`; defaults to all zero.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Quantifier {
    All,
    Some,
}

impl From<Quantifier> for RedQuantifier {
    fn from(q: Quantifier) -> Self {
        match q {
            Quantifier::All => RedQuantifier::All,
            Quantifier::Some => RedQuantifier::Some,
        }
    }
}

/// What a command produced: text, JSON, and whether every check passed.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

struct Session {
    ell: u32,
    n: usize,
    set: Option<ParamAssignment>,
    mode: KMode,
}

impl Session {
    fn from_cli(cli: &Cli) -> Result<Self> {
        let set = cli.set.as_deref().map(|s| parse_assignment(s, cli.ell)).transpose()?;
        Ok(Session {
            ell: cli.ell,
            n: cli.n as usize,
            set,
            mode: cli.k_mode.parse()?,
        })
    }

    fn numbers(&self, src: &str) -> Result<Vec<ParamNumber>> {
        src.split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| ParamNumber::parse(s, &self.mode))
            .collect()
    }

    fn params(&self, s: &SArg) -> Result<KlrParams> {
        match &s.s {
            None => Ok(KlrParams::zero_s(self.ell, self.mode.clone())),
            Some(src) => KlrParams::new(self.ell, self.mode.clone(), self.numbers(src)?),
        }
    }

    fn pair(&self, p: &PairArgs) -> Result<(Vec<ParamNumber>, Vec<i64>)> {
        let a = self.numbers(p.a.as_deref().ok_or_else(|| Error::Invalid("--a is required".into()))?)?;
        let z = match &p.z {
            None => vec![0; a.len()],
            Some(src) => src
                .split(',')
                .map(|t| {
                    t.trim().parse::<i64>().map_err(|e| Error::Parse {
                        pos: 0,
                        msg: format!("bad exponent {t:?}: {e}"),
                    })
                })
                .collect::<Result<_>>()?,
        };
        Ok((a, z))
    }

    fn epsilon(&self, src: &str) -> Result<EpsilonPolicy> {
        match src {
            "auto" => Ok(EpsilonPolicy::Auto),
            "inert" => Ok(EpsilonPolicy::Inert),
            r => Ok(EpsilonPolicy::Fixed(r.parse::<Rat>()?)),
        }
    }
}

fn normal_form(s: &Session, expr: &str) -> Result<Output> {
    let p = Presentation::new(s.n, s.ell)?;
    let mut h = p.to_h(&parse_aword(expr, s.n, s.ell)?)?;
    if let Some(a) = &s.set {
        h = h.specialize(a);
    }
    let text = h.to_string();
    let json = json!({ "input": expr, "normal_form": text, "terms": h.to_json() });
    Ok(Output::ok(text, json))
}

fn act_poly(s: &Session, expr: &str, poly: &str) -> Result<Output> {
    let rep = PolyRep::new(s.n, s.ell)?;
    let w = parse_aword(expr, s.n, s.ell)?;
    let f = parse_poly(poly, s.n, s.ell)?;
    let mut g = rep.act_word(&w, &f)?;
    if let Some(a) = &s.set {
        g = g.specialize(a);
    }
    let text = g.to_string();
    let json = json!({ "word": expr, "poly": poly, "result": text });
    Ok(Output::ok(text, json))
}

fn check(s: &Session, args: &CheckArgs) -> Result<Output> {
    let report: SuiteReport = match args.suite {
        Suite::Push1 => suites::push1(s.ell)?,
        suite => {
            let p = Presentation::new(s.n, s.ell)?;
            match suite {
                Suite::Relations => suites::relations(&p, s.set.as_ref())?,
                Suite::Roundtrip => suites::roundtrip(&p)?,
                Suite::Euler => suites::euler(&p)?,
                Suite::Operators => {
                    let opts = OperatorOptions {
                        max_degree: args.max_degree,
                        random_words: args.words,
                        seed: args.seed,
                        ..OperatorOptions::default()
                    };
                    suites::operators(&p, &opts)?
                }
                Suite::Push1 => unreachable!(),
            }
        }
    };
    Ok(Output {
        text: report.to_text().trim_end().to_string(),
        json: report.to_json(),
        ok: report.passed(),
    })
}

fn residue_list(d: &BTreeSet<Residue>) -> Vec<String> {
    d.iter().map(|r| r.to_string()).collect()
}

fn quiver(s: &Session, residues: Option<&str>, sarg: &SArg) -> Result<Output> {
    let params = s.params(sarg)?;
    let d: BTreeSet<Residue> = match residues {
        Some(src) => s.numbers(src)?.iter().map(|a| Residue::of(a, s.ell)).collect(),
        None => category_o_residues(&params, s.n),
    };
    let q = build_quiver(&d, &params.k(), s.ell);
    let class = match q.class() {
        QuiverClass::ECycles { e } => format!("subgraph of a union of {e}-cycles"),
        QuiverClass::Linear => "subgraph of a union of linear quivers".to_string(),
    };
    let arrows: Vec<String> = q.arrows.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
    let mut text = format!("vertices: {}\n", residue_list(&d).join(", "));
    text += &format!("arrows: {}\n", if arrows.is_empty() { "none".into() } else { arrows.join(", ") });
    text += &format!("class: {class}\n");
    text += &format!("cycle lengths: {:?}\n", q.cycle_lengths());
    text += &format!("acyclic: {}\nstructure holds: {}", q.is_acyclic(), q.satisfies_structure());
    let json = json!({
        "vertices": residue_list(&d),
        "arrows": q.arrows.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect::<Vec<_>>(),
        "class": class,
        "cycle_lengths": q.cycle_lengths(),
        "acyclic": q.is_acyclic(),
        "structure_holds": q.satisfies_structure(),
    });
    Ok(Output {
        text,
        json,
        ok: true,
    })
}

fn loading_json(l: &Loading) -> Value {
    json!({
        "epsilon": l.epsilon.to_string(),
        "upsilon_k": l.upsilon_k.to_string(),
        "points": l.points.iter().enumerate().map(|(i, p)| json!({
            "strand": i + 1, "position": p.position.to_string(), "label": p.label.to_string(),
        })).collect::<Vec<_>>(),
        "red": l.red.iter().map(|r| json!({
            "index": r.index, "position": r.position.to_string(), "label": r.label.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn loading_text(l: &Loading) -> String {
    let mut out = format!("epsilon: {}\nupsilon(k): {}\n", l.epsilon, l.upsilon_k);
    for (i, p) in l.points.iter().enumerate() {
        out += &format!("strand {}: {} label {}\n", i + 1, p.position, p.label);
    }
    for r in &l.red {
        out += &format!("red {}: {} label {}\n", r.index, r.position, r.label);
    }
    out.trim_end().to_string()
}

fn loading(s: &Session, pair: &PairArgs, sarg: &SArg, eps: &str) -> Result<Output> {
    let (a, z) = s.pair(pair)?;
    let l = loading_from_pair(&a, &z, &s.params(sarg)?, &s.epsilon(eps)?)?;
    Ok(Output::ok(loading_text(&l), loading_json(&l)))
}

fn kz_weights(s: &Session, d: &str, stability: &str, sarg: &SArg) -> Result<Output> {
    let params = s.params(sarg)?;
    let d: Vec<Residue> = s.numbers(d)?.iter().map(|a| Residue::of(a, s.ell)).collect();
    let stability: Stability = stability.parse()?;
    let (a, z, big) = kz_weight_tuples(&d, stability, &params);
    let shown: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    let text = format!("N: {big}\na: ({})\nz: {z:?}", shown.join(", "));
    let json = json!({ "N": big.to_string(), "a": shown, "z": z });
    Ok(Output::ok(text, json))
}

fn steady(
    s: &Session,
    pair: &PairArgs,
    multipartition: Option<&str>,
    sarg: &SArg,
    quantifier: Quantifier,
    eps: &str,
) -> Result<Output> {
    let params = s.params(sarg)?;
    let l = match multipartition {
        Some(src) => {
            let xi: Multipartition = src.parse()?;
            let e = match &s.mode {
                KMode::Rational(k) if k.numer() == &1.into() => k.denom().to_string().parse::<i64>().ok(),
                _ => None,
            }
            .ok_or_else(|| Error::Invalid("multipartition loadings need --k-mode rational:1/e".into()))?;
            multipartition_loading(&xi, e, &params)?.2
        }
        None => {
            let (a, z) = s.pair(pair)?;
            loading_from_pair(&a, &z, &params, &s.epsilon(eps)?)?
        }
    };
    let mut text = loading_text(&l);
    let mut verdicts = Vec::new();
    for st in [Stability::Positive, Stability::Negative] {
        let w = is_unsteady(&l, st, quantifier.into());
        let sign = if st == Stability::Positive { "+" } else { "-" };
        text += &match &w {
            Some(w) => format!("\n{sign}: unsteady, delta {} separates strands {:?}", w.delta, w.strands),
            None => format!("\n{sign}: steady"),
        };
        verdicts.push(json!({
            "stability": sign,
            "unsteady": w.is_some(),
            "delta": w.as_ref().map(|w| w.delta.to_string()),
            "strands": w.as_ref().map(|w| w.strands.clone()),
        }));
    }
    let json = json!({ "loading": loading_json(&l), "verdicts": verdicts });
    Ok(Output::ok(text, json))
}

fn render(s: &Session, expr: &str) -> Result<Output> {
    let w = parse_aword(expr, s.n, s.ell)?;
    let text = diagram::render(&w, s.n);
    let json = json!({ "input": expr, "diagram": text });
    Ok(Output::ok(text, json))
}

fn run(cli: &Cli) -> Result<Output> {
    let s = Session::from_cli(cli)?;
    match &cli.command {
        Command::NormalForm { expr } => normal_form(&s, expr),
        Command::ActPoly { expr, poly } => act_poly(&s, expr, poly),
        Command::Check(args) => check(&s, args),
        Command::Quiver { residues, s: sarg } => quiver(&s, residues.as_deref(), sarg),
        Command::Loading { pair, s: sarg, epsilon } => loading(&s, pair, sarg, epsilon),
        Command::KzWeights { d, stability, s: sarg } => kz_weights(&s, d, stability, sarg),
        Command::Steady {
            pair,
            multipartition,
            s: sarg,
            quantifier,
            epsilon,
        } => steady(&s, pair, multipartition.as_deref(), sarg, *quantifier, epsilon),
        Command::RenderDiagram { expr } => render(&s, expr),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json")),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
