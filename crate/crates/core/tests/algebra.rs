use cherednik::parse::parse_aword;
use cherednik::pbw::{CherednikAlgebra, HElem};
use cherednik::presentation::{AGen, AWord, Presentation};
use cherednik::rep::{basis_monomials, PolyRep};
use cherednik::scalars::{CycScalar, Var};
use cherednik::wreath::GroupElem;
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Factor {
    X(usize),
    Y(usize),
    T(usize),
    S(usize),
}

#[derive(Clone, Debug)]
enum Coeff {
    Int(i64),
    Param(usize),
}

type TermSpec = (Coeff, Vec<Factor>);

fn factor(n: usize) -> impl Strategy<Value = Factor> {
    let i = 1..=n;
    prop_oneof![
        i.clone().prop_map(Factor::X),
        i.clone().prop_map(Factor::Y),
        i.prop_map(Factor::T),
        (1..n.max(2)).prop_map(Factor::S),
    ]
}

fn coeff() -> impl Strategy<Value = Coeff> {
    prop_oneof![(-3i64..=3).prop_map(Coeff::Int), (0usize..4).prop_map(Coeff::Param)]
}

fn element(n: usize, max_factors: usize) -> impl Strategy<Value = Vec<TermSpec>> {
    prop::collection::vec((coeff(), prop::collection::vec(factor(n), 0..=max_factors)), 1..=2)
}

fn scalar(c: &Coeff, ell: u32) -> CycScalar {
    match c {
        Coeff::Int(v) => CycScalar::from(*v),
        Coeff::Param(0) => CycScalar::hbar(),
        Coeff::Param(1) => CycScalar::k(),
        Coeff::Param(2) => CycScalar::h(0, ell),
        Coeff::Param(_) => CycScalar::zeta_pow(ell, 1),
    }
}

fn build(a: &CherednikAlgebra, spec: &[TermSpec]) -> HElem {
    let (n, ell) = (a.n(), a.ell());
    let mut out = HElem::zero(n, ell);
    for (c, factors) in spec {
        let mut term = a.scalar(scalar(c, ell));
        for f in factors {
            let g = match *f {
                Factor::X(i) => a.x(i).unwrap(),
                Factor::Y(i) => a.y(i).unwrap(),
                Factor::T(i) => a.group(&GroupElem::t(i, n, ell).unwrap()).unwrap(),
                Factor::S(j) if n > 1 => a.group(&GroupElem::transposition(j, j + 1, n, ell).unwrap()).unwrap(),
                Factor::S(_) => a.one(),
            };
            term = a.mul(&term, &g).unwrap();
        }
        out = &out + &term;
    }
    out
}

fn associative(n: usize, ell: u32) -> impl Fn(Vec<TermSpec>, Vec<TermSpec>, Vec<TermSpec>) -> Result<(), TestCaseError> {
    let a = CherednikAlgebra::new(n, ell).unwrap();
    move |p, q, r| {
        let (x, y, z) = (build(&a, &p), build(&a, &q), build(&a, &r));
        let left = a.mul(&a.mul(&x, &y).unwrap(), &z).unwrap();
        let right = a.mul(&x, &a.mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        Ok(())
    }
}

macro_rules! associativity {
    ($name:ident, $n:expr, $ell:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]
            #[test]
            fn $name(p in element($n, 2), q in element($n, 2), r in element($n, 2)) {
                associative($n, $ell)(p, q, r)?;
            }
        }
    };
}

associativity!(associative_l1_n2, 2, 1);
associativity!(associative_l2_n2, 2, 2);
associativity!(associative_l3_n2, 2, 3);
associativity!(associative_l1_n3, 3, 1);
associativity!(associative_l2_n3, 3, 2);

fn xy_only(n: usize) -> impl Strategy<Value = Vec<TermSpec>> {
    let f = (1..=n).prop_flat_map(|i| prop_oneof![Just(Factor::X(i)), Just(Factor::Y(i))]);
    prop::collection::vec((coeff(), prop::collection::vec(f, 1..=3)), 1..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_is_a_filtration(
        (n, ell, p, q) in (1usize..=3, 1u32..=3)
            .prop_flat_map(|(n, ell)| (Just(n), Just(ell), element(n, 3), element(n, 3)))
    ) {
        let a = CherednikAlgebra::new(n, ell).unwrap();
        let (x, y) = (build(&a, &p), build(&a, &q));
        let prod = a.mul(&x, &y).unwrap();
        if let (Some(dx), Some(dy), Some(dp)) = (x.degree(), y.degree(), prod.degree()) {
            prop_assert!(dp <= dx + dy);
        }
    }

    #[test]
    fn commutators_of_polynomials_drop_two_degrees(
        (n, ell, p, q) in (1usize..=3, 1u32..=2)
            .prop_flat_map(|(n, ell)| (Just(n), Just(ell), xy_only(n), xy_only(n)))
    ) {
        let a = CherednikAlgebra::new(n, ell).unwrap();
        let (x, y) = (build(&a, &p), build(&a, &q));
        let c = a.commutator(&x, &y).unwrap();
        if let (Some(dx), Some(dy), Some(dc)) = (x.degree(), y.degree(), c.degree()) {
            prop_assert!(dc + 2 <= dx + dy);
        }
    }

    #[test]
    fn parameters_specialize_multiplicatively(p in element(2, 2), q in element(2, 2), kv in -3i64..=3, hv in -3i64..=3) {
        use cherednik::scalars::{CycElem, ParamAssignment};
        let a = CherednikAlgebra::new(2, 2).unwrap();
        let set = ParamAssignment::new()
            .with(Var::K, CycElem::from_int(kv))
            .with(Var::H(0), CycElem::from_int(hv));
        let (x, y) = (build(&a, &p), build(&a, &q));
        let lhs = a.mul(&x, &y).unwrap().specialize(&set);
        let rhs = a.mul(&x.specialize(&set), &y.specialize(&set)).unwrap().specialize(&set);
        prop_assert_eq!(lhs, rhs);
    }
}

fn aword(n: usize) -> impl Strategy<Value = AWord> {
    let gen = prop_oneof![
        Just(AGen::Sigma),
        Just(AGen::Tau),
        (1..=n as i64).prop_map(AGen::U),
        (1..=n as i64).prop_map(AGen::T),
        (1..n.max(2)).prop_map(move |j| if n > 1 { AGen::Transp(j) } else { AGen::T(1) }),
    ];
    prop::collection::vec(prop::collection::vec(gen, 0..=4), 1..=2).prop_map(|ws| {
        let mut out = AWord::zero();
        for w in ws {
            out = &out + &AWord::word(w);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_text_round_trips(ell in 1u32..=3, w in aword(2)) {
        let p = Presentation::new(2, ell).unwrap();
        let h = p.to_h(&w).unwrap();
        let reparsed = p.to_h(&parse_aword(&h.to_string(), 2, ell).unwrap()).unwrap();
        prop_assert_eq!(&reparsed, &h);
        let again = p.to_h(&parse_aword(&reparsed.to_string(), 2, ell).unwrap()).unwrap();
        prop_assert_eq!(again.to_string(), h.to_string());
    }

    #[test]
    fn word_text_round_trips(ell in 1u32..=3, w in aword(3)) {
        let printed = w.to_string();
        let reparsed = parse_aword(&printed, 3, ell).unwrap();
        prop_assert_eq!(reparsed, w.normalized());
    }

    #[test]
    fn representation_is_a_module(ell in 1u32..=2, v in aword(2), w in aword(2), idx in 0usize..6) {
        let rep = PolyRep::new(2, ell).unwrap();
        let basis = basis_monomials(2, ell, 1);
        let f = &basis[idx % basis.len()];
        let together = rep.act_word(&(&v * &w), f).unwrap();
        let stepwise = rep.act_word(&v, &rep.act_word(&w, f).unwrap()).unwrap();
        prop_assert_eq!(together, stepwise);
    }

    #[test]
    fn representation_factors_through_h(ell in 1u32..=2, w in aword(2), idx in 0usize..6) {
        let p = Presentation::new(2, ell).unwrap();
        let rep = PolyRep::new(2, ell).unwrap();
        let basis = basis_monomials(2, ell, 1);
        let f = &basis[idx % basis.len()];
        let via_h = rep.act_word(&p.h_to_word(&p.to_h(&w).unwrap()).unwrap(), f).unwrap();
        prop_assert_eq!(via_h, rep.act_word(&w, f).unwrap());
    }
}
