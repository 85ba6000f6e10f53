use std::collections::BTreeSet;

use cherednik::klr::{
    build_quiver, category_o_residues, is_unsteady, kz_weight_tuples, loading_from_pair, sigma_residue, xi_case,
    EpsilonPolicy, KMode, KlrParams, ParamNumber, RedQuantifier, Residue, Stability,
};
use cherednik::scalars::Rat;
use proptest::prelude::*;

fn mode() -> impl Strategy<Value = KMode> {
    prop_oneof![
        (1i64..=3, 2i64..=5).prop_map(|(a, e)| KMode::rational(a, e)),
        (-2i64..=2, 1i64..=3).prop_map(|(a, b)| KMode::Transcendental {
            upsilon_k: Rat::new(a, b)
        }),
    ]
}

fn number(m: &KMode) -> impl Strategy<Value = ParamNumber> {
    let m = m.clone();
    (-12i64..=12, -3i64..=3).prop_map(move |(a, b)| ParamNumber::new(Rat::new(a, 2), Rat::from_int(b), m.clone()))
}

fn setup() -> impl Strategy<Value = (KlrParams, Vec<ParamNumber>, Vec<i64>)> {
    (mode(), 1u32..=3, 1usize..=5).prop_flat_map(|(m, ell, n)| {
        let s = prop::collection::vec(number(&m), ell as usize);
        let a = prop::collection::vec(number(&m), n);
        let z = prop::collection::vec(0..ell as i64, n);
        (Just(m), Just(ell), s, a, z).prop_map(|(m, ell, s, a, z)| (KlrParams::new(ell, m, s).unwrap(), a, z))
    })
}

fn verdicts(a: &[ParamNumber], z: &[i64], params: &KlrParams, policy: &EpsilonPolicy) -> Vec<bool> {
    let l = loading_from_pair(a, z, params, policy).unwrap();
    let mut out = Vec::new();
    for s in [Stability::Positive, Stability::Negative] {
        for q in [RedQuantifier::All, RedQuantifier::Some] {
            out.push(is_unsteady(&l, s, q).is_some());
        }
    }
    out
}

fn resonant(a: &[ParamNumber], m: &KMode) -> bool {
    let g = m.upsilon_k().abs();
    !g.is_zero() && a.iter().any(|x| a.iter().any(|y| x.upsilon() - y.upsilon() == g))
}

proptest! {
    #[test]
    fn sigma_is_additive((params, a, z) in setup(), m2 in -5i64..=5) {
        let ell = params.ell;
        let b = &a[0];
        let lhs = sigma_residue(&(b + &a[a.len() - 1]), z[0] + m2, ell);
        let rhs = &sigma_residue(b, z[0], ell) + &sigma_residue(&a[a.len() - 1], m2, ell);
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(sigma_residue(b, z[0] + ell as i64, ell), sigma_residue(b, z[0], ell));
    }

    #[test]
    fn loading_positions_are_distinct((params, a, z) in setup()) {
        for policy in [EpsilonPolicy::Auto, EpsilonPolicy::Inert] {
            let l = loading_from_pair(&a, &z, &params, &policy).unwrap();
            let pos: BTreeSet<_> = l.points.iter().map(|p| p.position.clone()).collect();
            prop_assert_eq!(pos.len(), a.len());
            prop_assert!(l.epsilon.clone() * Rat::from_int(a.len() as i64 + 1) > Rat::zero());
        }
    }

    #[test]
    fn inert_tie_break_is_order_free_away_from_resonance((params, a, z) in setup(), seed in any::<u64>()) {
        prop_assume!(!resonant(&a, &params.mode));
        let n = a.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let pa: Vec<_> = perm.iter().map(|&i| a[i].clone()).collect();
        let pz: Vec<_> = perm.iter().map(|&i| z[i]).collect();
        prop_assert_eq!(
            verdicts(&a, &z, &params, &EpsilonPolicy::Inert),
            verdicts(&pa, &pz, &params, &EpsilonPolicy::Inert)
        );
    }

    #[test]
    fn quiver_degrees_and_cycles((params, a, _z) in setup()) {
        let ell = params.ell;
        let d: BTreeSet<Residue> = a.iter().map(|x| Residue::of(x, ell)).collect();
        let q = build_quiver(&d, &params.k(), ell);
        prop_assert!(q.satisfies_structure());
        let o = category_o_residues(&params, a.len());
        let q = build_quiver(&o, &params.k(), ell);
        prop_assert!(q.satisfies_structure());
        for (s, t) in &q.arrows {
            prop_assert_eq!(t, &s.shift(&-&params.k().scale(ell as i64)));
        }
    }

    #[test]
    fn kz_weights_are_spread_out((params, a, _z) in setup(), positive in any::<bool>()) {
        let ell = params.ell;
        let d: Vec<Residue> = a.iter().map(|x| Residue::of(x, ell)).collect();
        let st = if positive { Stability::Positive } else { Stability::Negative };
        let (w, z, _) = kz_weight_tuples(&d, st, &params);
        prop_assert!(z.iter().all(|&e| e == 0));
        for i in 0..w.len() {
            prop_assert_eq!(Residue::of(&w[i], ell), d[i].clone());
            if i > 0 {
                prop_assert!((&w[i] - &w[i - 1]).upsilon().abs() > Rat::from_int(ell as i64));
            }
        }
    }

    #[test]
    fn xi_case_is_total((params, a, z) in setup(), m in 1usize..5) {
        prop_assume!(a.len() >= 2);
        let m = 1 + (m - 1) % (a.len() - 1);
        prop_assert!(xi_case(&a, &z, m, params.ell).is_ok());
    }
}
