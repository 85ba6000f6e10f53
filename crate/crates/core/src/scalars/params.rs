use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cyclotomic::CycElem;
use super::poly::{CycScalar, ParamMonomial, Var};

/// Coefficients `(c_1, ..., c_{l-1})` of the parameter polynomial
/// `p(u) = sum_s c_s u^s`, where `c_s = sum_{r=0}^{l-1} zeta^{-rs} h_r`.
pub fn p_coeffs(ell: u32) -> Vec<CycScalar> {
    (1..ell as i64)
        .map(|s| {
            let mut c = CycScalar::zero();
            for r in 0..ell as i64 {
                c.add_assign_ref(&CycScalar::h(r, ell).scale(&CycElem::zeta_pow(ell, -r * s)));
            }
            c
        })
        .collect()
}

/// `p(zeta^m)`.
pub fn p_at_scalar(ell: u32, m: i64) -> CycScalar {
    let mut out = CycScalar::zero();
    for (i, c) in p_coeffs(ell).iter().enumerate() {
        let s = i as i64 + 1;
        out.add_assign_ref(&c.scale(&CycElem::zeta_pow(ell, m * s)));
    }
    out
}

/// `s_m = p(zeta^m) - m*hbar`.
pub fn s_value(ell: u32, m: i64) -> CycScalar {
    &p_at_scalar(ell, m) - &CycScalar::hbar().scale_rat(&m.into())
}

/// A partial substitution of numbers for the formal parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamAssignment {
    values: BTreeMap<Var, CycElem>,
}

impl ParamAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, value: CycElem) -> Self {
        self.values.insert(v, value);
        self
    }

    pub fn set(&mut self, v: Var, value: CycElem) {
        self.values.insert(v, value);
    }

    pub fn get(&self, v: Var) -> Option<&CycElem> {
        self.values.get(&v)
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &CycElem)> {
        self.values.iter()
    }
}

/// Substitutes the assigned parameters and collects terms.
pub fn specialize(x: &CycScalar, a: &ParamAssignment) -> CycScalar {
    if a.is_empty() {
        return x.clone();
    }
    let mut out = CycScalar::zero();
    for (m, c) in x.terms() {
        let mut coeff = c.clone();
        let mut rest = m.exponents().to_vec();
        for (v, e) in m.vars() {
            if let Some(val) = a.get(v) {
                coeff = &coeff * &val.pow(e as u32);
                rest[v.slot()] = 0;
            }
        }
        out.add_term(&ParamMonomial::from_exponents(rest), &coeff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(r: i64, ell: u32) -> CycScalar {
        CycScalar::h(r, ell)
    }

    #[test]
    fn p_is_zero_for_ell_one() {
        assert!(p_coeffs(1).is_empty());
        assert!(s_value(1, 0).is_zero());
    }

    #[test]
    fn p_coeffs_small_ell() {
        assert_eq!(p_coeffs(2), vec![&h(0, 2) - &h(1, 2)]);
        let z = |e| CycElem::zeta_pow(3, e);
        let c1 = &(&h(0, 3) + &h(1, 3).scale(&z(2))) + &h(2, 3).scale(&z(1));
        assert_eq!(p_coeffs(3)[0], c1);
    }

    #[test]
    fn s_values_ell_two() {
        let hbar = CycScalar::hbar();
        assert_eq!(p_at_scalar(2, 1), &h(1, 2) - &h(0, 2));
        assert_eq!(s_value(2, 1), &(&h(1, 2) - &h(0, 2)) - &hbar);
        assert_eq!(s_value(2, 0), &h(0, 2) - &h(1, 2));
    }

    #[test]
    fn specialize_examples() {
        let hk = &CycScalar::hbar() * &CycScalar::k();
        let a = ParamAssignment::new().with(Var::Hbar, CycElem::one());
        assert_eq!(specialize(&hk, &a), CycScalar::k());

        let d = &h(0, 2) - &h(1, 2);
        let a = ParamAssignment::new()
            .with(Var::H(0), CycElem::zero())
            .with(Var::H(1), CycElem::zero());
        assert!(specialize(&d, &a).is_zero());

        let a = ParamAssignment::new()
            .with(Var::H(0), CycElem::zero())
            .with(Var::H(1), CycElem::one())
            .with(Var::Hbar, CycElem::one());
        assert!(specialize(&s_value(2, 1), &a).is_zero());
    }

    #[test]
    fn s_and_p_sums_agree_without_hbar() {
        for ell in 1..=4u32 {
            let kill = ParamAssignment::new().with(Var::Hbar, CycElem::zero());
            let mut ss = CycScalar::zero();
            let mut ps = CycScalar::zero();
            for m in 0..ell as i64 {
                ss.add_assign_ref(&s_value(ell, m));
                ps.add_assign_ref(&p_at_scalar(ell, m));
            }
            assert_eq!(specialize(&ss, &kill), ps);
            // sum_m p(zeta^m) = l * (constant term of p) = 0
            assert!(ps.is_zero());
        }
    }
}
