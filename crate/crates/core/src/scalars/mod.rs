//! Exact coefficient arithmetic: rationals, cyclotomic fields and polynomials
//! in the formal parameters.

mod cyclotomic;
mod params;
mod poly;
mod rat;

pub use cyclotomic::{cyclotomic_poly, totient, CycElem};
pub use params::{p_at_scalar, p_coeffs, s_value, specialize, ParamAssignment};
pub use poly::{CycScalar, ParamMonomial, Var};
pub use rat::Rat;
