//! Exact coefficient arithmetic: Laurent polynomials over ℤ in the variables
//! `z_i`, `t^{(k)}_a`, `ħ`, `μ_i`, and rational functions with factored
//! denominators.

mod poly;
mod rational;
mod text;
mod var;

pub use poly::{Monomial, MultiPoly};
pub use rational::{
    divide_exact, poly_arith, rational_arith, DenomFactor, Division, FactorShape,
    FactoredRational, Normalized, PolyOp, ProductForm, RationalOp,
};
pub use var::VariableId;
