//! Exact arithmetic: arbitrary-precision rationals, the coefficient field
//! `Q(q)` with `q` transcendental, sparse multivariate polynomials in
//! `x, y, z`, normalized rational functions, factored denominators and
//! partial fractions. Everything here is exact; there is no floating point
//! anywhere in this crate.

pub mod coeff;
pub mod factored;
pub mod mpoly;
pub mod qpoly;
pub mod ratfun;
pub mod varpoly;
pub mod vars;

pub use coeff::Coeff;
pub use factored::{bezout_split, partial_fraction, FactoredDen, PartialFractions};
pub use mpoly::{content, gcd_mpoly, primitive_part, squarefree_decompose, Exp, MPoly};
pub use qpoly::QPoly;
pub use ratfun::{normalize, RatFun};
pub use varpoly::VarPoly;
pub use vars::{Var, ALL_VARS};
pub(crate) mod intpoly;
