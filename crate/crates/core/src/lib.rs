//! Exact symbolic engine for deciding the existence of telescopers for
//! rational functions in three variables, across all combinations of
//! differential, shift and q-shift operators.
//!
//! The crate is organized bottom-up:
//! - [`arith`]: exact arithmetic over `Q(q)` in `x, y, z`;
//! - [`ore`]: operator actions and skew-polynomial arithmetic;
//! - [`reduction`]: Hermite, Abramov and q-Abramov reductions plus the
//!   orbit normal forms built from them;
//! - [`equivalence`]: (q-)shift equivalence, invariance witnesses, orbit
//!   partitions and separability of bivariate rational functions;
//! - [`solvers`]: complete first-order difference/q-difference solvers,
//!   rational antiderivatives, nullspaces over `Q(q)(x)` and the bounded
//!   ODE ansatz with an explicit unsupported verdict;
//! - [`exactness`]: the six exactness testers;
//! - [`existence`]: the per-class existence deciders, witness construction
//!   and telescoper verification.

pub mod arith;
pub mod equivalence;
pub mod exactness;
pub mod error;
pub mod linalg;
pub mod ore;
pub mod quotient;
pub mod reduction;
pub mod solvers;

pub use arith::{Coeff, FactoredDen, MPoly, QPoly, RatFun, Var, VarPoly};
pub use error::Error;
