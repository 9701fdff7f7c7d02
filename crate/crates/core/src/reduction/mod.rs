//! The base reductions and the orbit normal forms built from them.

pub mod abramov;
pub mod dispersion;
pub mod hermite;
pub mod orbit_form;
pub mod shift_reduce;
pub mod vector_hermite;

pub use abramov::{abramov_reduce, discrete_antiderivative, q_abramov_reduce, AbramovResult};
pub use hermite::{hermite_reduce, HermiteResult};
pub use orbit_form::{orbit_normal_form, refactor_with_shifts, BlockItem, OrbitBlock, ReducedForm};
pub use shift_reduce::{orbit_shift_reduce, twisted_shift_reduce};
pub use vector_hermite::{vector_hermite_reduce, VectorHermiteResult};
