//! Shift and q-shift equivalence of polynomials, invariance witnesses,
//! orbit partitions, integer-linear shape detection and separability.

pub mod affine;
pub mod equiv;
pub mod intlin;

pub use affine::{integer_witness, solve_shift_affine, AffineSet};
pub use equiv::{
    invariance_lattice, invariance_search, mixed_equiv, orbit_partition, q_shift_equiv,
    shift_equiv, EquivWitness, GroupSpec, InvarianceLattice, InvarianceWitness, OrbitClass,
};
pub use intlin::{integer_linear, q_integer_linear, rational_separable};
