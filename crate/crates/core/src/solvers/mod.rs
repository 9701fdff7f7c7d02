//! Rational-solution solvers for the first-order functional equations the
//! exactness and existence criteria reduce to, plus linear algebra over
//! `Q(q)(x)`.

pub mod algsep;
pub mod first_order;
pub mod nullspace;
pub mod ode;

pub use algsep::{algebraic_nonseparable_test, SeparabilityVerdict};
pub use first_order::solve_first_order;
pub use nullspace::{kx_nullspace, kx_nullspace_vectors};
pub use ode::{bounded_ode_rational_solve, OdeOutcome};

use crate::arith::RatFun;
use crate::arith::Var;
use crate::reduction::hermite_reduce;

/// Ansatz limits for the bounded solvers; exceeding them yields an explicit
/// unsupported verdict, never a wrong answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverBounds {
    /// numerator degree limit for denominator-bounded ansatz spaces
    pub max_num_degree: u32,
    /// denominator multiplicity limit
    pub max_den_multiplicity: u32,
    /// derivative order limit for dependence searches
    pub max_derivative_order: u32,
}

impl Default for SolverBounds {
    fn default() -> Self {
        SolverBounds {
            max_num_degree: 12,
            max_den_multiplicity: 8,
            max_derivative_order: 6,
        }
    }
}

/// `Some(g)` with `D_var(g) = a` exactly when the Hermite remainder of `a`
/// vanishes.
pub fn rational_antiderivative(a: &RatFun, var: Var) -> Option<RatFun> {
    let res = hermite_reduce(a, var);
    if !res.rem_num.is_zero() {
        return None;
    }
    debug_assert_eq!(&res.cert.derivative(var), a);
    Some(res.cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::MPoly;

    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }
    fn x() -> MPoly {
        MPoly::var(Var::X)
    }

    #[test]
    fn antiderivative_of_inverse_square() {
        // 1/y^2 -> -1/y
        let a = RatFun::new(MPoly::one(), y().pow(2)).unwrap();
        let g = rational_antiderivative(&a, Var::Y).unwrap();
        assert_eq!(g, RatFun::new(MPoly::from_i64(-1), y()).unwrap());
    }

    #[test]
    fn logarithmic_obstruction() {
        let a = RatFun::new(MPoly::one(), y()).unwrap();
        assert!(rational_antiderivative(&a, Var::Y).is_none());
    }

    #[test]
    fn differentiate_back() {
        // (2y)/(y^2+x)^2 -> -1/(y^2+x)
        let a = RatFun::new(
            y().scale(&crate::arith::Coeff::from_i64(2)),
            y().pow(2).add(&x()).pow(2),
        )
        .unwrap();
        let g = rational_antiderivative(&a, Var::Y).unwrap();
        assert_eq!(
            g,
            RatFun::new(MPoly::from_i64(-1), y().pow(2).add(&x())).unwrap()
        );
    }
}
