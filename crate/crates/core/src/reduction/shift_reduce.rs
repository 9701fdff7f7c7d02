//! The telescoping reduction formula for automorphisms: moving a shifted
//! denominator onto its orbit representative at the cost of an explicit
//! difference certificate, optionally twisted by a constant.

use crate::arith::{Coeff, RatFun};
use crate::ore::{apply_power, OpKind, OperatorKind};

/// `a/theta^n(b) = twist*theta(g) - g + twist^(-n) * theta^(-n)(a)/b`.
/// Returns `(g, residual)`; with `twist = 1` this is the plain reduction
/// formula for any automorphism.
pub fn twisted_shift_reduce(
    a: &RatFun,
    b: &RatFun,
    op: OperatorKind,
    n: i64,
    twist: &Coeff,
) -> (RatFun, RatFun) {
    assert!(!b.is_zero());
    assert!(op.kind != OpKind::Derivation, "reduction needs an automorphism");
    assert!(!twist.is_zero());
    if a.is_zero() {
        return (RatFun::zero(), RatFun::zero());
    }
    let mut g = RatFun::zero();
    if n >= 0 {
        // g = sum_{i=0}^{n-1} twist^(i-n) theta^(i-n)(a) / theta^i(b)
        for i in 0..n {
            let t = RatFun::constant(twist.pow(i - n));
            let num = apply_power(op, a, i - n);
            let den = apply_power(op, b, i);
            g = &g + &(&(&t * &num) / &den);
        }
    } else {
        // g = -sum_{i=0}^{-n-1} twist^i theta^i(a) / theta^(n+i)(b)
        for i in 0..-n {
            let t = RatFun::constant(twist.pow(i));
            let num = apply_power(op, a, i);
            let den = apply_power(op, b, n + i);
            g = &g - &(&(&t * &num) / &den);
        }
    }
    let residual = &RatFun::constant(twist.pow(-n)) * &(&apply_power(op, a, -n) / b);
    (g, residual)
}

/// The reduction formula with no twist: `a/theta^n(b) = theta(g) - g + residual`.
pub fn orbit_shift_reduce(
    a: &RatFun,
    b: &RatFun,
    op: OperatorKind,
    n: i64,
) -> (RatFun, RatFun) {
    twisted_shift_reduce(a, b, op, n, &Coeff::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{MPoly, Var};
    use crate::ore::apply_atomic;

    fn verify(a: &RatFun, b: &RatFun, op: OperatorKind, n: i64, twist: &Coeff) {
        let (g, resid) = twisted_shift_reduce(a, b, op, n, twist);
        let lhs = a / &apply_power(op, b, n);
        let tg = apply_atomic(op, &g).scale(twist);
        let rhs = &(&tg - &g) + &resid;
        assert_eq!(lhs, rhs, "reduction identity failed (n={})", n);
    }

    #[test]
    fn forward_shift() {
        // (1, y+z, sigma_y, 1): g = 1/(y+z), residual 1/(y+z)
        let a = RatFun::one();
        let b = RatFun::from_mpoly(MPoly::var(Var::Y).add(&MPoly::var(Var::Z)));
        let op = OperatorKind::new(Var::Y, OpKind::Shift);
        verify(&a, &b, op, 1, &Coeff::one());
        let (g, resid) = orbit_shift_reduce(&a, &b, op, 1);
        assert_eq!(g, b.inv());
        assert_eq!(resid, b.inv());
    }

    #[test]
    fn zero_steps() {
        let a = RatFun::var(Var::X);
        let b = RatFun::from_mpoly(MPoly::var(Var::Y));
        let op = OperatorKind::new(Var::Y, OpKind::Shift);
        let (g, resid) = orbit_shift_reduce(&a, &b, op, 0);
        assert!(g.is_zero());
        assert_eq!(resid, &a / &b);
    }

    #[test]
    fn backward_qshift() {
        let a = RatFun::one();
        let b = RatFun::from_mpoly(MPoly::var(Var::Y));
        let op = OperatorKind::new(Var::Y, OpKind::QShift);
        verify(&a, &b, op, -1, &Coeff::one());
    }

    #[test]
    fn twisted_identities() {
        let a = RatFun::from_mpoly(MPoly::var(Var::Z).add(&MPoly::one()));
        let b = RatFun::from_mpoly(MPoly::var(Var::Y).add(&MPoly::var(Var::Z)));
        for kind in [OpKind::Shift, OpKind::QShift] {
            let op = OperatorKind::new(Var::Y, kind);
            for n in [-3i64, -1, 0, 2, 4] {
                verify(&a, &b, op, n, &Coeff::q_power(2));
            }
        }
    }
}
