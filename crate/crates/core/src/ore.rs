//! Operator actions on rational functions and skew-polynomial arithmetic in
//! one `∂_x` over `Q(q)(x)`: application, multiplication, right division and
//! least common left multiples.

use crate::arith::{Coeff, RatFun, Var};
use crate::error::Error;
use num::BigRational;
use std::fmt;

/// The three operator flavours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// Partial derivation `D_v`.
    Derivation,
    /// Shift `S_v : v -> v + 1`.
    Shift,
    /// q-shift `T_{q,v} : v -> q v`.
    QShift,
}

impl OpKind {
    pub fn is_difference(self) -> bool {
        !matches!(self, OpKind::Derivation)
    }

    pub fn symbol(self, v: Var) -> String {
        match self {
            OpKind::Derivation => format!("D{}", v.name()),
            OpKind::Shift => format!("S{}", v.name()),
            OpKind::QShift => format!("T{}", v.name()),
        }
    }
}

/// An atomic operator: a flavour attached to a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OperatorKind {
    pub var: Var,
    pub kind: OpKind,
}

impl OperatorKind {
    pub fn new(var: Var, kind: OpKind) -> OperatorKind {
        OperatorKind { var, kind }
    }
}

/// Action of a single operator on a rational function.
pub fn apply_atomic(op: OperatorKind, f: &RatFun) -> RatFun {
    apply_power(op, f, 1)
}

/// Action of `op^k`; for shifts and q-shifts `k` may be negative.
pub fn apply_power(op: OperatorKind, f: &RatFun, k: i64) -> RatFun {
    match op.kind {
        OpKind::Derivation => {
            assert!(k >= 0, "negative power of a derivation");
            let mut g = f.clone();
            for _ in 0..k {
                g = g.derivative(op.var);
            }
            g
        }
        OpKind::Shift => f.shift_var_i64(op.var, k),
        OpKind::QShift => f.qshift_var(op.var, k),
    }
}

/// `Theta_v = S_v - 1`, `T_{q,v} - 1`, or `D_v`, applied to `f`.
pub fn apply_theta(op: OperatorKind, f: &RatFun) -> RatFun {
    match op.kind {
        OpKind::Derivation => f.derivative(op.var),
        _ => &apply_atomic(op, f) - f,
    }
}

/// A general operator in the full algebra restricted to monomials
/// `∂_x^{i} ∂_y^{j} ∂_z^{k}` with rational-function coefficients; the flavour
/// of each `∂_v` is fixed by `kinds`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedOp {
    pub kinds: [OpKind; 3],
    /// `(coefficient, [i, j, k])` summands.
    pub terms: Vec<(RatFun, [u32; 3])>,
}

impl MixedOp {
    pub fn new(kinds: [OpKind; 3]) -> MixedOp {
        MixedOp {
            kinds,
            terms: Vec::new(),
        }
    }

    pub fn push(&mut self, coeff: RatFun, powers: [u32; 3]) {
        if !coeff.is_zero() {
            self.terms.push((coeff, powers));
        }
    }

    /// `L(f)`: coefficient-weighted sum of composed atomic actions.
    pub fn apply(&self, f: &RatFun) -> RatFun {
        let mut acc = RatFun::zero();
        for (c, powers) in &self.terms {
            let mut g = f.clone();
            for (i, &p) in powers.iter().enumerate() {
                if p > 0 {
                    g = apply_power(OperatorKind::new(Var::from_index(i), self.kinds[i]), &g, p as i64);
                }
            }
            acc = &acc + &(c * &g);
        }
        acc
    }
}

/// Skew polynomial in one `∂_x` with coefficients in `Q(q)(x)`: telescopers
/// and annihilators. Coefficients are stored by power of `∂_x`, lowest
/// first, leading coefficient nonzero; the zero operator has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrePoly {
    pub kind: OpKind,
    coeffs: Vec<RatFun>,
}

impl OrePoly {
    pub fn zero(kind: OpKind) -> OrePoly {
        OrePoly {
            kind,
            coeffs: Vec::new(),
        }
    }

    pub fn one(kind: OpKind) -> OrePoly {
        OrePoly::from_coeffs(kind, vec![RatFun::one()])
    }

    /// The bare operator `∂_x`.
    pub fn gen(kind: OpKind) -> OrePoly {
        OrePoly::from_coeffs(kind, vec![RatFun::zero(), RatFun::one()])
    }

    pub fn from_coeffs(kind: OpKind, coeffs: Vec<RatFun>) -> OrePoly {
        for c in &coeffs {
            assert!(
                !c.depends_on(Var::Y) && !c.depends_on(Var::Z),
                "OrePoly coefficients must be free of y and z"
            );
        }
        let mut p = OrePoly { kind, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order in `∂_x`; the zero operator reports -1.
    pub fn order(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, i: usize) -> RatFun {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn leading(&self) -> RatFun {
        self.coeffs.last().cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn monic(&self) -> OrePoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv();
        self.scale(&inv)
    }

    pub fn scale(&self, c: &RatFun) -> OrePoly {
        if c.is_zero() {
            return OrePoly::zero(self.kind);
        }
        OrePoly {
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &OrePoly) -> OrePoly {
        debug_assert_eq!(self.kind, other.kind);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        OrePoly::from_coeffs(self.kind, coeffs)
    }

    pub fn sub(&self, other: &OrePoly) -> OrePoly {
        debug_assert_eq!(self.kind, other.kind);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        OrePoly::from_coeffs(self.kind, coeffs)
    }

    /// Apply to a rational function in `x, y, z`.
    pub fn apply(&self, f: &RatFun) -> RatFun {
        let op = OperatorKind::new(Var::X, self.kind);
        let mut acc = RatFun::zero();
        let mut g = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                g = apply_atomic(op, &g);
            }
            if !c.is_zero() {
                acc = &acc + &(c * &g);
            }
        }
        acc
    }

    /// The commutation `∂ f = sigma(f) ∂ + delta(f)` lifted to products.
    pub fn mul(&self, other: &OrePoly) -> Result<OrePoly, Error> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        let kind = self.kind;
        let mut acc = OrePoly::zero(kind);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // a ∂^i * other: push ∂^i through each coefficient of other
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                match kind {
                    OpKind::Shift | OpKind::QShift => {
                        let shifted = if kind == OpKind::Shift {
                            b.shift_var_i64(Var::X, i as i64)
                        } else {
                            b.qshift_var(Var::X, i as i64)
                        };
                        acc = acc.add(&OrePoly::monomial(kind, a * &shifted, i + j));
                    }
                    OpKind::Derivation => {
                        // D^i b = sum_k C(i,k) b^{(k)} D^{i-k}
                        let mut binom = BigRational::from_integer(1.into());
                        let mut deriv = b.clone();
                        for k in 0..=i {
                            if k > 0 {
                                let factor = BigRational::new(
                                    ((i - k + 1) as i64).into(),
                                    (k as i64).into(),
                                );
                                binom *= factor;
                                deriv = deriv.derivative(Var::X);
                            }
                            if deriv.is_zero() {
                                break;
                            }
                            let c = (a * &deriv).scale(&Coeff::from_rational(binom.clone()));
                            acc = acc.add(&OrePoly::monomial(kind, c, i - k + j));
                        }
                    }
                }
            }
        }
        Ok(acc)
    }

    pub fn monomial(kind: OpKind, coeff: RatFun, power: usize) -> OrePoly {
        let mut coeffs = vec![RatFun::zero(); power + 1];
        coeffs[power] = coeff;
        OrePoly::from_coeffs(kind, coeffs)
    }

    /// Right division: `self = Q * div + R` with `order(R) < order(div)`.
    pub fn rdiv(&self, div: &OrePoly) -> Result<(OrePoly, OrePoly), Error> {
        if self.kind != div.kind {
            return Err(Error::KindMismatch);
        }
        if div.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let kind = self.kind;
        let n = div.order();
        let mut quot = OrePoly::zero(kind);
        let mut rem = self.clone();
        while rem.order() >= n {
            let m = rem.order();
            let k = (m - n) as usize;
            // leading coefficient of (c ∂^k) * div is c * theta^k(lc(div))
            let lead_div = match kind {
                OpKind::Derivation => div.leading(),
                OpKind::Shift => div.leading().shift_var_i64(Var::X, k as i64),
                OpKind::QShift => div.leading().qshift_var(Var::X, k as i64),
            };
            let c = &rem.leading() / &lead_div;
            let t = OrePoly::monomial(kind, c, k);
            rem = rem.sub(&t.mul(div)?);
            quot = quot.add(&t);
            debug_assert!(rem.order() < m);
        }
        Ok((quot, rem))
    }

    /// Least common left multiple, monic, by linear algebra on an order
    /// ansatz: find the least `r` such that some `E` of order `r - ord(A)`
    /// makes `E*A` right-divisible by `B`.
    pub fn lclm(&self, other: &OrePoly) -> Result<OrePoly, Error> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        assert!(!self.is_zero() && !other.is_zero(), "lclm of zero operator");
        let kind = self.kind;
        let gen = OrePoly::gen(kind);
        let nb = other.order() as usize;
        // rem_i = right remainder of ∂^i * self modulo other
        let mut rems: Vec<OrePoly> = Vec::new();
        let (_, r0) = self.rdiv(other)?;
        rems.push(r0);
        loop {
            // try to combine the current remainders to zero
            let rows: Vec<Vec<RatFun>> = (0..nb)
                .map(|j| rems.iter().map(|r| r.coeff(j)).collect())
                .collect();
            if let Some(sol) = crate::linalg::kernel_vector(&rows) {
                let mut combo = OrePoly::zero(kind);
                for (i, e) in sol.iter().enumerate() {
                    if !e.is_zero() {
                        combo = combo.add(&OrePoly::monomial(kind, e.clone(), i).mul(self)?);
                    }
                }
                debug_assert!(!combo.is_zero());
                let lclm = combo.monic();
                debug_assert!(lclm.rdiv(other).map(|(_, r)| r.is_zero()).unwrap_or(false));
                return Ok(lclm);
            }
            let last = rems.last().unwrap();
            let (_, next) = gen.mul(last)?.rdiv(other)?;
            rems.push(next);
            assert!(
                rems.len() <= self.order() as usize + nb + 2,
                "lclm ansatz exceeded the order bound"
            );
        }
    }
}

impl fmt::Display for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let sym = self.kind.symbol(Var::X);
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = format!("{}", c);
            let (body, negated) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => {
                    (rest.to_string(), true)
                }
                _ => (cs, false),
            };
            if first {
                if negated {
                    f.write_str("-")?;
                }
                first = false;
            } else if negated {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if i == 0 {
                f.write_str(&body)?;
            } else {
                let op = if i == 1 {
                    sym.clone()
                } else {
                    format!("{}^{}", sym, i)
                };
                if body == "1" {
                    f.write_str(&op)?;
                } else {
                    write!(f, "{}*{}", body, op)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::MPoly;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }
    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }

    fn one_over_x_plus_yz() -> RatFun {
        RatFun::new(MPoly::one(), x().add(&y().mul(&z()))).unwrap()
    }

    #[test]
    fn atomic_shift_action() {
        // S_y (1/(x+yz)) = 1/(x+(y+1)z)
        let f = one_over_x_plus_yz();
        let g = apply_atomic(OperatorKind::new(Var::Y, OpKind::Shift), &f);
        let expect = RatFun::new(
            MPoly::one(),
            x().add(&y().add(&MPoly::one()).mul(&z())),
        )
        .unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn atomic_qshift_action() {
        // T_{q,z} (1/(x+yz)) = 1/(x+q yz)
        let f = one_over_x_plus_yz();
        let g = apply_atomic(OperatorKind::new(Var::Z, OpKind::QShift), &f);
        let expect = RatFun::new(
            MPoly::one(),
            x().add(&y().mul(&z()).scale(&Coeff::q_power(1))),
        )
        .unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn atomic_derivation_action() {
        // D_x (1/(x+yz)) = -1/(x+yz)^2
        let f = one_over_x_plus_yz();
        let g = apply_atomic(OperatorKind::new(Var::X, OpKind::Derivation), &f);
        let expect = RatFun::new(MPoly::from_i64(-1), x().add(&y().mul(&z())).pow(2)).unwrap();
        assert_eq!(g, expect);
    }

    #[test]
    fn automorphism_and_leibniz_laws() {
        let f = RatFun::new(x().add(&y()), z().add(&MPoly::one())).unwrap();
        let g = RatFun::new(y().mul(&z()), x().add(&MPoly::one())).unwrap();
        let s = OperatorKind::new(Var::Y, OpKind::Shift);
        let t = OperatorKind::new(Var::Z, OpKind::QShift);
        let d = OperatorKind::new(Var::X, OpKind::Derivation);
        let prod = &f * &g;
        assert_eq!(
            apply_atomic(s, &prod),
            &apply_atomic(s, &f) * &apply_atomic(s, &g)
        );
        assert_eq!(
            apply_atomic(t, &prod),
            &apply_atomic(t, &f) * &apply_atomic(t, &g)
        );
        let lhs = apply_atomic(d, &prod);
        let rhs = &(&apply_atomic(d, &f) * &g) + &(&f * &apply_atomic(d, &g));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_operator_golden() {
        // L = 1 + (x+yz) D_x + 2 S_y T_{q,z} applied to 1/(x+yz)
        // equals 2/(qz + qyz + x)
        let f = one_over_x_plus_yz();
        let mut l = MixedOp::new([OpKind::Derivation, OpKind::Shift, OpKind::QShift]);
        l.push(RatFun::one(), [0, 0, 0]);
        l.push(RatFun::from_mpoly(x().add(&y().mul(&z()))), [1, 0, 0]);
        l.push(RatFun::from_i64(2), [0, 1, 1]);
        let got = l.apply(&f);
        let den = z()
            .scale(&Coeff::q_power(1))
            .add(&y().mul(&z()).scale(&Coeff::q_power(1)))
            .add(&x());
        let expect = RatFun::new(MPoly::from_i64(2), den).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn identity_operator() {
        let f = RatFun::new(x(), y().add(&z())).unwrap();
        let mut l = MixedOp::new([OpKind::Shift, OpKind::Shift, OpKind::Shift]);
        l.push(RatFun::one(), [0, 0, 0]);
        assert_eq!(l.apply(&f), f);
    }

    #[test]
    fn commutation_rules() {
        // D_x * x = x D_x + 1
        let xr = RatFun::var(Var::X);
        let d = OrePoly::gen(OpKind::Derivation);
        let xop = OrePoly::from_coeffs(OpKind::Derivation, vec![xr.clone()]);
        let prod = d.mul(&xop).unwrap();
        assert_eq!(prod.coeff(0), RatFun::one());
        assert_eq!(prod.coeff(1), xr);

        // S_x * x = (x+1) S_x
        let s = OrePoly::gen(OpKind::Shift);
        let xop = OrePoly::from_coeffs(OpKind::Shift, vec![xr.clone()]);
        let prod = s.mul(&xop).unwrap();
        assert!(prod.coeff(0).is_zero());
        assert_eq!(prod.coeff(1), &xr + &RatFun::one());

        // T_{q,x} * x = q x T_{q,x}
        let t = OrePoly::gen(OpKind::QShift);
        let xop = OrePoly::from_coeffs(OpKind::QShift, vec![xr.clone()]);
        let prod = t.mul(&xop).unwrap();
        assert!(prod.coeff(0).is_zero());
        assert_eq!(prod.coeff(1), xr.scale(&Coeff::q_power(1)));
    }

    #[test]
    fn mul_is_action_composition() {
        let f = RatFun::new(x().add(&y()), x().mul(&z()).add(&MPoly::one())).unwrap();
        for kind in [OpKind::Derivation, OpKind::Shift, OpKind::QShift] {
            let a = OrePoly::from_coeffs(
                kind,
                vec![RatFun::var(Var::X), RatFun::one(), RatFun::from_i64(3)],
            );
            let b = OrePoly::from_coeffs(kind, vec![RatFun::from_i64(-2), RatFun::var(Var::X)]);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.apply(&f), a.apply(&b.apply(&f)));
        }
    }

    #[test]
    fn rdiv_reconstruction() {
        for kind in [OpKind::Derivation, OpKind::Shift, OpKind::QShift] {
            let a = OrePoly::from_coeffs(
                kind,
                vec![
                    RatFun::var(Var::X),
                    RatFun::one(),
                    RatFun::from_i64(2),
                    RatFun::var(Var::X),
                ],
            );
            let b = OrePoly::from_coeffs(
                kind,
                vec![RatFun::one(), RatFun::var(Var::X), RatFun::from_i64(1)],
            );
            let (quo, rem) = a.rdiv(&b).unwrap();
            assert!(rem.order() < b.order());
            let back = quo.mul(&b).unwrap().add(&rem);
            assert_eq!(back, a);
        }
    }

    #[test]
    fn rdiv_trivial_cases() {
        let kind = OpKind::Shift;
        let a = OrePoly::from_coeffs(kind, vec![RatFun::var(Var::X), RatFun::one()]);
        let (quo, rem) = a.rdiv(&OrePoly::one(kind)).unwrap();
        assert_eq!(quo, a);
        assert!(rem.is_zero());
        // ∂^2 / ∂ = ∂
        let d2 = OrePoly::monomial(kind, RatFun::one(), 2);
        let (quo, rem) = d2.rdiv(&OrePoly::gen(kind)).unwrap();
        assert_eq!(quo, OrePoly::gen(kind));
        assert!(rem.is_zero());
    }

    #[test]
    fn lclm_divisibility() {
        // A = ∂ - 1, B = ∂ in D-kind
        let kind = OpKind::Derivation;
        let a = OrePoly::from_coeffs(kind, vec![RatFun::from_i64(-1), RatFun::one()]);
        let b = OrePoly::gen(kind);
        let l = a.lclm(&b).unwrap();
        assert_eq!(l.order(), 2);
        assert!(l.rdiv(&a).unwrap().1.is_zero());
        assert!(l.rdiv(&b).unwrap().1.is_zero());

        // shift kind: x∂ - (x+1) and ∂ - 1
        let kind = OpKind::Shift;
        let a = OrePoly::from_coeffs(
            kind,
            vec![-&(&RatFun::var(Var::X) + &RatFun::one()), RatFun::var(Var::X)],
        );
        let b = OrePoly::from_coeffs(kind, vec![RatFun::from_i64(-1), RatFun::one()]);
        let l = a.lclm(&b).unwrap();
        assert!(l.rdiv(&a).unwrap().1.is_zero());
        assert!(l.rdiv(&b).unwrap().1.is_zero());
        assert!(l.order() <= a.order() + b.order());
        assert!(l.leading().is_one());
    }

    #[test]
    fn lclm_of_equal_operators() {
        let kind = OpKind::Shift;
        let a = OrePoly::from_coeffs(kind, vec![RatFun::var(Var::X), RatFun::var(Var::X)]);
        let l = a.lclm(&a).unwrap();
        assert_eq!(l, a.monic());
    }

    #[test]
    fn theta_consistency() {
        let f = RatFun::new(x(), y().add(&z()).add(&MPoly::one())).unwrap();
        for v in [Var::Y, Var::Z] {
            let s = OperatorKind::new(v, OpKind::Shift);
            assert_eq!(apply_theta(s, &f), &apply_atomic(s, &f) - &f);
            let t = OperatorKind::new(v, OpKind::QShift);
            assert_eq!(apply_theta(t, &f), &apply_atomic(t, &f) - &f);
        }
    }

    #[test]
    fn atomic_actions_commute_across_variables() {
        let f = RatFun::new(x().add(&MPoly::one()), x().add(&y().mul(&z()))).unwrap();
        let ops = [
            OperatorKind::new(Var::X, OpKind::Derivation),
            OperatorKind::new(Var::Y, OpKind::Shift),
            OperatorKind::new(Var::Z, OpKind::QShift),
        ];
        for a in ops {
            for b in ops {
                if a.var == b.var {
                    continue;
                }
                let ab = apply_atomic(a, &apply_atomic(b, &f));
                let ba = apply_atomic(b, &apply_atomic(a, &f));
                assert_eq!(ab, ba);
            }
        }
    }
}
