//! Normalized rational functions in `x, y, z` over `Q(q)`.

use super::coeff::Coeff;
use super::mpoly::{gcd_mpoly, MPoly};
use super::vars::Var;
use crate::error::Error;
use num::BigRational;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Reduced fraction of multivariate polynomials. Invariants: the gcd of
/// numerator and denominator is 1, the denominator is monic under the graded
/// lex term order, and zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl RatFun {
    /// Canonical form of `num/den`.
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFun, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: MPoly, den: MPoly) -> RatFun {
        if num.is_zero() {
            return RatFun::zero();
        }
        let g = gcd_mpoly(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::monic_parts(num, den)
    }

    /// Assemble from parts already known to be coprime.
    fn monic_parts(num: MPoly, den: MPoly) -> RatFun {
        if num.is_zero() {
            return RatFun::zero();
        }
        let lc = den.leading_coeff();
        RatFun {
            num: num.scale(&lc.inv()),
            den: den.scale(&lc.inv()),
        }
    }

    /// Reduce `num/den` when every common factor is known to divide `hint`.
    fn reduced_with_hint(mut num: MPoly, mut den: MPoly, hint: &MPoly) -> RatFun {
        if num.is_zero() {
            return RatFun::zero();
        }
        let mut h = hint.clone();
        loop {
            let g = gcd_mpoly(&num, &h);
            let g = gcd_mpoly(&g, &den);
            if g.is_constant() {
                break;
            }
            num = num.div_exact(&g).unwrap();
            den = den.div_exact(&g).unwrap();
            h = g;
        }
        Self::monic_parts(num, den)
    }

    pub fn zero() -> RatFun {
        RatFun {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> RatFun {
        RatFun {
            num: MPoly::one(),
            den: MPoly::one(),
        }
    }

    pub fn from_mpoly(p: MPoly) -> RatFun {
        RatFun {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn constant(c: Coeff) -> RatFun {
        RatFun::from_mpoly(MPoly::constant(c))
    }

    pub fn from_i64(n: i64) -> RatFun {
        RatFun::from_mpoly(MPoly::from_i64(n))
    }

    pub fn var(v: Var) -> RatFun {
        RatFun::from_mpoly(MPoly::var(v))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_mpoly(&self) -> Option<&MPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_coeff(&self) -> Option<Coeff> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.num.depends_on(v) || self.den.depends_on(v)
    }

    pub fn inv(&self) -> RatFun {
        assert!(!self.is_zero(), "inverse of zero rational function");
        Self::reduced(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> RatFun {
        if e == 0 {
            return RatFun::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = RatFun::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn scale(&self, c: &Coeff) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        Self::reduced(self.num.scale(c), self.den.clone())
    }

    pub fn derivative(&self, v: Var) -> RatFun {
        // (n/d)' = (n'd - nd')/d^2; common factors all divide d
        let n = self.num.derivative(v).mul(&self.den).sub(&self.num.mul(&self.den.derivative(v)));
        Self::reduced_with_hint(n, self.den.mul(&self.den), &self.den)
    }

    /// Substitute `v -> v + r`.
    pub fn shift_var(&self, v: Var, r: &BigRational) -> RatFun {
        Self::reduced(self.num.shift_var(v, r), self.den.shift_var(v, r))
    }

    pub fn shift_var_i64(&self, v: Var, k: i64) -> RatFun {
        Self::reduced(self.num.shift_var_i64(v, k), self.den.shift_var_i64(v, k))
    }

    /// Substitute `v -> q^k v`.
    pub fn qshift_var(&self, v: Var, k: i64) -> RatFun {
        Self::reduced(self.num.qshift_var(v, k), self.den.qshift_var(v, k))
    }

    /// Simultaneous substitution of rational-function images; `None` when a
    /// denominator vanishes.
    pub fn subst_simultaneous(&self, images: &[Option<RatFun>; 3]) -> Option<RatFun> {
        let eval = |p: &MPoly| -> RatFun {
            let mut out = RatFun::zero();
            for (e, c) in p.terms() {
                let mut t = RatFun::constant(c.clone());
                for (i, img) in images.iter().enumerate() {
                    let k = e.0[i];
                    if k == 0 {
                        continue;
                    }
                    match img {
                        Some(g) => t = &t * &g.pow(k as i64),
                        None => {
                            t = &t * &RatFun::var(Var::from_index(i)).pow(k as i64);
                        }
                    }
                }
                out = &out + &t;
            }
            out
        };
        let n = eval(&self.num);
        let d = eval(&self.den);
        if d.is_zero() {
            return None;
        }
        Some(&n / &d)
    }

    pub fn swap_yz(&self) -> RatFun {
        Self::reduced(self.num.swap_yz(), self.den.swap_yz())
    }

    /// Evaluate some variables at rational points; `None` on pole.
    pub fn eval_vars(&self, at: &[(Var, BigRational)]) -> Option<RatFun> {
        let n = self.num.eval_vars(at);
        let d = self.den.eval_vars(at);
        if d.is_zero() {
            return None;
        }
        Some(Self::reduced(n, d))
    }
}

/// Canonical rational function for `num/den`, the public normalization entry
/// point: idempotent and scale-invariant.
pub fn normalize(num: MPoly, den: MPoly) -> Result<RatFun, Error> {
    RatFun::new(num, den)
}

fn add_sub(a: &RatFun, b: &RatFun, subtract: bool) -> RatFun {
    if a.is_zero() {
        return if subtract { -b } else { b.clone() };
    }
    if b.is_zero() {
        return a.clone();
    }
    let g = gcd_mpoly(&a.den, &b.den);
    if g.is_one() {
        // coprime denominators: the sum is already reduced
        let t = b.num.mul(&a.den);
        let s = a.num.mul(&b.den);
        let num = if subtract { s.sub(&t) } else { s.add(&t) };
        return RatFun::monic_parts(num, a.den.mul(&b.den));
    }
    let da = a.den.div_exact(&g).unwrap();
    let db = b.den.div_exact(&g).unwrap();
    let t = b.num.mul(&da);
    let s = a.num.mul(&db);
    let num = if subtract { s.sub(&t) } else { s.add(&t) };
    // common factors of num and the lcm denominator all divide g
    RatFun::reduced_with_hint(num, a.den.mul(&db), &g)
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, other: &RatFun) -> RatFun {
        add_sub(self, other, false)
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, other: &RatFun) -> RatFun {
        add_sub(self, other, true)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, other: &RatFun) -> RatFun {
        if self.is_zero() || other.is_zero() {
            return RatFun::zero();
        }
        // cross-cancel: the result of (a/b)(c/d) with a/b, c/d reduced is
        // reduced once gcd(a,d) and gcd(c,b) are removed
        let g1 = gcd_mpoly(&self.num, &other.den);
        let g2 = gcd_mpoly(&other.num, &self.den);
        let an = self.num.div_exact(&g1).unwrap();
        let od = other.den.div_exact(&g1).unwrap();
        let on = other.num.div_exact(&g2).unwrap();
        let ad = self.den.div_exact(&g2).unwrap();
        RatFun::monic_parts(an.mul(&on), ad.mul(&od))
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, other: &RatFun) -> RatFun {
        assert!(!other.is_zero(), "division by zero rational function");
        self * &other.inv()
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.num_terms() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            let n = if self.num.num_terms() > 1 {
                format!("({})", self.num)
            } else {
                format!("{}", self.num)
            };
            write!(f, "{}/({})", n, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::vars::Var;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }
    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }

    #[test]
    fn normalize_scalar_cancellation() {
        // (2x+2y)/2 -> (x+y)/1
        let f = normalize(x().add(&y()).scale(&Coeff::from_i64(2)), MPoly::from_i64(2)).unwrap();
        assert_eq!(f, RatFun::from_mpoly(x().add(&y())));
    }

    #[test]
    fn normalize_common_factor() {
        // ((x+y)z)/(x+y) -> z
        let f = normalize(x().add(&y()).mul(&z()), x().add(&y())).unwrap();
        assert_eq!(f, RatFun::var(Var::Z));
    }

    #[test]
    fn normalize_gcd_by_expansion() {
        // (x^2-y^2)/(x-y) -> x+y, oracle: (x+y)(x-y) = x^2-y^2
        let num = x().mul(&x()).sub(&y().mul(&y()));
        assert_eq!(x().add(&y()).mul(&x().sub(&y())), num);
        let f = normalize(num, x().sub(&y())).unwrap();
        assert_eq!(f, RatFun::from_mpoly(x().add(&y())));
    }

    #[test]
    fn normalize_zero_denominator() {
        assert!(matches!(
            normalize(x(), MPoly::zero()),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn normalize_idempotent_and_scale_invariant() {
        let a = Coeff::q_power(2);
        let num = x().add(&y());
        let den = z().add(&MPoly::one());
        let f1 = normalize(num.clone(), den.clone()).unwrap();
        let f2 = normalize(num.scale(&a), den.scale(&a)).unwrap();
        assert_eq!(f1, f2);
        let again = normalize(f1.num().clone(), f1.den().clone()).unwrap();
        assert_eq!(again, f1);
    }

    #[test]
    fn derivative_quotient_rule() {
        // D_z(1/(z-y)) = -1/(z-y)^2
        let f = RatFun::new(MPoly::one(), z().sub(&y())).unwrap();
        let df = f.derivative(Var::Z);
        let expect = RatFun::new(MPoly::from_i64(-1), z().sub(&y()).pow(2)).unwrap();
        assert_eq!(df, expect);
    }
}
