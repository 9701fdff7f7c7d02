//! The coefficient field `Q(q)`: reduced fractions of polynomials in the
//! parameter `q`, with `q` transcendental (in particular `q^m != 1` for all
//! nonzero integers `m`).

use super::qpoly::QPoly;
use num::{BigRational, One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Element of `Q(q)`. Invariants: `gcd(num, den) = 1`, `den` monic, `den != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    num: QPoly,
    den: QPoly,
}

impl Coeff {
    pub fn new(num: QPoly, den: QPoly) -> Coeff {
        assert!(!den.is_zero(), "zero denominator in Q(q)");
        if num.is_zero() {
            return Coeff::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lead = den.leading();
        let num = num.scale(&(BigRational::one() / &lead));
        let den = den.scale(&(BigRational::one() / &lead));
        Coeff { num, den }
    }

    pub fn zero() -> Coeff {
        Coeff {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Coeff {
        Coeff {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn from_poly(p: QPoly) -> Coeff {
        Coeff {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn from_rational(r: BigRational) -> Coeff {
        Coeff::from_poly(QPoly::constant(r))
    }

    pub fn from_i64(n: i64) -> Coeff {
        Coeff::from_poly(QPoly::from_i64(n))
    }

    /// `q^s` for any integer `s` (negative exponents go to the denominator).
    pub fn q_power(s: i64) -> Coeff {
        if s >= 0 {
            Coeff::from_poly(QPoly::monomial(BigRational::one(), s as usize))
        } else {
            Coeff {
                num: QPoly::one(),
                den: QPoly::monomial(BigRational::one(), (-s) as usize),
            }
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when free of `q`.
    pub fn is_rational(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(if self.num.is_zero() {
                BigRational::zero()
            } else {
                self.num.coeff(0) / self.den.coeff(0)
            })
        } else {
            None
        }
    }

    /// Exactly `q^s`? Relies on the reduced monic-denominator form.
    pub fn as_q_power(&self) -> Option<i64> {
        let (cn, kn) = self.num.as_monomial()?;
        let (cd, kd) = self.den.as_monomial()?;
        if cn == cd {
            Some(kn as i64 - kd as i64)
        } else {
            None
        }
    }

    pub fn inv(&self) -> Coeff {
        assert!(!self.is_zero(), "inverse of zero in Q(q)");
        Coeff::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Coeff {
        if e == 0 {
            return Coeff::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Coeff::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Evaluate at a rational point `q = at` (caller ensures `den(at) != 0`).
    pub fn eval_q(&self, at: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(at) / d)
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, other: &Coeff) -> Coeff {
        Coeff::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, other: &Coeff) -> Coeff {
        Coeff::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, other: &Coeff) -> Coeff {
        if self.is_zero() || other.is_zero() {
            return Coeff::zero();
        }
        Coeff::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
}

impl Div for &Coeff {
    type Output = Coeff;
    fn div(self, other: &Coeff) -> Coeff {
        assert!(!other.is_zero(), "division by zero in Q(q)");
        Coeff::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.is_constant() || self.num.as_monomial().is_some() {
                write!(f, "{}", self.num)
            } else {
                write!(f, "({})", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_power_roundtrip() {
        for s in [-3i64, -1, 0, 1, 4] {
            assert_eq!(Coeff::q_power(s).as_q_power(), Some(s));
        }
        let c = &Coeff::q_power(2) * &Coeff::from_i64(2);
        assert_eq!(c.as_q_power(), None);
    }

    #[test]
    fn field_ops_reduce() {
        let q = Coeff::q_power(1);
        let a = &(&q * &q) - &Coeff::one(); // q^2 - 1
        let b = &q - &Coeff::one(); // q - 1
        let c = &a / &b; // q + 1
        assert_eq!(c, &q + &Coeff::one());
    }

    #[test]
    fn q_power_ratio_detection() {
        let r = &Coeff::q_power(5) / &Coeff::q_power(2);
        assert_eq!(r.as_q_power(), Some(3));
    }
}
