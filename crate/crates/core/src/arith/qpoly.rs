//! Dense univariate polynomials in the parameter `q` over arbitrary-precision
//! rationals. These are the building blocks of the coefficient field `Q(q)`.

use num::{BigRational, One, Signed, Zero};
use std::fmt;

/// Polynomial in `q` with rational coefficients, lowest degree first.
/// The zero polynomial is the empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_i64(n: i64) -> Self {
        QPoly::constant(BigRational::from_integer(n.into()))
    }

    /// `c * q^k` for `k >= 0`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        QPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
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

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree in `q`; zero polynomial reports -1.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Lowest nonzero exponent (valuation); zero polynomial reports None.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// A single term `c*q^k`? Returns (c, k).
    pub fn as_monomial(&self) -> Option<(BigRational, usize)> {
        let k = self.valuation()?;
        if k + 1 == self.coeffs.len() {
            Some((self.coeffs[k].clone(), k))
        } else {
            None
        }
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - other.coeff(i));
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; panics on zero divisor.
    pub fn divrem(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by zero QPoly");
        if self.coeffs.len() < div.coeffs.len() {
            return (QPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dl = div.coeffs.len();
        let lead = div.leading();
        let mut quot = vec![BigRational::zero(); rem.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dl - 1] / &lead;
            if !c.is_zero() {
                for (j, d) in div.coeffs.iter().enumerate() {
                    let t = d * &c;
                    rem[i + j] -= t;
                }
            }
            quot[i] = c;
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    pub fn div_exact(&self, div: &QPoly) -> Option<QPoly> {
        let (q, r) = self.divrem(div);
        r.is_zero().then_some(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        QPoly {
            coeffs: self.coeffs.iter().map(|c| c / &lead).collect(),
        }
    }

    /// Evaluate at a rational point.
    pub fn eval(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
                first = false;
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                if k == 1 {
                    f.write_str("q")?;
                } else {
                    write!(f, "q^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_coeffs(cs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    #[test]
    fn divrem_roundtrip() {
        let a = p(&[1, 0, 2, 3]);
        let b = p(&[1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_common_factor() {
        let g = p(&[1, 1]); // q+1
        let a = g.mul(&p(&[2, 0, 1]));
        let b = g.mul(&p(&[-1, 1]));
        assert_eq!(a.gcd(&b), g.monic());
    }

    #[test]
    fn monomial_detection() {
        assert_eq!(
            p(&[0, 0, 3]).as_monomial(),
            Some((BigRational::from_integer(3.into()), 2))
        );
        assert_eq!(p(&[0, 1, 3]).as_monomial(), None);
    }
}
