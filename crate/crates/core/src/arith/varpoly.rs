//! Univariate view: polynomials in one distinguished variable whose
//! coefficients are rational functions free of that variable. This is the
//! workhorse representation for Hermite and Abramov style reductions, partial
//! fractions and quotient-ring arithmetic, all of which treat `K(x,y)[z]`
//! (or a permutation of the roles) as a Euclidean domain over a field.

use super::ratfun::RatFun;
use super::vars::Var;
use crate::error::Error;

/// Polynomial in `var` with `RatFun` coefficients free of `var`, lowest
/// degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarPoly {
    pub var: Var,
    coeffs: Vec<RatFun>,
}

impl VarPoly {
    pub fn zero(var: Var) -> VarPoly {
        VarPoly { var, coeffs: Vec::new() }
    }

    pub fn one(var: Var) -> VarPoly {
        VarPoly::constant(var, RatFun::one())
    }

    pub fn constant(var: Var, c: RatFun) -> VarPoly {
        debug_assert!(!c.depends_on(var));
        let mut p = VarPoly { var, coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn var_poly(var: Var) -> VarPoly {
        VarPoly::from_coeffs(var, vec![RatFun::zero(), RatFun::one()])
    }

    pub fn from_coeffs(var: Var, coeffs: Vec<RatFun>) -> VarPoly {
        debug_assert!(coeffs.iter().all(|c| !c.depends_on(var)));
        let mut p = VarPoly { var, coeffs };
        p.trim();
        p
    }

    /// View a rational function that is polynomial in `var` as a VarPoly.
    /// The input's denominator must be free of `var`.
    pub fn from_ratfun(f: &RatFun, var: Var) -> Option<VarPoly> {
        if f.den().depends_on(var) {
            return None;
        }
        let den = RatFun::from_mpoly(f.den().clone());
        let coeffs = f
            .num()
            .univar_coeffs(var)
            .into_iter()
            .map(|c| &RatFun::from_mpoly(c) / &den)
            .collect();
        Some(VarPoly::from_coeffs(var, coeffs))
    }

    /// Split a rational function into a `var`-polynomial numerator and
    /// denominator: `f = num/den` with both VarPoly in `var`.
    pub fn fraction_parts(f: &RatFun, var: Var) -> (VarPoly, VarPoly) {
        let num = VarPoly::from_mpoly_full(f.num(), var);
        let den = VarPoly::from_mpoly_full(f.den(), var);
        (num, den)
    }

    pub fn from_mpoly_full(p: &super::mpoly::MPoly, var: Var) -> VarPoly {
        let coeffs = p
            .univar_coeffs(var)
            .into_iter()
            .map(RatFun::from_mpoly)
            .collect();
        VarPoly::from_coeffs(var, coeffs)
    }

    pub fn to_ratfun(&self) -> RatFun {
        let v = RatFun::var(self.var);
        let mut acc = RatFun::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &v) + c;
        }
        acc
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, k: usize) -> RatFun {
        self.coeffs.get(k).cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    pub fn leading(&self) -> RatFun {
        self.coeffs.last().cloned().unwrap_or_else(RatFun::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &VarPoly) -> VarPoly {
        debug_assert_eq!(self.var, other.var);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        VarPoly::from_coeffs(self.var, coeffs)
    }

    pub fn sub(&self, other: &VarPoly) -> VarPoly {
        debug_assert_eq!(self.var, other.var);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        VarPoly::from_coeffs(self.var, coeffs)
    }

    pub fn neg(&self) -> VarPoly {
        VarPoly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &VarPoly) -> VarPoly {
        debug_assert_eq!(self.var, other.var);
        if self.is_zero() || other.is_zero() {
            return VarPoly::zero(self.var);
        }
        let mut coeffs = vec![RatFun::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        VarPoly::from_coeffs(self.var, coeffs)
    }

    pub fn scale(&self, c: &RatFun) -> VarPoly {
        if c.is_zero() {
            return VarPoly::zero(self.var);
        }
        VarPoly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul_var_power(&self, k: usize) -> VarPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![RatFun::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        VarPoly { var: self.var, coeffs }
    }

    pub fn pow(&self, e: u32) -> VarPoly {
        let mut acc = VarPoly::one(self.var);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> VarPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inv();
        self.scale(&inv)
    }

    pub fn divrem(&self, div: &VarPoly) -> (VarPoly, VarPoly) {
        assert!(!div.is_zero(), "division by zero VarPoly");
        debug_assert_eq!(self.var, div.var);
        if self.coeffs.len() < div.coeffs.len() {
            return (VarPoly::zero(self.var), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dl = div.coeffs.len();
        let lead_inv = div.leading().inv();
        let mut quot = vec![RatFun::zero(); rem.len() - dl + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dl - 1] * &lead_inv;
            if !c.is_zero() {
                for (j, d) in div.coeffs.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &(d * &c);
                }
            }
            quot[i] = c;
        }
        (
            VarPoly::from_coeffs(self.var, quot),
            VarPoly::from_coeffs(self.var, rem),
        )
    }

    pub fn gcd(&self, other: &VarPoly) -> VarPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g`, `g`
    /// monic (or zero).
    pub fn xgcd(&self, other: &VarPoly) -> (VarPoly, VarPoly, VarPoly) {
        let var = self.var;
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut s0 = VarPoly::one(var);
        let mut s1 = VarPoly::zero(var);
        let mut t0 = VarPoly::zero(var);
        let mut t1 = VarPoly::one(var);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().inv();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Solve `a*s = c (mod m)` for `s` with `deg s < deg m`, when
    /// `gcd(a, m) = 1`.
    pub fn solve_congruence(a: &VarPoly, c: &VarPoly, m: &VarPoly) -> Result<VarPoly, Error> {
        let (g, s, _) = a.xgcd(m);
        if g.degree() != 0 {
            return Err(Error::NotCoprime(format!(
                "modular inverse: gcd has degree {}",
                g.degree()
            )));
        }
        // a*s == g mod m, so a*(s*c/g) == c mod m
        let inv_g = g.coeff(0).inv();
        let (_, r) = s.mul(c).scale(&inv_g).divrem(m);
        Ok(r)
    }

    pub fn derivative_main(&self) -> VarPoly {
        // derivative with respect to the distinguished variable
        if self.coeffs.len() <= 1 {
            return VarPoly::zero(self.var);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&super::coeff::Coeff::from_i64(i as i64)))
            .collect();
        VarPoly::from_coeffs(self.var, coeffs)
    }

    /// Coefficient-wise map (for shifts in a *different* variable etc.).
    pub fn map_coeffs(&self, f: impl Fn(&RatFun) -> RatFun) -> VarPoly {
        VarPoly::from_coeffs(self.var, self.coeffs.iter().map(f).collect())
    }

    /// Shift in the distinguished variable: `v -> v + k`.
    pub fn shift_main(&self, k: i64) -> VarPoly {
        VarPoly::from_ratfun(&self.to_ratfun().shift_var_i64(self.var, k), self.var).unwrap()
    }

    /// q-shift in the distinguished variable: `v -> q^k v`.
    pub fn qshift_main(&self, k: i64) -> VarPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&super::coeff::Coeff::q_power(k * i as i64)))
            .collect();
        VarPoly::from_coeffs(self.var, coeffs)
    }

    /// Clear coefficient denominators: returns `(p, d)` with `p` having
    /// polynomial (MPoly) content and `self = p / d` where `d` is a
    /// var-free polynomial.
    pub fn clear_denominators(&self) -> (super::mpoly::MPoly, super::mpoly::MPoly) {
        use super::mpoly::MPoly;
        let mut den = MPoly::one();
        for c in &self.coeffs {
            let g = super::mpoly::gcd_mpoly(&den, c.den());
            den = den.mul(&c.den().div_exact(&g).unwrap());
        }
        let mut num = MPoly::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let scaled = c.num().mul(&den.div_exact(c.den()).unwrap());
            let mut e = [0u32, 0, 0];
            e[self.var.index()] = i as u32;
            num = num.add(&scaled.mul(&MPoly::monomial(super::coeff::Coeff::one(), super::mpoly::Exp(e))));
        }
        (num, den)
    }
}
