//! Factored denominators: the contract under which all deciders work. The
//! factors are caller-asserted irreducible; a validation pass checks only
//! squarefreeness and pairwise coprimality, since full multivariate
//! factorization is out of scope.

use super::coeff::Coeff;
use super::mpoly::{gcd_mpoly, MPoly};
use super::ratfun::RatFun;
use super::varpoly::VarPoly;
use super::vars::Var;
use crate::error::Error;

/// `unit * prod factors[i].0 ^ factors[i].1`, factors monic, non-constant,
/// pairwise coprime and squarefree. Irreducibility is an assertion recorded
/// by `asserted_irreducible`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredDen {
    pub unit: Coeff,
    pub factors: Vec<(MPoly, u32)>,
    pub asserted_irreducible: bool,
}

impl FactoredDen {
    pub fn one() -> FactoredDen {
        FactoredDen {
            unit: Coeff::one(),
            factors: Vec::new(),
            asserted_irreducible: true,
        }
    }

    pub fn new(unit: Coeff, factors: Vec<(MPoly, u32)>) -> Result<FactoredDen, Error> {
        if unit.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut unit = unit;
        let mut normalized = Vec::new();
        for (f, m) in factors {
            if f.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            if m == 0 {
                continue;
            }
            if let Some(c) = f.as_constant() {
                unit = &unit * &c.pow(m as i64);
                continue;
            }
            let lc = f.leading_coeff();
            unit = &unit * &lc.pow(m as i64);
            normalized.push((f.monic(), m));
        }
        // merge duplicate factors
        normalized.sort_by(|a, b| a.0.cmp_canonical(&b.0));
        let mut merged: Vec<(MPoly, u32)> = Vec::new();
        for (f, m) in normalized {
            match merged.last_mut() {
                Some((g, k)) if *g == f => *k += m,
                _ => merged.push((f, m)),
            }
        }
        Ok(FactoredDen {
            unit,
            factors: merged,
            asserted_irreducible: false,
        })
    }

    pub fn expand(&self) -> MPoly {
        let mut p = MPoly::constant(self.unit.clone());
        for (f, m) in &self.factors {
            p = p.mul(&f.pow(*m));
        }
        p
    }

    /// Check squarefreeness and pairwise coprimality of the factors.
    pub fn validate(&self) -> Result<(), Error> {
        for (i, (f, _)) in self.factors.iter().enumerate() {
            for v in f.vars_present() {
                let d = f.derivative(v);
                if !d.is_zero() && !gcd_mpoly(f, &d).is_one() {
                    return Err(Error::ValidationError(format!("factor {} is not squarefree", f)));
                }
            }
            for (g, _) in self.factors.iter().skip(i + 1) {
                if !gcd_mpoly(f, g).is_one() {
                    return Err(Error::ValidationError(format!(
                        "factors {} and {} are not coprime",
                        f, g
                    )));
                }
            }
        }
        Ok(())
    }

    /// Verify that the expansion equals `den` exactly.
    pub fn matches(&self, den: &MPoly) -> bool {
        self.expand() == *den
    }

    /// Recover the exact factorization of `den` assuming its irreducible
    /// factors all appear in `pool` (up to scalars). Fails when a residual
    /// non-unit part remains.
    pub fn refactor(den: &MPoly, pool: &[MPoly]) -> Result<FactoredDen, Error> {
        let mut rest = den.clone();
        let mut factors = Vec::new();
        for f in pool {
            let f = f.monic();
            if f.is_constant() {
                continue;
            }
            let mut m = 0u32;
            while let Some(q) = rest.div_exact(&f) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                factors.push((f, m));
            }
        }
        match rest.as_constant() {
            Some(c) if !c.is_zero() => {
                let mut fd = FactoredDen::new(c, factors)?;
                fd.asserted_irreducible = true;
                Ok(fd)
            }
            _ => Err(Error::BadFactorization(format!(
                "residual factor {} not in the supplied pool",
                rest
            ))),
        }
    }
}

/// Partial fraction decomposition of `f` with respect to `var` against a
/// factored denominator: polynomial part plus one numerator per
/// `(factor, power)` with numerator degree below the factor degree.
#[derive(Debug, Clone)]
pub struct PartialFractions {
    pub var: Var,
    pub poly_part: VarPoly,
    /// `(factor, power k, numerator)` meaning `numerator / factor^k`.
    pub parts: Vec<(MPoly, u32, VarPoly)>,
}

impl PartialFractions {
    pub fn reconstruct(&self) -> RatFun {
        let mut acc = self.poly_part.to_ratfun();
        for (d, k, num) in &self.parts {
            let den = RatFun::from_mpoly(d.pow(*k));
            acc = &acc + &(&num.to_ratfun() / &den);
        }
        acc
    }
}

/// Split `b / (c1 * c2)` as `b1/c1 + b2/c2` in `var`, with
/// `deg_var b2 < deg_var c2` and any polynomial part folded into `b1`.
pub fn bezout_split(
    b: &VarPoly,
    c1: &VarPoly,
    c2: &VarPoly,
) -> Result<(VarPoly, VarPoly), Error> {
    debug_assert_eq!(b.var, c1.var);
    debug_assert_eq!(b.var, c2.var);
    if c2.is_constant() {
        let inv = c2.coeff(0).inv();
        return Ok((b.scale(&inv), VarPoly::zero(b.var)));
    }
    if c1.is_constant() {
        let inv = c1.coeff(0).inv();
        let (q, r) = b.scale(&inv).divrem(c2);
        // b/(c1 c2) = q/c1-part? here c1 is a unit: fold poly part into b1
        return Ok((q.mul(c1), r));
    }
    let (g, s, t) = c1.xgcd(c2);
    if g.degree() != 0 {
        return Err(Error::NotCoprime(format!(
            "bezout_split: gcd of cofactors has degree {}",
            g.degree()
        )));
    }
    let ginv = g.coeff(0).inv();
    // 1/(c1 c2) = (s*c1 + t*c2)/(g * c1 c2) => b/(c1 c2) = b*t/(g c1) + b*s/(g c2)
    let bt = b.mul(&t).scale(&ginv);
    let bs = b.mul(&s).scale(&ginv);
    let (q2, b2) = bs.divrem(c2);
    let b1 = bt.add(&q2.mul(c1));
    Ok((b1, b2))
}

/// Full partial fraction decomposition in `var`. The factored denominator
/// must expand to `f`'s denominator viewed in `var` (up to a `var`-free
/// unit, which is absorbed).
pub fn partial_fraction(
    f: &RatFun,
    var: Var,
    den: &FactoredDen,
) -> Result<PartialFractions, Error> {
    // the factorization must match the denominator up to var-free content
    let expanded = den.expand();
    let g = gcd_mpoly(&expanded, f.den());
    let matches = expanded
        .div_exact(&g)
        .is_some_and(|r| !r.depends_on(var))
        && f.den().div_exact(&g).is_some_and(|r| !r.depends_on(var));
    if !matches {
        return Err(Error::BadFactorization(format!(
            "denominator {} does not match the supplied factorization",
            f.den()
        )));
    }

    let (num_vp, den_vp) = VarVpParts::of(f, var);
    let (mut poly_part, mut rem) = num_vp.divrem(&den_vp);

    // peel off factors one (factor, multiplicity) at a time
    let mut parts = Vec::new();
    let mut remaining_den = den_vp;
    let active: Vec<(MPoly, VarPoly, u32)> = den
        .factors
        .iter()
        .filter(|(d, _)| d.depends_on(var))
        .map(|(d, m)| (d.clone(), VarPoly::from_mpoly_full(d, var), *m))
        .collect();
    // var-free factors only contribute content; they are cancelled by the
    // monic divisions which work over the coefficient field.
    for (idx, (d, dvp, m)) in active.iter().enumerate() {
        if idx + 1 == active.len() {
            // last block: remaining_den = dvp^m * var-free unit
            let unit = {
                let (q, r) = remaining_den.divrem(&dvp.pow(*m));
                debug_assert!(r.is_zero());
                debug_assert!(q.is_constant());
                q.coeff(0)
            };
            push_power_parts(&rem.scale(&unit.inv()), d, dvp, *m, &mut parts);
        } else {
            let dm = dvp.pow(*m);
            let rest = {
                let (q, r) = remaining_den.divrem(&dm);
                debug_assert!(r.is_zero());
                q
            };
            let (b_rest, b_this) = bezout_split(&rem, &rest, &dm)?;
            push_power_parts(&b_this, d, dvp, *m, &mut parts);
            rem = b_rest;
            remaining_den = rest;
        }
    }
    if active.is_empty() {
        // purely var-free denominator: fold into the polynomial part
        let unit = remaining_den.coeff(0);
        if !rem.is_zero() {
            poly_part = poly_part.add(&rem.scale(&unit.inv()));
        }
    }
    Ok(PartialFractions {
        var,
        poly_part,
        parts,
    })
}

/// d-adic expansion: `num = sum_j a_j d^j` with `deg a_j < deg d`, so
/// `num/d^m = sum_j a_j / d^(m-j)`.
fn push_power_parts(
    num: &VarPoly,
    d: &MPoly,
    dvp: &VarPoly,
    m: u32,
    parts: &mut Vec<(MPoly, u32, VarPoly)>,
) {
    let mut cur = num.clone();
    let mut j = 0u32;
    while !cur.is_zero() && j < m {
        let (q, a) = cur.divrem(dvp);
        if !a.is_zero() {
            parts.push((d.clone(), m - j, a));
        }
        cur = q;
        j += 1;
    }
    debug_assert!(cur.is_zero(), "numerator degree exceeded factor power bound");
}

struct VarVpParts;

impl VarVpParts {
    fn of(f: &RatFun, var: Var) -> (VarPoly, VarPoly) {
        let (n, d) = VarPoly::fraction_parts(f, var);
        let lead_inv = d.leading().inv();
        (n.scale(&lead_inv), d.scale(&lead_inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }

    #[test]
    fn partial_fraction_linear_system_oracle() {
        // (z+1)/(z^2 (z-1)) = -2/z - 1/z^2 + 2/(z-1)
        let f = RatFun::new(
            z().add(&MPoly::one()),
            z().pow(2).mul(&z().sub(&MPoly::one())),
        )
        .unwrap();
        let den = FactoredDen::new(
            Coeff::one(),
            vec![(z(), 2), (z().sub(&MPoly::one()), 1)],
        )
        .unwrap();
        let pf = partial_fraction(&f, Var::Z, &den).unwrap();
        assert!(pf.poly_part.is_zero());
        assert_eq!(pf.reconstruct(), f);
        // expected three simple parts
        assert_eq!(pf.parts.len(), 3);
        for (d, k, num) in &pf.parts {
            let n = num.to_ratfun();
            if *d == z() && *k == 1 {
                assert_eq!(n, RatFun::from_i64(-2));
            } else if *d == z() && *k == 2 {
                assert_eq!(n, RatFun::from_i64(-1));
            } else {
                assert_eq!((d.clone(), *k), (z().sub(&MPoly::one()), 1));
                assert_eq!(n, RatFun::from_i64(2));
            }
        }
    }

    #[test]
    fn partial_fraction_single_factor_identity() {
        let den_poly = z().pow(2).sub(&y());
        let f = RatFun::new(MPoly::one(), den_poly.clone()).unwrap();
        let den = FactoredDen::new(Coeff::one(), vec![(den_poly.clone(), 1)]).unwrap();
        let pf = partial_fraction(&f, Var::Z, &den).unwrap();
        assert!(pf.poly_part.is_zero());
        assert_eq!(pf.parts.len(), 1);
        assert_eq!(pf.reconstruct(), f);
    }

    #[test]
    fn partial_fraction_bad_factorization() {
        let f = RatFun::new(MPoly::one(), z().sub(&MPoly::one())).unwrap();
        let den = FactoredDen::new(Coeff::one(), vec![(z(), 1)]).unwrap();
        assert!(matches!(
            partial_fraction(&f, Var::Z, &den),
            Err(Error::BadFactorization(_))
        ));
    }

    #[test]
    fn bezout_split_identity() {
        // 1/(y(y+1)) = 1/y - 1/(y+1), i.e. B1 = 1 (over y), B2 = -1
        let c1 = VarPoly::from_mpoly_full(&y(), Var::Y);
        let c2 = VarPoly::from_mpoly_full(&y().add(&MPoly::one()), Var::Y);
        let b = VarPoly::one(Var::Y);
        let (b1, b2) = bezout_split(&b, &c1, &c2).unwrap();
        let lhs = &b.to_ratfun() / &c1.mul(&c2).to_ratfun();
        let rhs = &(&b1.to_ratfun() / &c1.to_ratfun()) + &(&b2.to_ratfun() / &c2.to_ratfun());
        assert_eq!(lhs, rhs);
        assert_eq!(b1.to_ratfun(), RatFun::one());
        assert_eq!(b2.to_ratfun(), RatFun::from_i64(-1));
    }

    #[test]
    fn bezout_split_unit_cofactor() {
        let c1 = VarPoly::from_mpoly_full(&y(), Var::Y);
        let b = VarPoly::from_coeffs(Var::Y, vec![RatFun::from_i64(3)]);
        let (b1, b2) = bezout_split(&b, &c1, &VarPoly::one(Var::Y)).unwrap();
        assert_eq!(b1, b);
        assert!(b2.is_zero());
    }

    #[test]
    fn bezout_split_not_coprime() {
        let c1 = VarPoly::from_mpoly_full(&y(), Var::Y);
        assert!(matches!(
            bezout_split(&VarPoly::one(Var::Y), &c1, &c1),
            Err(Error::NotCoprime(_))
        ));
    }

    #[test]
    fn bezout_split_xgcd_oracle() {
        // (x, y, y+x^2) in var y: verified by reconstruction
        let x = MPoly::var(Var::X);
        let b = VarPoly::from_mpoly_full(&x, Var::Y);
        let c1 = VarPoly::from_mpoly_full(&y(), Var::Y);
        let c2 = VarPoly::from_mpoly_full(&y().add(&x.pow(2)), Var::Y);
        let (b1, b2) = bezout_split(&b, &c1, &c2).unwrap();
        let lhs = &b.to_ratfun() / &c1.mul(&c2).to_ratfun();
        let rhs = &(&b1.to_ratfun() / &c1.to_ratfun()) + &(&b2.to_ratfun() / &c2.to_ratfun());
        assert_eq!(lhs, rhs);
        assert!(b2.degree() < c2.degree());
    }
}
