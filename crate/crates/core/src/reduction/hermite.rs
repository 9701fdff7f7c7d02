//! Ostrogradsky--Hermite reduction: split off a derivative so that the
//! remainder has a squarefree denominator in the distinguished variable.

use crate::arith::{gcd_mpoly, squarefree_decompose, Coeff, MPoly, RatFun, Var, VarPoly};

/// Result of a Hermite-style reduction: `f = D_var(cert) + rem_num/rem_den`
/// with the remainder proper and its denominator squarefree in `var`.
#[derive(Debug, Clone)]
pub struct HermiteResult {
    pub cert: RatFun,
    pub rem_num: MPoly,
    pub rem_den: MPoly,
}

impl HermiteResult {
    pub fn remainder(&self) -> RatFun {
        RatFun::new(self.rem_num.clone(), self.rem_den.clone()).unwrap()
    }
}

/// `f = D_var(g) + a/b` with `gcd(a,b) = 1`, `deg_var a < deg_var b`, `b`
/// squarefree in `var`; `a = 0` exactly when `f` is a `D_var`-derivative.
pub fn hermite_reduce(f: &RatFun, var: Var) -> HermiteResult {
    let (num, den) = VarPoly::fraction_parts(f, var);
    let lead_inv = den.leading().inv();
    let num = num.scale(&lead_inv);
    let den = den.scale(&lead_inv);
    let (poly, proper_num) = num.divrem(&den);

    // the polynomial part integrates termwise
    let mut cert = integrate_poly(&poly).to_ratfun();
    let mut remainder = RatFun::zero();

    if !proper_num.is_zero() {
        // split across the squarefree multiplicity layers
        let den_mpoly = f.den();
        let layers = squarefree_decompose(den_mpoly, var);
        let layer_polys: Vec<(VarPoly, u32)> = layers
            .iter()
            .map(|(p, m)| (VarPoly::from_mpoly_full(p, var), *m))
            .collect();
        // var-free content of the denominator is a unit here
        let unit = {
            let mut prod = VarPoly::one(var);
            for (p, m) in &layer_polys {
                prod = prod.mul(&p.pow(*m));
            }
            let (q, r) = den.divrem(&prod);
            debug_assert!(r.is_zero());
            debug_assert!(q.is_constant());
            q.coeff(0)
        };
        let mut rem = proper_num.scale(&unit.inv());
        let total = layer_polys.len();
        let mut parts: Vec<(VarPoly, u32, VarPoly)> = Vec::new();
        for i in 0..total {
            let (p, m) = layer_polys[i].clone();
            let pm = p.pow(m);
            if i + 1 == total {
                parts.push((p, m, rem.clone()));
            } else {
                let rest = {
                    let mut prod = VarPoly::one(var);
                    for (pp, mm) in layer_polys.iter().skip(i + 1) {
                        prod = prod.mul(&pp.pow(*mm));
                    }
                    prod
                };
                let (for_rest, for_this) = crate::arith::bezout_split(&rem, &rest, &pm)
                    .expect("squarefree layers are coprime");
                parts.push((p, m, for_this));
                rem = for_rest;
            }
        }
        for (p, m, a) in parts {
            let (g, r) = reduce_multiplicity(&a, &p, m);
            cert = &cert + &g;
            remainder = &remainder + &r;
        }
    }

    let rem_num = remainder.num().clone();
    let rem_den = remainder.den().clone();
    debug_assert!(gcd_mpoly(&rem_num, &rem_den).is_one());
    HermiteResult {
        cert,
        rem_num,
        rem_den,
    }
}

/// Termwise antiderivative of a polynomial in its main variable.
fn integrate_poly(p: &VarPoly) -> VarPoly {
    let var = p.var;
    let mut coeffs = vec![RatFun::zero()];
    for (i, c) in p.coeffs().iter().enumerate() {
        coeffs.push(c.scale(&Coeff::from_i64(i as i64 + 1).inv()));
    }
    VarPoly::from_coeffs(var, coeffs)
}

/// `a / p^m` with `p` squarefree: peel multiplicities by integration by
/// parts until the remainder sits over `p` itself.
fn reduce_multiplicity(a: &VarPoly, p: &VarPoly, m: u32) -> (RatFun, RatFun) {
    let dp = p.derivative_main();
    let mut cert = RatFun::zero();
    let mut cur = a.clone();
    let mut mult = m;
    let (g, _, t) = p.xgcd(&dp);
    debug_assert_eq!(g.degree(), 0);
    let tg = t.scale(&g.coeff(0).inv());
    while mult > 1 {
        // solve u p + w p' = cur with deg w < deg p
        let (_, w) = cur.mul(&tg).divrem(p);
        let u = {
            let diff = cur.sub(&w.mul(&dp));
            let (q, r) = diff.divrem(p);
            debug_assert!(r.is_zero());
            q
        };
        // cur/p^mult = D(-w/((mult-1) p^(mult-1))) + (u + w'/(mult-1))/p^(mult-1)
        let k = Coeff::from_i64(mult as i64 - 1);
        let pk = p.pow(mult - 1).to_ratfun();
        cert = &cert + &(&w.scale(&RatFun::constant(k.inv())).neg().to_ratfun() / &pk);
        cur = u.add(&w.derivative_main().scale(&RatFun::constant(k.inv())));
        mult -= 1;
    }
    let den = p.to_ratfun();
    (cert, &cur.to_ratfun() / &den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::{apply_atomic, OpKind, OperatorKind};

    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }

    fn check(f: &RatFun, var: Var) -> HermiteResult {
        let res = hermite_reduce(f, var);
        let d = apply_atomic(OperatorKind::new(var, OpKind::Derivation), &res.cert);
        let back = &d + &res.remainder();
        assert_eq!(&back, f, "reconstruction failed for {}", f);
        // b squarefree in var
        let db = res.rem_den.derivative(var);
        if !db.is_zero() {
            assert!(gcd_mpoly(&res.rem_den, &db).is_one());
        }
        assert!(res.rem_num.deg(var) < res.rem_den.deg(var) || res.rem_num.is_zero());
        res
    }

    #[test]
    fn pure_derivative() {
        // 1/(z-y)^2 = D_z(-1/(z-y))
        let f = RatFun::new(MPoly::one(), z().sub(&y()).pow(2)).unwrap();
        let res = check(&f, Var::Z);
        assert!(res.rem_num.is_zero());
        let expect = RatFun::new(MPoly::from_i64(-1), z().sub(&y())).unwrap();
        assert_eq!(res.cert, expect);
    }

    #[test]
    fn already_squarefree() {
        let f = RatFun::new(MPoly::one(), z().pow(2).sub(&y())).unwrap();
        let res = check(&f, Var::Z);
        assert!(res.cert.is_zero());
        assert_eq!(res.remainder(), f);
    }

    #[test]
    fn mixed_multiplicities() {
        // (z+1)/(z^2 (z-1)): cert 1/z, remainder 2/(z(z-1))
        let f = RatFun::new(
            z().add(&MPoly::one()),
            z().pow(2).mul(&z().sub(&MPoly::one())),
        )
        .unwrap();
        let res = check(&f, Var::Z);
        let expect_cert = RatFun::new(MPoly::one(), z()).unwrap();
        assert_eq!(res.cert, expect_cert);
        let expect_rem = RatFun::new(
            MPoly::from_i64(2),
            z().mul(&z().sub(&MPoly::one())),
        )
        .unwrap();
        assert_eq!(res.remainder(), expect_rem);
    }

    #[test]
    fn polynomial_part_integrates() {
        // f = z^2 + y + 1/(z-y)
        let f = &RatFun::from_mpoly(z().pow(2).add(&y()))
            + &RatFun::new(MPoly::one(), z().sub(&y())).unwrap();
        check(&f, Var::Z);
    }
}
