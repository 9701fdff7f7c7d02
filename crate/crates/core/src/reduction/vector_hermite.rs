//! Vector Hermite reduction: multiplicity reduction for coordinate vectors
//! of algebraic functions relative to a derivation matrix. Factors of the
//! common denominator that are coprime to the matrix denominator lose all
//! multiplicity and collect into a squarefree part.

use crate::arith::{gcd_mpoly, Coeff, MPoly, RatFun, Var, VarPoly};
use crate::error::Error;

/// `avec = D_y(bvec) + bvec * M + rvec` with
/// `rvec = (1/(p*c)) * polynomial-vector`, `p` squarefree and coprime to
/// the matrix denominator `e`, and every irreducible factor of `c`
/// dividing `e`.
#[derive(Debug, Clone)]
pub struct VectorHermiteResult {
    pub bvec: Vec<RatFun>,
    pub rvec: Vec<RatFun>,
    pub p: MPoly,
    pub c: MPoly,
}

/// Reduce `avec` with respect to the derivation matrix `m`; the supplied
/// factor list covers the denominator of `avec`.
pub fn vector_hermite_reduce(
    avec: &[RatFun],
    m: &[Vec<RatFun>],
    factors: &[MPoly],
) -> Result<VectorHermiteResult, Error> {
    let n = avec.len();
    debug_assert!(m.len() == n && m.iter().all(|r| r.len() == n));
    // common denominator of the matrix
    let mut e = MPoly::one();
    for entry in m.iter().flatten() {
        let g = gcd_mpoly(&e, entry.den());
        e = e.mul(&entry.den().div_exact(&g).unwrap());
    }
    let mut bvec = vec![RatFun::zero(); n];
    let mut cur: Vec<RatFun> = avec.to_vec();

    loop {
        // common denominator of the current vector
        let mut d = MPoly::one();
        for c in &cur {
            let g = gcd_mpoly(&d, c.den());
            d = d.mul(&c.den().div_exact(&g).unwrap());
        }
        // find a factor of d with multiplicity >= 2 that is coprime to e
        let mut target: Option<(MPoly, u32)> = None;
        for f in factors {
            if !gcd_mpoly(f, &e).is_one() {
                continue;
            }
            let mut mult = 0u32;
            let mut rest = d.clone();
            while let Some(q) = rest.div_exact(f) {
                rest = q;
                mult += 1;
            }
            if mult >= 2 {
                target = Some((f.clone(), mult));
                break;
            }
        }
        let Some((p, mult)) = target else {
            break;
        };
        // one Hermite step: for a_i/(p^mult d1) write
        // a_i = s_i p + t_i D_y(p) d1 and integrate by parts
        let dp = p.derivative(Var::Y);
        if dp.is_zero() {
            return Err(Error::BadFactorization(format!(
                "factor {} is y-free; vector reduction needs y-dependence",
                p
            )));
        }
        let d1 = {
            let mut rest = d.clone();
            for _ in 0..mult {
                rest = rest.div_exact(&p).unwrap();
            }
            rest
        };
        let pvp = VarPoly::from_mpoly_full(&p, Var::Y);
        let rhs_vp = VarPoly::from_mpoly_full(&dp.mul(&d1), Var::Y);
        let (g, s, t) = pvp.xgcd(&rhs_vp);
        if g.degree() != 0 {
            return Err(Error::NotCoprime(format!(
                "{} is not squarefree against the denominator",
                p
            )));
        }
        let ginv = g.coeff(0).inv();
        let km1 = Coeff::from_i64(mult as i64 - 1);
        let d1r = RatFun::from_mpoly(d1.clone());
        let pk1 = RatFun::from_mpoly(p.pow(mult - 1));
        let mut next = vec![RatFun::zero(); n];
        let mut u_over = vec![RatFun::zero(); n];
        for i in 0..n {
            let num = &cur[i] * &RatFun::from_mpoly(d.clone());
            debug_assert!(num.is_polynomial());
            let num_vp = VarPoly::from_mpoly_full(num.num(), Var::Y);
            let si = num_vp.mul(&s).scale(&ginv);
            let ti = num_vp.mul(&t).scale(&ginv);
            // keep t_i below p: fold the quotient back into s_i
            let (tq, tr) = ti.divrem(&pvp);
            let si = si.add(&tq.mul(&rhs_vp));
            // u_i = t_i/(1-mult) sits under p^(mult-1)
            let ui = tr.to_ratfun().scale(&(&Coeff::zero() - &km1).inv());
            u_over[i] = &ui / &pk1;
            // remainder piece (s_i + D_y(t_i) d1/(mult-1)) / (p^(mult-1) d1)
            let vi = &si.to_ratfun()
                + &(&tr.derivative_main().to_ratfun().scale(&km1.inv()) * &d1r);
            next[i] = &vi / &RatFun::from_mpoly(p.pow(mult - 1).mul(&d1));
        }
        for i in 0..n {
            bvec[i] = &bvec[i] + &u_over[i];
        }
        // the matrix action of the new certificate piece joins the remainder
        for k in 0..n {
            let mut matrow = RatFun::zero();
            for (j, um) in u_over.iter().enumerate() {
                matrow = &matrow + &(um * &m[j][k]);
            }
            next[k] = &next[k] - &matrow;
        }
        cur = next;
    }

    // split the final denominator into the squarefree part coprime to e and
    // the e-supported part
    let mut d = MPoly::one();
    for c in &cur {
        let g = gcd_mpoly(&d, c.den());
        d = d.mul(&c.den().div_exact(&g).unwrap());
    }
    let mut p_out = MPoly::one();
    let mut c_out = MPoly::one();
    let mut rest = d.clone();
    for f in factors {
        let mut mult = 0u32;
        while let Some(q) = rest.div_exact(f) {
            rest = q;
            mult += 1;
        }
        if mult == 0 {
            continue;
        }
        if gcd_mpoly(f, &e).is_one() {
            debug_assert_eq!(mult, 1, "multiplicity must be fully reduced");
            p_out = p_out.mul(&f.pow(mult));
        } else {
            c_out = c_out.mul(&f.pow(mult));
        }
    }
    if !rest.is_constant() {
        // denominator parts outside the supplied factors come from e
        c_out = c_out.mul(&rest);
    }
    Ok(VectorHermiteResult {
        bvec,
        rvec: cur,
        p: p_out.monic(),
        c: c_out.monic(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::AlgebraicElement;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }
    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }

    fn verify(res: &VectorHermiteResult, avec: &[RatFun], m: &[Vec<RatFun>]) {
        let n = avec.len();
        for k in 0..n {
            let mut lhs = res.bvec[k].derivative(Var::Y);
            for i in 0..n {
                lhs = &lhs + &(&res.bvec[i] * &m[i][k]);
            }
            lhs = &lhs + &res.rvec[k];
            assert_eq!(&lhs, &avec[k], "reconstruction failed at coordinate {}", k);
        }
    }

    #[test]
    fn nothing_to_reduce() {
        // avec with denominator dividing e: bvec = 0, p = 1
        let d = z().pow(2).sub(&y());
        let m = AlgebraicElement::derivation_matrix(&d, Var::Y);
        let avec = vec![RatFun::new(MPoly::one(), y()).unwrap(), RatFun::zero()];
        let res = vector_hermite_reduce(&avec, &m, &[y()]).unwrap();
        assert!(res.bvec.iter().all(|b| b.is_zero()));
        assert!(res.p.is_one());
        verify(&res, &avec, &m);
    }

    #[test]
    fn split_coordinates_stay() {
        // alpha = x/(2 sqrt(y)): coords (0, x/(2y)) over z^2-y: p = 1
        let d = z().pow(2).sub(&y());
        let m = AlgebraicElement::derivation_matrix(&d, Var::Y);
        let avec = vec![
            RatFun::zero(),
            RatFun::new(x(), y().scale(&Coeff::from_i64(2))).unwrap(),
        ];
        let res = vector_hermite_reduce(&avec, &m, &[y()]).unwrap();
        assert!(res.p.is_one());
        verify(&res, &avec, &m);
    }

    #[test]
    fn multiplicity_drops() {
        // avec = (1/(y-1)^2, 0) over z^2-y: (y-1) is coprime to e = 2y,
        // multiplicity reduces to one
        let d = z().pow(2).sub(&y());
        let m = AlgebraicElement::derivation_matrix(&d, Var::Y);
        let w = y().sub(&MPoly::one());
        let avec = vec![RatFun::new(MPoly::one(), w.pow(2)).unwrap(), RatFun::zero()];
        let res = vector_hermite_reduce(&avec, &m, &[w.clone(), y()]).unwrap();
        verify(&res, &avec, &m);
        for r in &res.rvec {
            assert!(r.den().div_exact(&w.pow(2)).is_none());
        }
    }
}
