//! Integer-linear and q-integer-linear shape detection: the structural
//! conditions behind the bivariate proper/q-proper criteria.

use crate::arith::{content, gcd_mpoly, Coeff, Exp, MPoly, RatFun, Var};
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// `p = r(a_1 v_1 + ... + a_k v_k)` with a primitive integer direction;
/// the coefficients of `r` may involve the variables not listed. Detected
/// via proportionality of partial derivatives, verified by resubstitution.
pub fn integer_linear(p: &MPoly, vars: &[Var]) -> Option<(Vec<i64>, Vec<MPoly>)> {
    assert!(!p.is_zero());
    let partials: Vec<MPoly> = vars.iter().map(|&v| p.derivative(v)).collect();
    let Some(pivot) = partials.iter().position(|d| !d.is_zero()) else {
        // free of all the listed variables: constant shape
        return Some((vec![0; vars.len()], vec![p.clone()]));
    };
    // ratios d_j / d_pivot must be rational constants
    let mut ratios: Vec<BigRational> = Vec::new();
    for (j, d) in partials.iter().enumerate() {
        if j == pivot {
            ratios.push(BigRational::one());
            continue;
        }
        if d.is_zero() {
            ratios.push(BigRational::zero());
            continue;
        }
        let (e, c) = d.leading()?;
        let (ep, cp) = partials[pivot].leading()?;
        if e != ep {
            return None;
        }
        let ratio = c / cp;
        let ratio = ratio.as_rational()?;
        // cross check d = ratio * d_pivot
        if *d != partials[pivot].scale(&Coeff::from_rational(ratio.clone())) {
            return None;
        }
        ratios.push(ratio);
    }
    // primitive integer direction
    let mut denlcm = BigInt::one();
    for r in &ratios {
        denlcm = denlcm.lcm(r.denom());
    }
    let mut dir: Vec<BigInt> = ratios
        .iter()
        .map(|r| (r * BigRational::from_integer(denlcm.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for d in &dir {
        g = g.gcd(d);
    }
    if !g.is_zero() && !g.is_one() {
        for d in dir.iter_mut() {
            *d /= &g;
        }
    }
    if dir.iter().find(|d| !d.is_zero()).is_some_and(|d| d.is_negative()) {
        for d in dir.iter_mut() {
            *d = -d.clone();
        }
    }
    let dir: Vec<i64> = dir
        .into_iter()
        .map(|d| i64::try_from(d).ok())
        .collect::<Option<Vec<_>>>()?;
    // recover r by restricting all listed vars except the pivot to zero
    let a_pivot = dir[pivot];
    debug_assert!(a_pivot != 0);
    let mut images: [Option<MPoly>; 3] = [None, None, None];
    for (j, v) in vars.iter().enumerate() {
        if j != pivot {
            images[v.index()] = Some(MPoly::zero());
        }
    }
    let restricted = p.subst_simultaneous(&images);
    let r_coeffs: Vec<MPoly> = restricted
        .univar_coeffs(vars[pivot])
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.scale(&Coeff::from_i64(a_pivot).pow(i as i64).inv()))
        .collect();
    // verify p = r(w) with w = sum a_i v_i
    let mut w = MPoly::zero();
    for (j, v) in vars.iter().enumerate() {
        w = w.add(&MPoly::var(*v).scale(&Coeff::from_i64(dir[j])));
    }
    let mut back = MPoly::zero();
    for c in r_coeffs.iter().rev() {
        back = back.mul(&w).add(c);
    }
    if back != *p {
        return None;
    }
    Some((dir, r_coeffs))
}

/// `p = (prod v_i^{m_i}) * r(prod v_i^{a_i})` with integer exponents:
/// detected by the support lying on a line in the exponent lattice,
/// verified by resubstitution. Returns `(monomial exponents, direction,
/// r-coefficients)`.
pub fn q_integer_linear(p: &MPoly, vars: &[Var]) -> Option<(Vec<i64>, Vec<i64>, Vec<MPoly>)> {
    assert!(!p.is_zero());
    // support points projected to the listed variables, with the rest of
    // each term collected per point
    let mut support: Vec<Vec<i64>> = Vec::new();
    for (e, _) in p.terms() {
        let pt: Vec<i64> = vars.iter().map(|v| e.get(*v) as i64).collect();
        if !support.contains(&pt) {
            support.push(pt);
        }
    }
    support.sort();
    let base = support[0].clone();
    if support.len() == 1 {
        // pure monomial shape
        let coeff = strip_monomial(p, vars, &base);
        return Some((base, vec![0; vars.len()], vec![coeff]));
    }
    // direction: primitive vector along the line
    let mut dir: Vec<i64> = support[1].iter().zip(base.iter()).map(|(a, b)| a - b).collect();
    let mut g = 0i64;
    for d in &dir {
        g = num::integer::gcd(g, *d);
    }
    if g != 0 {
        for d in dir.iter_mut() {
            *d /= g;
        }
    }
    if dir.iter().find(|d| **d != 0).is_some_and(|d| *d < 0) {
        for d in dir.iter_mut() {
            *d = -*d;
        }
    }
    // every support point must be base + t*dir with t >= 0 integer
    let mut steps: Vec<(i64, Vec<i64>)> = Vec::new();
    for pt in &support {
        let diff: Vec<i64> = pt.iter().zip(base.iter()).map(|(a, b)| a - b).collect();
        let t = project_step(&diff, &dir)?;
        steps.push((t, pt.clone()));
    }
    steps.sort();
    let max_t = steps.last().unwrap().0;
    let mut r_coeffs: Vec<MPoly> = vec![MPoly::zero(); max_t as usize + 1];
    for (t, pt) in &steps {
        r_coeffs[*t as usize] = strip_monomial(p, vars, pt);
    }
    // verify: p = prod v^base * sum r_t (prod v^dir)^t as rational functions
    let mono = |exps: &[i64]| -> RatFun {
        let mut out = RatFun::one();
        for (j, v) in vars.iter().enumerate() {
            out = &out * &RatFun::var(*v).pow(exps[j]);
        }
        out
    };
    let w = mono(&dir);
    let mut back = RatFun::zero();
    for c in r_coeffs.iter().rev() {
        back = &(&back * &w) + &RatFun::from_mpoly(c.clone());
    }
    back = &back * &mono(&base);
    if back != RatFun::from_mpoly(p.clone()) {
        return None;
    }
    Some((base, dir, r_coeffs))
}

fn strip_monomial(p: &MPoly, vars: &[Var], pt: &[i64]) -> MPoly {
    let mut out = MPoly::zero();
    for (e, c) in p.terms() {
        let matches = vars
            .iter()
            .enumerate()
            .all(|(j, v)| e.get(*v) as i64 == pt[j]);
        if matches {
            let mut ne = e.0;
            for v in vars {
                ne[v.index()] = 0;
            }
            out = out.add(&MPoly::monomial(c.clone(), Exp(ne)));
        }
    }
    out
}

fn project_step(diff: &[i64], dir: &[i64]) -> Option<i64> {
    let k = dir.iter().position(|d| *d != 0)?;
    if diff[k] % dir[k] != 0 {
        return None;
    }
    let t = diff[k] / dir[k];
    for (a, b) in diff.iter().zip(dir.iter()) {
        if *a != t * b {
            return None;
        }
    }
    Some(t)
}

/// A rational function of `va, vb` is annihilated by an operator in the
/// first variable alone exactly when its denominator splits into a part
/// free of `vb` times a part free of `va`. Returns that split.
pub fn rational_separable(r: &RatFun, va: Var, vb: Var) -> Option<(MPoly, MPoly)> {
    let den = r.den();
    if den.is_constant() {
        return Some((MPoly::one(), MPoly::one()));
    }
    // the va-only part is the content with respect to vb and vice versa
    let a_part = content(den, vb); // free of vb
    let b_part = den.div_exact(&a_part).unwrap();
    if a_part.depends_on(vb) || b_part.depends_on(va) {
        return None;
    }
    debug_assert!(gcd_mpoly(&a_part, &b_part).is_one() || a_part.is_constant() || b_part.is_constant());
    Some((a_part, b_part))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }

    #[test]
    fn detects_linear_form() {
        // p = 2x + y: direction (2,1), r(T) = T
        let p = x().scale(&Coeff::from_i64(2)).add(&y());
        let (dir, r) = integer_linear(&p, &[Var::X, Var::Y]).unwrap();
        assert_eq!(dir, vec![2, 1]);
        assert_eq!(r.len(), 2);
        assert!(r[0].is_zero());
        assert!(r[1].is_one());
    }

    #[test]
    fn rejects_non_linear() {
        // x^2 + y: partials 2x and 1 are not proportional by a constant
        let p = x().pow(2).add(&y());
        assert!(integer_linear(&p, &[Var::X, Var::Y]).is_none());
    }

    #[test]
    fn constructed_shape_roundtrip() {
        // (x+y)^3 - 5(x+y)
        let w = x().add(&y());
        let p = w.pow(3).sub(&w.scale(&Coeff::from_i64(5)));
        let (dir, r) = integer_linear(&p, &[Var::X, Var::Y]).unwrap();
        assert_eq!(dir, vec![1, 1]);
        assert_eq!(r.len(), 4);
        assert_eq!(r[1], MPoly::from_i64(-5));
        assert!(r[3].is_one());
    }

    #[test]
    fn q_integer_linear_detects() {
        // p = x y^2 (1 + 3 x y^2): monomial (1,2), direction (1,2), r = 1 + 3T
        let m = x().mul(&y().pow(2));
        let p = m.mul(&MPoly::one().add(&m.scale(&Coeff::from_i64(3))));
        let (mono, dir, r) = q_integer_linear(&p, &[Var::X, Var::Y]).unwrap();
        assert_eq!(mono, vec![1, 2]);
        assert_eq!(dir, vec![1, 2]);
        assert_eq!(r.len(), 2);
        assert_eq!(r[1], MPoly::from_i64(3));
    }

    #[test]
    fn q_integer_linear_rejects() {
        // x + y: support {(1,0),(0,1)} lies on a line but reconstruction
        // needs direction (-1,1): x*(1 + x^{-1}y) works, so this IS
        // q-integer-linear; x + y + x^2 is not
        let p = x().add(&y()).add(&x().pow(2));
        assert!(q_integer_linear(&p, &[Var::X, Var::Y]).is_none());
    }

    #[test]
    fn q_integer_linear_monomial_degenerate() {
        let p = x().pow(3);
        let (mono, dir, r) = q_integer_linear(&p, &[Var::X, Var::Y]).unwrap();
        assert_eq!(mono, vec![3, 0]);
        assert_eq!(dir, vec![0, 0]);
        assert_eq!(r.len(), 1);
        assert!(r[0].is_one());
    }

    #[test]
    fn separable_splits() {
        // 1/(x^2 y) -> (x^2, y)
        let f = RatFun::new(MPoly::one(), x().pow(2).mul(&y())).unwrap();
        let (a, b) = rational_separable(&f, Var::X, Var::Y).unwrap();
        assert_eq!(a, x().pow(2));
        assert_eq!(b, y());
        // 1/(x+y) is not separable
        let f = RatFun::new(MPoly::one(), x().add(&y())).unwrap();
        assert!(rational_separable(&f, Var::X, Var::Y).is_none());
        // (x+y)/(x y (y+1)) -> (x, y(y+1))
        let f = RatFun::new(
            x().add(&y()),
            x().mul(&y()).mul(&y().add(&MPoly::one())),
        )
        .unwrap();
        let (a, b) = rational_separable(&f, Var::X, Var::Y).unwrap();
        assert_eq!(a, x());
        assert_eq!(b, y().mul(&y().add(&MPoly::one())));
    }
}
