//! Complete rational solution sets for polynomial shift equations: all
//! rational vectors `b` with `p1(v + b) = p2(v)` over a chosen set of shift
//! variables. The solution set of such an equation is empty or an affine
//! subspace, and matching all first derivatives reduces the problem
//! degree by one, so a memoized recursion over derivative multi-indices
//! followed by one linear correction solves it exactly.

use crate::arith::{MPoly, Var};
use crate::linalg;
use num::{BigRational, One, Zero};
use std::collections::HashMap;

/// A nonempty affine subspace of `Q^n`: `point + span(dirs)`.
#[derive(Debug, Clone)]
pub struct AffineSet {
    pub point: Vec<BigRational>,
    pub dirs: Vec<Vec<BigRational>>,
}

impl AffineSet {
    pub fn whole(n: usize) -> AffineSet {
        AffineSet {
            point: vec![BigRational::zero(); n],
            dirs: (0..n)
                .map(|i| {
                    let mut v = vec![BigRational::zero(); n];
                    v[i] = BigRational::one();
                    v
                })
                .collect(),
        }
    }

    pub fn single(point: Vec<BigRational>) -> AffineSet {
        AffineSet {
            point,
            dirs: Vec::new(),
        }
    }

    /// Intersection; `None` when empty.
    pub fn intersect(&self, other: &AffineSet) -> Option<AffineSet> {
        // solve self.point + A s = other.point + B t
        let n = self.point.len();
        let cols = self.dirs.len() + other.dirs.len();
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(cols);
            for d in &self.dirs {
                row.push(d[i].clone());
            }
            for d in &other.dirs {
                row.push(-d[i].clone());
            }
            rows.push(row);
            rhs.push(&other.point[i] - &self.point[i]);
        }
        let (part, kernel) = linalg::solve_affine(&rows, &rhs)?;
        let embed = |sv: &[BigRational]| -> Vec<BigRational> {
            (0..n)
                .map(|i| {
                    self.dirs
                        .iter()
                        .zip(sv.iter())
                        .map(|(d, s)| &d[i] * s)
                        .sum::<BigRational>()
                })
                .collect()
        };
        let point: Vec<BigRational> = (0..n)
            .map(|i| &self.point[i] + &embed(&part[..self.dirs.len()])[i])
            .collect();
        let mut dirs = Vec::new();
        for k in kernel {
            let d = embed(&k[..self.dirs.len()]);
            if d.iter().any(|c| !c.is_zero()) {
                dirs.push(d);
            }
        }
        // prune to an independent basis
        let mut m = dirs.clone();
        let pivots = row_reduce_basis(&mut m);
        dirs = pivots;
        Some(AffineSet { point, dirs })
    }
}

fn row_reduce_basis(rows: &mut Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    'next: for r in rows.drain(..) {
        let mut v = r;
        for b in &basis {
            // eliminate using the pivot of b
            let p = b.iter().position(|c| !c.is_zero()).unwrap();
            if !v[p].is_zero() {
                let f = &v[p] / &b[p];
                for (vi, bi) in v.iter_mut().zip(b.iter()) {
                    *vi -= &f * bi;
                }
            }
        }
        if v.iter().all(|c| c.is_zero()) {
            continue 'next;
        }
        basis.push(v);
    }
    basis
}

/// All rational `b` with `p1` shifted by `b` (over `vars`) equal to `p2`.
pub fn solve_shift_affine(p1: &MPoly, p2: &MPoly, vars: &[Var]) -> Option<AffineSet> {
    let mut memo: HashMap<Vec<u32>, Option<AffineSet>> = HashMap::new();
    solve_rec(p1, p2, vars, &vec![0; vars.len()], &mut memo)
}

fn derive(p: &MPoly, vars: &[Var], alpha: &[u32]) -> MPoly {
    let mut out = p.clone();
    for (i, &k) in alpha.iter().enumerate() {
        for _ in 0..k {
            out = out.derivative(vars[i]);
        }
    }
    out
}

fn solve_rec(
    p1: &MPoly,
    p2: &MPoly,
    vars: &[Var],
    alpha: &Vec<u32>,
    memo: &mut HashMap<Vec<u32>, Option<AffineSet>>,
) -> Option<AffineSet> {
    if let Some(res) = memo.get(alpha) {
        return res.clone();
    }
    let p = derive(p1, vars, alpha);
    let r = derive(p2, vars, alpha);
    let res = solve_pair(&p, &r, vars, alpha, memo, p1, p2);
    memo.insert(alpha.clone(), res.clone());
    res
}

#[allow(clippy::too_many_arguments)]
fn solve_pair(
    p: &MPoly,
    r: &MPoly,
    vars: &[Var],
    alpha: &[u32],
    memo: &mut HashMap<Vec<u32>, Option<AffineSet>>,
    p1: &MPoly,
    p2: &MPoly,
) -> Option<AffineSet> {
    let n = vars.len();
    let free_of_vars = |m: &MPoly| vars.iter().all(|&v| !m.depends_on(v));
    if free_of_vars(p) {
        return if p == r {
            Some(AffineSet::whole(n))
        } else {
            None
        };
    }
    let mut set = AffineSet::whole(n);
    for (i, &v) in vars.iter().enumerate() {
        let dp = p.derivative(v);
        let dr = r.derivative(v);
        if dp.is_zero() {
            if dr.is_zero() {
                continue;
            }
            return None;
        }
        if dr.is_zero() {
            return None;
        }
        let mut na = alpha.to_vec();
        na[i] += 1;
        let child = solve_rec(p1, p2, vars, &na, memo)?;
        set = set.intersect(&child)?;
    }
    // set now collects all b with shifted(p) - r free of the vars; one
    // linear correction pins down the exact solutions
    let shift_by = |m: &MPoly, b: &[BigRational]| -> MPoly {
        let mut out = m.clone();
        for (i, &v) in vars.iter().enumerate() {
            out = out.shift_var(v, &b[i]);
        }
        out
    };
    let h = shift_by(p, &set.point).sub(r);
    debug_assert!(free_of_vars(&h));
    let kappas: Vec<MPoly> = set
        .dirs
        .iter()
        .map(|w| shift_by(p, w).sub(p))
        .collect();
    debug_assert!(kappas.iter().all(|k| free_of_vars(k)));
    // solve h + sum t_i kappa_i = 0 over rational t
    let (t0, tdirs) = solve_mpoly_combination(&kappas, &h.neg())?;
    let combine = |t: &[BigRational]| -> Vec<BigRational> {
        (0..n)
            .map(|i| {
                set.dirs
                    .iter()
                    .zip(t.iter())
                    .map(|(d, s)| &d[i] * s)
                    .sum::<BigRational>()
            })
            .collect()
    };
    let point: Vec<BigRational> = (0..n)
        .map(|i| &set.point[i] + &combine(&t0)[i])
        .collect();
    let mut dirs: Vec<Vec<BigRational>> = tdirs
        .iter()
        .map(|t| combine(t))
        .filter(|d| d.iter().any(|c| !c.is_zero()))
        .collect();
    let reduced = row_reduce_basis(&mut dirs);
    Some(AffineSet {
        point,
        dirs: reduced,
    })
}

/// Solve `sum_i t_i k_i = rhs` for rational `t`: flatten the polynomial
/// identity over monomials and powers of `q`.
pub fn solve_mpoly_combination(
    kappas: &[MPoly],
    rhs: &MPoly,
) -> Option<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    use crate::arith::QPoly;
    let ncols = kappas.len();
    // collect all monomials
    let mut monomials: Vec<crate::arith::Exp> = Vec::new();
    for m in kappas.iter().chain(std::iter::once(rhs)) {
        for (e, _) in m.terms() {
            monomials.push(*e);
        }
    }
    monomials.sort();
    monomials.dedup();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rvec: Vec<BigRational> = Vec::new();
    for e in &monomials {
        // coefficients across kappas and rhs as Q(q) elements; clear the
        // common q-denominator and match q-powers
        let coeffs: Vec<crate::arith::Coeff> = kappas
            .iter()
            .map(|k| k.coeff(e))
            .chain(std::iter::once(rhs.coeff(e)))
            .collect();
        let mut den = QPoly::one();
        for c in &coeffs {
            let g = den.gcd(c.den());
            den = den.mul(&c.den().div_exact(&g).unwrap());
        }
        let cleared: Vec<QPoly> = coeffs
            .iter()
            .map(|c| c.num().mul(&den.div_exact(c.den()).unwrap()))
            .collect();
        let maxdeg = cleared.iter().map(|p| p.degree()).max().unwrap_or(-1);
        for k in 0..=maxdeg.max(0) {
            let row: Vec<BigRational> = cleared[..ncols]
                .iter()
                .map(|p| p.coeff(k as usize))
                .collect();
            let rv = cleared[ncols].coeff(k as usize);
            if row.iter().all(|c| c.is_zero()) && rv.is_zero() {
                continue;
            }
            rows.push(row);
            rvec.push(rv);
        }
    }
    if rows.is_empty() {
        return Some((
            vec![BigRational::zero(); ncols],
            (0..ncols)
                .map(|i| {
                    let mut v = vec![BigRational::zero(); ncols];
                    v[i] = BigRational::one();
                    v
                })
                .collect(),
        ));
    }
    linalg::solve_affine(&rows, &rvec)
}

/// Deterministic small integer point of an affine set, if any.
pub fn integer_witness(set: &AffineSet) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
    let (point, basis) = linalg::integer_points_of_affine(&set.point, &set.dirs)?;
    Some((reduce_point(point, &basis), basis))
}

/// Greedy size reduction of a lattice point modulo a basis.
fn reduce_point(mut point: Vec<i64>, basis: &[Vec<i64>]) -> Vec<i64> {
    let norm = |v: &[i64]| -> i128 { v.iter().map(|&x| (x as i128) * (x as i128)).sum() };
    let mut improved = true;
    let mut rounds = 0;
    while improved && rounds < 32 {
        improved = false;
        rounds += 1;
        for b in basis {
            // integer multiple of b minimizing |point - k b|
            let dot: i128 = point
                .iter()
                .zip(b.iter())
                .map(|(&p, &q)| (p as i128) * (q as i128))
                .sum();
            let bb = norm(b);
            if bb == 0 {
                continue;
            }
            let k = ((2 * dot + bb) as f64 / (2 * bb) as f64).floor() as i64;
            if k != 0 {
                let cand: Vec<i64> = point
                    .iter()
                    .zip(b.iter())
                    .map(|(&p, &q)| p - k * q)
                    .collect();
                if norm(&cand) < norm(&point) {
                    point = cand;
                    improved = true;
                }
            }
        }
    }
    point
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
    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }

    fn br(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn unique_shift() {
        // p1 = x^2 + y, p2 = p1(x+1, y+2)
        let p1 = x().pow(2).add(&y());
        let p2 = p1.shift_var_i64(Var::X, 1).shift_var_i64(Var::Y, 2);
        let set = solve_shift_affine(&p1, &p2, &[Var::X, Var::Y]).unwrap();
        assert!(set.dirs.is_empty());
        assert_eq!(set.point, vec![br(1), br(2)]);
    }

    #[test]
    fn no_integer_solution() {
        // x^2+y vs x^2+y+x admits only the rational shift (1/2, -1/4)
        let p1 = x().pow(2).add(&y());
        let p2 = x().pow(2).add(&y()).add(&x());
        let set = solve_shift_affine(&p1, &p2, &[Var::X, Var::Y]).unwrap();
        assert!(set.dirs.is_empty());
        assert_eq!(set.point, vec![BigRational::new(1.into(), 2.into()),
                                   BigRational::new((-1).into(), 4.into())]);
        assert!(integer_witness(&set).is_none());
        // a genuinely inconsistent pair
        let p3 = x().pow(2).add(&y().pow(2));
        assert!(solve_shift_affine(&p1, &p3, &[Var::X, Var::Y]).is_none());
    }

    #[test]
    fn degenerate_direction_line() {
        // p = (x+y)^2: solutions of sigma_b p = p(x,y)+shifted by (1,-1) form a line
        let p = x().add(&y()).pow(2);
        let p2 = p.shift_var_i64(Var::X, 3);
        let set = solve_shift_affine(&p, &p2, &[Var::X, Var::Y]).unwrap();
        assert_eq!(set.dirs.len(), 1);
        // (3,0) must be in the set: point + t*dir
        let (w, basis) = integer_witness(&set).unwrap();
        assert_eq!(basis.len(), 1);
        // verify the witness exactly
        let shifted = p.shift_var_i64(Var::X, w[0]).shift_var_i64(Var::Y, w[1]);
        assert_eq!(shifted, p2);
    }

    #[test]
    fn inert_variable_blocks_equivalence() {
        // z^2+2x+y vs z^2+2x+y+1 over y: shift 1
        let p1 = z().pow(2).add(&x().scale(&crate::arith::Coeff::from_i64(2))).add(&y());
        let p2 = p1.shift_var_i64(Var::Y, 1);
        let set = solve_shift_affine(&p1, &p2, &[Var::Y]).unwrap();
        assert_eq!(set.point, vec![br(1)]);
        assert!(set.dirs.is_empty());
        // but z^2+2x+y vs z^2+2qx+y are not shift equivalent in y
        let p3 = z()
            .pow(2)
            .add(&x().scale(&crate::arith::Coeff::q_power(1)).scale(&crate::arith::Coeff::from_i64(2)))
            .add(&y());
        assert!(solve_shift_affine(&p1, &p3, &[Var::Y]).is_none());
    }

    #[test]
    fn rational_point_without_integer_witness() {
        // p1 = 2x, p2 = 2x+1: b = 1/2 rational only
        let p1 = x().scale(&crate::arith::Coeff::from_i64(2));
        let p2 = p1.add(&MPoly::one());
        let set = solve_shift_affine(&p1, &p2, &[Var::X]).unwrap();
        assert_eq!(set.point, vec![BigRational::new(1.into(), 2.into())]);
        assert!(integer_witness(&set).is_none());
    }
}
