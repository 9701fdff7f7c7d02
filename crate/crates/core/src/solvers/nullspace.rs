//! Linear relations with coefficients in `Q(q)(x)` among rational functions
//! of all three variables, found by clearing denominators and equating
//! coefficients of the `y,z`-monomials.

use crate::arith::{gcd_mpoly, Exp, MPoly, RatFun, Var};
use std::collections::BTreeSet;

/// Basis of all relations `sum_i e_i v_i = 0` with `e_i` free of `y` and
/// `z`.
pub fn kx_nullspace(values: &[RatFun]) -> Vec<Vec<RatFun>> {
    kx_nullspace_vectors(&values.iter().map(|v| vec![v.clone()]).collect::<Vec<_>>())
}

/// Vector version: relations `sum_i e_i vec_i = 0` holding in every
/// coordinate simultaneously.
pub fn kx_nullspace_vectors(vectors: &[Vec<RatFun>]) -> Vec<Vec<RatFun>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let width = vectors[0].len();
    debug_assert!(vectors.iter().all(|v| v.len() == width));
    let mut rows: Vec<Vec<RatFun>> = Vec::new();
    for coord in 0..width {
        // clear denominators across this coordinate
        let mut den = MPoly::one();
        for v in vectors {
            let g = gcd_mpoly(&den, v[coord].den());
            den = den.mul(&v[coord].den().div_exact(&g).unwrap());
        }
        let nums: Vec<MPoly> = vectors
            .iter()
            .map(|v| v[coord].num().mul(&den.div_exact(v[coord].den()).unwrap()))
            .collect();
        // collect (y,z)-monomials
        let mut keys: BTreeSet<(u32, u32)> = BTreeSet::new();
        for n in &nums {
            for (e, _) in n.terms() {
                keys.insert((e.get(Var::Y), e.get(Var::Z)));
            }
        }
        for (ey, ez) in keys {
            let row: Vec<RatFun> = nums
                .iter()
                .map(|n| {
                    let mut c = MPoly::zero();
                    for (e, a) in n.terms() {
                        if e.get(Var::Y) == ey && e.get(Var::Z) == ez {
                            c = c.add(&MPoly::monomial(a.clone(), Exp([e.get(Var::X), 0, 0])));
                        }
                    }
                    RatFun::from_mpoly(c)
                })
                .collect();
            rows.push(row);
        }
    }
    crate::linalg::kernel_basis(&rows)
}
