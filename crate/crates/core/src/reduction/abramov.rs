//! Abramov reduction and its q-analogue: split off a difference (or
//! q-difference) so that the remainder's denominator is shift-free (or
//! q-shift-free) in the distinguished variable.
//!
//! The shift structure of an arbitrary denominator is discovered without
//! irreducible factorization: squarefree parts are refined into a coprime
//! basis of "atoms" closed under the detected shift overlaps, every overlap
//! candidate coming from the dispersion machinery and verified by an exact
//! gcd.

use super::dispersion::{qshift_overlap_candidates, shift_overlap_candidates};
use super::shift_reduce::twisted_shift_reduce;
use crate::arith::{gcd_mpoly, squarefree_decompose, Coeff, MPoly, RatFun, Var, VarPoly};
use crate::ore::{apply_power, OpKind, OperatorKind};

/// Result of a difference reduction: `f = Theta(cert) + scalar + rem` where
/// `scalar` is free of the variable (only produced by the q-case) and the
/// remainder `rem_num/rem_den` is proper with (q-)shift-free denominator.
#[derive(Debug, Clone)]
pub struct AbramovResult {
    pub cert: RatFun,
    pub scalar: RatFun,
    pub rem_num: MPoly,
    pub rem_den: MPoly,
}

impl AbramovResult {
    pub fn remainder(&self) -> RatFun {
        RatFun::new(self.rem_num.clone(), self.rem_den.clone()).unwrap()
    }
}

/// `f = Delta_var(g) + a/b` with `b` shift-free in `var`; `a = 0` exactly
/// when `f` is `Delta_var`-summable.
pub fn abramov_reduce(f: &RatFun, var: Var) -> AbramovResult {
    reduce_difference(f, var, OpKind::Shift, None)
}

/// `f = Delta_{q,var}(g) + c + a/b` with `c` free of `var` and `b`
/// q-shift-free in `var`; `f` is summable exactly when `c = 0` and `a = 0`.
pub fn q_abramov_reduce(f: &RatFun, var: Var) -> AbramovResult {
    reduce_difference(f, var, OpKind::QShift, None)
}

/// Variant taking the known factors of the denominator, skipping the
/// structure discovery.
pub fn difference_reduce_with_pool(
    f: &RatFun,
    var: Var,
    kind: OpKind,
    pool: &[MPoly],
) -> AbramovResult {
    reduce_difference(f, var, kind, Some(pool))
}

fn reduce_difference(f: &RatFun, var: Var, kind: OpKind, pool: Option<&[MPoly]>) -> AbramovResult {
    let op = OperatorKind::new(var, kind);
    let (num, den) = VarPoly::fraction_parts(f, var);
    let lead_inv = den.leading().inv();
    let num = num.scale(&lead_inv);
    let den = den.scale(&lead_inv);
    let (poly, proper_num) = num.divrem(&den);

    let mut cert = RatFun::zero();
    let mut scalar = RatFun::zero();

    // polynomial part
    match kind {
        OpKind::Shift => {
            if !poly.is_zero() {
                cert = &cert + &discrete_antiderivative(&poly).to_ratfun();
            }
        }
        OpKind::QShift => {
            // v^m = Delta_q(v^m / (q^m - 1)) for m >= 1; the v-free part is
            // the scalar obstruction
            for (m, c) in poly.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if m == 0 {
                    scalar = &scalar + c;
                } else {
                    let factor = &Coeff::q_power(m as i64) - &Coeff::one();
                    let vm = VarPoly::var_poly(var).pow(m as u32).to_ratfun();
                    cert = &cert + &(&c.scale(&factor.inv()) * &vm);
                }
            }
        }
        OpKind::Derivation => unreachable!(),
    }

    let mut remainder = RatFun::zero();
    if !proper_num.is_zero() {
        let atoms = shift_atoms(f.den(), var, kind, pool);
        // full factorization of the proper denominator over the atoms
        let mut factors: Vec<(MPoly, u32)> = Vec::new();
        let mut rest = f.den().clone();
        for a in &atoms {
            let mut m = 0u32;
            while let Some(q) = rest.div_exact(a) {
                rest = q;
                m += 1;
            }
            if m > 0 {
                factors.push((a.clone(), m));
            }
        }
        debug_assert!(!rest.depends_on(var));
        let fd = crate::arith::FactoredDen::new(
            rest.leading_coeff(),
            factors
                .iter()
                .map(|(a, m)| (a.clone(), *m))
                .chain(varfree_factor(&rest))
                .collect(),
        )
        .unwrap();
        let proper = &proper_num.to_ratfun() / &den.to_ratfun();
        let pf = crate::arith::partial_fraction(&proper, var, &fd).unwrap();
        debug_assert!(pf.poly_part.is_zero());

        // canonical orbit representatives among the atoms
        let orbits = atom_orbits(&atoms, var, kind);
        for (d, k, numer) in pf.parts {
            let a = numer.to_ratfun();
            if kind == OpKind::QShift && d == MPoly::var(var) {
                // v^k parts are summable outright
                let factor = &Coeff::q_power(-(k as i64)) - &Coeff::one();
                let dk = RatFun::new(MPoly::one(), d.pow(k)).unwrap();
                cert = &cert + &(&a.scale(&factor.inv()) * &dk);
                continue;
            }
            let (rep, j) = orbits
                .iter()
                .find_map(|orb| {
                    orb.members
                        .iter()
                        .find(|(m, _)| *m == d)
                        .map(|(_, j)| (orb.rep.clone(), *j))
                })
                .expect("every denominator atom lies in an orbit");
            if j == 0 {
                remainder = &remainder + &(&a / &RatFun::from_mpoly(d.pow(k)));
            } else {
                // d^k = unit * theta^j(rep^k); move onto the representative
                let image = apply_power(op, &RatFun::from_mpoly(rep.clone()), j).pow(k as i64);
                let unit = &RatFun::from_mpoly(d.pow(k)) / &image;
                debug_assert!(unit.as_coeff().is_some());
                let b = RatFun::from_mpoly(rep.pow(k));
                let (g, resid) =
                    twisted_shift_reduce(&(&a / &unit), &b, op, j, &Coeff::one());
                cert = &cert + &g;
                remainder = &remainder + &resid;
            }
        }
    }

    AbramovResult {
        cert,
        scalar,
        rem_num: remainder.num().clone(),
        rem_den: remainder.den().clone(),
    }
}

fn varfree_factor(rest: &MPoly) -> Option<(MPoly, u32)> {
    if rest.is_constant() {
        None
    } else {
        Some((rest.clone(), 1))
    }
}

/// Solve `P(v+1) - P(v) = p` for a polynomial `P` (no constant term).
pub fn discrete_antiderivative(p: &VarPoly) -> VarPoly {
    let var = p.var;
    let d = p.degree();
    if d < 0 {
        return VarPoly::zero(var);
    }
    let n = d as usize + 2;
    // ansatz P = sum_{k=1}^{n-1} c_k v^k; (v+1)^k - v^k contributes binomials
    let mut rows = vec![vec![RatFun::zero(); n - 1]; n - 1];
    for k in 1..n {
        // coefficient of v^i in (v+1)^k - v^k is C(k,i) for i < k
        let mut binom = 1i64;
        for i in 0..k {
            // C(k, i): iterate
            rows[i][k - 1] = RatFun::from_i64(binom);
            binom = binom * (k as i64 - i as i64) / (i as i64 + 1);
        }
    }
    let rhs: Vec<RatFun> = (0..n - 1).map(|i| p.coeff(i)).collect();
    let (sol, _) = crate::linalg::solve_affine(&rows, &rhs)
        .expect("difference of polynomials spans all lower degrees");
    let mut coeffs = vec![RatFun::zero()];
    coeffs.extend(sol);
    VarPoly::from_coeffs(var, coeffs)
}

/// Squarefree, pairwise coprime, shift-overlap-free building blocks of `den`
/// with respect to the (q-)shift in `var`. Monic, each depending on `var`.
/// After refinement, two atoms (or an atom and a nontrivial shift of an
/// atom) overlap only by being exact shifts of one another.
pub fn shift_atoms(den: &MPoly, var: Var, kind: OpKind, pool: Option<&[MPoly]>) -> Vec<MPoly> {
    if let Some(pool) = pool {
        // supplied factors are already coprime, squarefree and atomic
        let mut atoms: Vec<MPoly> = Vec::new();
        let mut rest = den.clone();
        for f in pool {
            let f = f.monic();
            let mut used = false;
            while let Some(q) = rest.div_exact(&f) {
                rest = q;
                used = true;
            }
            if used && f.depends_on(var) {
                atoms.push(f);
            }
        }
        if !rest.depends_on(var) {
            atoms.sort_by(|a, b| a.cmp_canonical(b));
            atoms.dedup();
            return atoms;
        }
        // uncovered var-dependent part: fall through to discovery on it
    }
    let op = OperatorKind::new(var, kind);
    let mut atoms: Vec<MPoly> = squarefree_decompose(den, var)
        .into_iter()
        .map(|(p, _)| p.monic())
        .collect();
    if let Some(pool) = pool {
        // refine the squarefree pieces against the supplied factors first
        for f in pool {
            let f = f.monic();
            let mut next = Vec::new();
            for a in atoms {
                let mut rest = a;
                let mut used = false;
                while let Some(q) = rest.div_exact(&f) {
                    rest = q;
                    used = true;
                }
                if used && f.depends_on(var) {
                    next.push(f.clone());
                }
                if rest.depends_on(var) {
                    next.push(rest.monic());
                }
            }
            atoms = next;
        }
    }
    atoms.sort_by(|a, b| a.cmp_canonical(b));
    atoms.dedup();

    // coprime refinement
    loop {
        let mut changed = false;
        'outer: for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                let g = gcd_mpoly(&atoms[i], &atoms[j]);
                if !g.is_constant() && (g != atoms[i] || g != atoms[j]) {
                    let a = atoms[i].clone();
                    let b = atoms[j].clone();
                    let mut next: Vec<MPoly> = atoms
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != i && *k != j)
                        .map(|(_, p)| p.clone())
                        .collect();
                    for piece in [g.clone(), a.div_exact(&g).unwrap(), b.div_exact(&g).unwrap()] {
                        if piece.depends_on(var) {
                            next.push(piece.monic());
                        }
                    }
                    next.sort_by(|x, y| x.cmp_canonical(y));
                    next.dedup();
                    if next != atoms {
                        atoms = next;
                        changed = true;
                        break 'outer;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    atoms = refine_under_op(atoms, op, var);
    atoms
}


/// Split pieces until every overlap with an operator-shifted copy is a full
/// copy; pieces that lose all dependence on `keep_var` are dropped.
pub fn refine_under_op(mut atoms: Vec<MPoly>, op: OperatorKind, keep_var: Var) -> Vec<MPoly> {
    let kind = op.kind;
    let var = op.var;
    loop {
        let mut split: Option<(usize, MPoly)> = None;
        'search: for i in 0..atoms.len() {
            for j in 0..atoms.len() {
                let cands = match kind {
                    OpKind::Shift => shift_overlap_candidates(&atoms[i], &atoms[j], var),
                    OpKind::QShift => qshift_overlap_candidates(&atoms[i], &atoms[j], var),
                    OpKind::Derivation => return atoms,
                };
                for t in cands {
                    if i == j && t == 0 {
                        continue;
                    }
                    let shifted = match kind {
                        OpKind::Shift => atoms[j].shift_var_i64(var, t),
                        OpKind::QShift => atoms[j].qshift_var(var, t).monic(),
                        OpKind::Derivation => unreachable!(),
                    };
                    let g = gcd_mpoly(&atoms[i], &shifted);
                    if g.is_constant() {
                        continue;
                    }
                    if g != atoms[i] {
                        split = Some((i, g));
                        break 'search;
                    }
                    if g != shifted {
                        // atom j properly contains the back-shifted overlap
                        let gj = match kind {
                            OpKind::Shift => g.shift_var_i64(var, -t),
                            OpKind::QShift => g.qshift_var(var, -t).monic(),
                            OpKind::Derivation => unreachable!(),
                        };
                        split = Some((j, gj));
                        break 'search;
                    }
                }
            }
        }
        match split {
            Some((i, g)) => {
                let a = atoms[i].clone();
                atoms.remove(i);
                for piece in [g.clone(), a.div_exact(&g).unwrap()] {
                    if piece.depends_on(keep_var) {
                        atoms.push(piece.monic());
                    }
                }
                atoms.sort_by(|x, y| x.cmp_canonical(y));
                atoms.dedup();
            }
            None => break,
        }
    }
    atoms
}

/// Orbit of atoms under the shift: members as `(atom, offset)` with
/// `atom = monic(theta^offset(rep))`.
pub struct AtomOrbit {
    pub rep: MPoly,
    pub members: Vec<(MPoly, i64)>,
}

pub fn atom_orbits(atoms: &[MPoly], var: Var, kind: OpKind) -> Vec<AtomOrbit> {
    let mut orbits: Vec<AtomOrbit> = Vec::new();
    let mut assigned = vec![false; atoms.len()];
    for i in 0..atoms.len() {
        if assigned[i] {
            continue;
        }
        let mut members = vec![(atoms[i].clone(), 0i64)];
        assigned[i] = true;
        for j in i + 1..atoms.len() {
            if assigned[j] {
                continue;
            }
            let cands = match kind {
                OpKind::Shift => shift_overlap_candidates(&atoms[j], &atoms[i], var),
                OpKind::QShift => qshift_overlap_candidates(&atoms[j], &atoms[i], var),
                OpKind::Derivation => unreachable!(),
            };
            for t in cands {
                let shifted = match kind {
                    OpKind::Shift => atoms[i].shift_var_i64(var, t),
                    OpKind::QShift => atoms[i].qshift_var(var, t).monic(),
                    OpKind::Derivation => unreachable!(),
                };
                if shifted == atoms[j] {
                    members.push((atoms[j].clone(), t));
                    assigned[j] = true;
                    break;
                }
            }
        }
        // canonical representative: smallest member in the term order
        let (rep, base) = members
            .iter()
            .min_by(|(a, _), (b, _)| a.cmp_canonical(b))
            .cloned()
            .unwrap();
        let members = members
            .into_iter()
            .map(|(m, t)| (m, t - base))
            .collect();
        orbits.push(AtomOrbit { rep, members });
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::apply_theta;

    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }

    fn check(f: &RatFun, var: Var, kind: OpKind) -> AbramovResult {
        let res = reduce_difference(f, var, kind, None);
        let op = OperatorKind::new(var, kind);
        let back = &(&apply_theta(op, &res.cert) + &res.scalar) + &res.remainder();
        assert_eq!(&back, f, "reconstruction failed for {}", f);
        assert!(res.rem_num.deg(var) < res.rem_den.deg(var) || res.rem_num.is_zero());
        // shift-freeness of the remainder denominator
        let cands = match kind {
            OpKind::Shift => shift_overlap_candidates(&res.rem_den, &res.rem_den, var),
            OpKind::QShift => qshift_overlap_candidates(&res.rem_den, &res.rem_den, var),
            OpKind::Derivation => unreachable!(),
        };
        for t in cands {
            if t == 0 {
                continue;
            }
            let shifted = match kind {
                OpKind::Shift => res.rem_den.shift_var_i64(var, t),
                OpKind::QShift => res.rem_den.qshift_var(var, t),
                OpKind::Derivation => unreachable!(),
            };
            assert!(
                gcd_mpoly(&res.rem_den, &shifted).is_one(),
                "denominator not shift-free at distance {}",
                t
            );
        }
        if kind == OpKind::Shift {
            assert!(res.scalar.is_zero());
        }
        res
    }

    #[test]
    fn telescoping_product() {
        // 1/(z(z+1)) = Delta_z(-1/z)
        let f = RatFun::new(MPoly::one(), z().mul(&z().add(&MPoly::one()))).unwrap();
        let res = check(&f, Var::Z, OpKind::Shift);
        assert!(res.rem_num.is_zero());
        let expect = RatFun::new(MPoly::from_i64(-1), z()).unwrap();
        assert_eq!(res.cert, expect);
    }

    #[test]
    fn shift_free_stays() {
        let f = RatFun::new(MPoly::one(), z()).unwrap();
        let res = check(&f, Var::Z, OpKind::Shift);
        assert!(res.cert.is_zero());
        assert_eq!(res.remainder(), f);
    }

    #[test]
    fn distance_two_summable() {
        // 1/(z(z+2)) = Delta_z(-(2z+1)/(2z(z+1)))
        let f = RatFun::new(MPoly::one(), z().mul(&z().add(&MPoly::from_i64(2)))).unwrap();
        let res = check(&f, Var::Z, OpKind::Shift);
        assert!(res.rem_num.is_zero(), "remainder {}", res.remainder());
        // oracle: expand Delta_z of the expected certificate
        let expect = RatFun::new(
            z().scale(&Coeff::from_i64(2)).add(&MPoly::one()).neg(),
            z().mul(&z().add(&MPoly::one())).scale(&Coeff::from_i64(2)),
        )
        .unwrap();
        let delta = apply_theta(OperatorKind::new(Var::Z, OpKind::Shift), &expect);
        assert_eq!(delta, f);
        assert_eq!(res.cert, expect);
    }

    #[test]
    fn q_constant_obstruction() {
        let f = RatFun::from_i64(3);
        let res = check(&f, Var::Z, OpKind::QShift);
        assert!(res.cert.is_zero());
        assert_eq!(res.scalar, RatFun::from_i64(3));
        assert!(res.rem_num.is_zero());
    }

    #[test]
    fn q_power_denominator_absorbed() {
        // 1/z = Delta_{q,z}(g) with g = (q/(1-q)) / z
        let f = RatFun::new(MPoly::one(), z()).unwrap();
        let res = check(&f, Var::Z, OpKind::QShift);
        assert!(res.rem_num.is_zero());
        assert!(res.scalar.is_zero());
        let q = Coeff::q_power(1);
        let g = RatFun::new(
            MPoly::constant(&q / &(&Coeff::one() - &q)),
            z(),
        )
        .unwrap();
        assert_eq!(res.cert, g);
    }

    #[test]
    fn q_shift_free_stays() {
        let f = RatFun::new(MPoly::one(), z().sub(&MPoly::one())).unwrap();
        let res = check(&f, Var::Z, OpKind::QShift);
        assert!(res.cert.is_zero() && res.scalar.is_zero());
        assert_eq!(res.remainder(), f);
    }

    #[test]
    fn q_orbit_collapse() {
        // 1/((z-y)(qz-y)): the two factors are q-shift copies
        let a = z().sub(&y());
        let b = z().scale(&Coeff::q_power(1)).sub(&y());
        let f = RatFun::new(MPoly::one(), a.mul(&b)).unwrap();
        check(&f, Var::Z, OpKind::QShift);
    }

    #[test]
    fn mixed_shift_structure_with_y() {
        // 1/((z+y)(z+y+3)) collapses to a single orbit
        let a = z().add(&y());
        let b = z().add(&y()).add(&MPoly::from_i64(3));
        let f = RatFun::new(MPoly::one(), a.mul(&b)).unwrap();
        let res = check(&f, Var::Z, OpKind::Shift);
        assert!(res.rem_num.is_zero());
    }

    #[test]
    fn multiplicity_preserved() {
        // 1/(z^2 (z+1)) is not summable; remainder keeps a square
        let f = RatFun::new(MPoly::one(), z().pow(2).mul(&z().add(&MPoly::one()))).unwrap();
        let res = check(&f, Var::Z, OpKind::Shift);
        assert!(!res.rem_num.is_zero());
        assert_eq!(res.rem_den.deg(Var::Z), 2);
    }

    #[test]
    fn discrete_antiderivative_identity() {
        let p = VarPoly::from_coeffs(
            Var::Z,
            vec![RatFun::from_i64(1), RatFun::var(Var::Y), RatFun::from_i64(3)],
        );
        let g = discrete_antiderivative(&p);
        let delta = g.shift_main(1).sub(&g);
        assert_eq!(delta, p);
    }
}
