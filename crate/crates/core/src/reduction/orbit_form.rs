//! Orbit normal forms: after a reduction in `z`, the remaining simple
//! fractions are grouped by orbits of their denominator factors under a
//! group of shifts and q-shifts, and every member is moved onto the orbit
//! representative at the cost of explicit difference certificates. The
//! `x`-generator of the group, when present, is kept as a layer index
//! rather than collapsed, since telescopers act in `x`.

use super::hermite::hermite_reduce;
use super::shift_reduce::orbit_shift_reduce;
use crate::arith::{
    partial_fraction, squarefree_decompose, Coeff, FactoredDen, MPoly, RatFun, Var,
};
use crate::equivalence::{invariance_search, orbit_partition, GroupSpec};
use crate::error::Error;
use crate::ore::{apply_power, apply_theta, OpKind, OperatorKind};

/// One simple fraction `num / theta_x^(x_shift)(rep)^mult` sitting on an
/// orbit representative; the numerator is a `z`-polynomial with `z`-free
/// denominator and `deg_z(num) < deg_z(rep)`.
#[derive(Debug, Clone)]
pub struct BlockItem {
    pub x_shift: i64,
    pub mult: u32,
    pub num: RatFun,
}

#[derive(Debug, Clone)]
pub struct OrbitBlock {
    /// monic representative, irreducibility per the input contract
    pub rep: MPoly,
    pub items: Vec<BlockItem>,
}

impl OrbitBlock {
    pub fn value(&self, x_kind: Option<OpKind>) -> RatFun {
        let mut acc = RatFun::zero();
        for item in &self.items {
            let mut den = RatFun::from_mpoly(self.rep.pow(item.mult));
            if item.x_shift != 0 {
                let kind = x_kind.expect("x-shifted item in a group without an x generator");
                den = apply_power(OperatorKind::new(Var::X, kind), &den, item.x_shift);
            }
            acc = &acc + &(&item.num / &den);
        }
        acc
    }
}

/// `f = Theta_y(u) + Theta_z(v) + mu + sum(blocks)` with block
/// representatives pairwise inequivalent under the group.
#[derive(Debug, Clone)]
pub struct ReducedForm {
    pub theta_y: OperatorKind,
    pub theta_z: OperatorKind,
    pub group: GroupSpec,
    pub u: RatFun,
    pub v: RatFun,
    pub mu: RatFun,
    pub blocks: Vec<OrbitBlock>,
}

impl ReducedForm {
    pub fn remainder(&self) -> RatFun {
        let x_kind = self.group.gens[Var::X.index()];
        let mut acc = self.mu.clone();
        for b in &self.blocks {
            acc = &acc + &b.value(x_kind);
        }
        acc
    }

    pub fn reconstruct(&self) -> RatFun {
        let uy = apply_theta(self.theta_y, &self.u);
        let vz = apply_theta(self.theta_z, &self.v);
        &(&uy + &vz) + &self.remainder()
    }

    pub fn is_exact_trivially(&self) -> bool {
        self.mu.is_zero() && self.blocks.is_empty()
    }
}

/// Recover the factorization of `den` from a pool of factors and their
/// images under the listed operators (used to track factors through
/// reductions and operator applications).
pub fn refactor_with_shifts(
    den: &MPoly,
    pool: &[MPoly],
    ops: &[OperatorKind],
    allow_free_of: Option<Var>,
) -> Result<FactoredDen, Error> {
    let mut rest = den.clone();
    let mut factors: Vec<(MPoly, u32)> = Vec::new();
    let try_divide = |rest: &mut MPoly, cand: &MPoly| -> u32 {
        let cand = cand.monic();
        if cand.is_constant() {
            return 0;
        }
        let mut m = 0u32;
        while let Some(q) = rest.div_exact(&cand) {
            *rest = q;
            m += 1;
        }
        m
    };
    for f in pool {
        let m = try_divide(&mut rest, f);
        if m > 0 {
            factors.push((f.monic(), m));
        }
    }
    // shifted images: search candidate offsets from the dispersion data
    for op in ops {
        for f in pool {
            if rest.is_constant() {
                break;
            }
            let cands = match op.kind {
                OpKind::Shift => super::dispersion::shift_overlap_candidates(&rest, f, op.var),
                OpKind::QShift => super::dispersion::qshift_overlap_candidates(&rest, f, op.var),
                OpKind::Derivation => continue,
            };
            for j in cands {
                if rest.is_constant() {
                    break;
                }
                let img = apply_power_mpoly(f, *op, j);
                let m = try_divide(&mut rest, &img);
                if m > 0 {
                    factors.push((img.monic(), m));
                }
            }
        }
    }
    if let Some(v) = allow_free_of {
        if !rest.is_constant() && !rest.depends_on(v) {
            factors.push((rest.monic(), 1));
            rest = MPoly::constant(rest.leading_coeff());
        }
    }
    match rest.as_constant() {
        Some(c) if !c.is_zero() => {
            let mut fd = FactoredDen::new(c, factors)?;
            fd.asserted_irreducible = true;
            Ok(fd)
        }
        _ => Err(Error::FactorizationRequired(format!(
            "denominator part {} is not covered by the supplied factors",
            rest
        ))),
    }
}

fn apply_power_mpoly(p: &MPoly, op: OperatorKind, k: i64) -> MPoly {
    match op.kind {
        OpKind::Shift => p.shift_var_i64(op.var, k),
        OpKind::QShift => p.qshift_var(op.var, k),
        OpKind::Derivation => unreachable!(),
    }
}

/// The orbit normal form of `f` for the pair `(Theta_y, Theta_z)` under
/// `group`. The denominator must arrive factored whenever it has content of
/// `z`-degree at least two; without a supplied factorization only
/// evidently irreducible pieces are accepted.
pub fn orbit_normal_form(
    f: &RatFun,
    theta_y: OperatorKind,
    theta_z: OperatorKind,
    group: &GroupSpec,
    den: Option<&FactoredDen>,
) -> Result<ReducedForm, Error> {
    debug_assert_eq!(theta_y.var, Var::Y);
    debug_assert_eq!(theta_z.var, Var::Z);
    let pool = factor_pool(f, group, den)?;

    // reduce in z
    let mut u = RatFun::zero();
    let mut v;
    let mut mu = RatFun::zero();
    let (rem, zops): (RatFun, Vec<OperatorKind>) = match theta_z.kind {
        OpKind::Derivation => {
            let res = hermite_reduce(f, Var::Z);
            v = res.cert.clone();
            (res.remainder(), vec![])
        }
        OpKind::Shift => {
            let res = super::abramov::difference_reduce_with_pool(f, Var::Z, OpKind::Shift, &pool);
            v = res.cert.clone();
            (res.remainder(), vec![OperatorKind::new(Var::Z, OpKind::Shift)])
        }
        OpKind::QShift => {
            let res = super::abramov::difference_reduce_with_pool(f, Var::Z, OpKind::QShift, &pool);
            v = res.cert.clone();
            mu = &mu + &res.scalar;
            (res.remainder(), vec![OperatorKind::new(Var::Z, OpKind::QShift)])
        }
    };

    let mut blocks: Vec<OrbitBlock> = Vec::new();
    if !rem.is_zero() {
        let fd = refactor_with_shifts(rem.den(), &pool, &zops, Some(Var::Z))?;
        let pf = partial_fraction(&rem, Var::Z, &fd)?;
        // a proper remainder has no polynomial part; z-free denominators
        // surface through the numerator coefficients
        debug_assert!(pf.poly_part.is_zero());

        // orbit-partition the occurring factors
        let occurring: Vec<MPoly> = {
            let mut v: Vec<MPoly> = pf.parts.iter().map(|(d, _, _)| d.clone()).collect();
            v.sort_by(|a, b| a.cmp_canonical(b));
            v.dedup();
            v
        };
        let classes = orbit_partition(&occurring, group);
        for class in classes {
            let rep = class.rep.clone();
            // layer normalization data
            let x_in_group = group.gens[Var::X.index()].is_some();
            let inv = if x_in_group {
                invariance_search(&rep, group, Var::X)
            } else {
                None
            };
            let mut items: Vec<BlockItem> = Vec::new();
            for (idx, witness) in &class.members {
                let member = &occurring[*idx];
                let mut shifts = witness.shifts;
                let mut scalar = witness.scalar_power;
                // reduce the x-offset modulo the minimal invariance step
                if let Some(w) = &inv {
                    let a = shifts[Var::X.index()];
                    let t = a.div_euclid(w.m);
                    if t != 0 {
                        shifts[Var::X.index()] = a.rem_euclid(w.m);
                        shifts[Var::Y.index()] += t * w.others[Var::Y.index()];
                        shifts[Var::Z.index()] += t * w.others[Var::Z.index()];
                        scalar += t * w.scalar_power;
                    }
                }
                for (d, k, numer) in &pf.parts {
                    if d != member {
                        continue;
                    }
                    let k = *k;
                    // member^k = q^(k*scalar) psi(rep)^k
                    let mut num = numer.to_ratfun().scale(&Coeff::q_power(-(k as i64) * scalar));
                    let by = shifts[Var::Y.index()];
                    let cz = shifts[Var::Z.index()];
                    let ax = shifts[Var::X.index()];
                    let base_x = if ax != 0 {
                        let kx = group.gens[Var::X.index()].expect("x-offset without generator");
                        apply_power(
                            OperatorKind::new(Var::X, kx),
                            &RatFun::from_mpoly(rep.pow(k)),
                            ax,
                        )
                    } else {
                        RatFun::from_mpoly(rep.pow(k))
                    };
                    if by != 0 {
                        let ky = group.gens[Var::Y.index()].expect("y-offset without generator");
                        let opy = OperatorKind::new(Var::Y, ky);
                        let target = if cz != 0 {
                            let kz = group.gens[Var::Z.index()].unwrap();
                            apply_power(OperatorKind::new(Var::Z, kz), &base_x, cz)
                        } else {
                            base_x.clone()
                        };
                        let (g, resid) = orbit_shift_reduce(&num, &target, opy, by);
                        u = &u + &g;
                        num = &resid * &target;
                    }
                    if cz != 0 {
                        let kz = group.gens[Var::Z.index()].expect("z-offset without generator");
                        let opz = OperatorKind::new(Var::Z, kz);
                        let (g, resid) = orbit_shift_reduce(&num, &base_x, opz, cz);
                        v = &v + &g;
                        num = &resid * &base_x;
                    }
                    items.push(BlockItem {
                        x_shift: ax,
                        mult: k,
                        num,
                    });
                }
            }
            // merge identical layers
            items.sort_by_key(|it| (it.x_shift, it.mult));
            let mut merged: Vec<BlockItem> = Vec::new();
            for it in items {
                match merged.last_mut() {
                    Some(last) if last.x_shift == it.x_shift && last.mult == it.mult => {
                        last.num = &last.num + &it.num;
                    }
                    _ => merged.push(it),
                }
            }
            merged.retain(|it| !it.num.is_zero());
            if !merged.is_empty() {
                blocks.push(OrbitBlock { rep, items: merged });
            }
        }
        blocks.sort_by(|a, b| a.rep.cmp_canonical(&b.rep));
    }

    Ok(ReducedForm {
        theta_y,
        theta_z,
        group: *group,
        u,
        v,
        mu,
        blocks,
    })
}

/// Derive the usable factor pool: the supplied factorization when present,
/// otherwise only evidently irreducible squarefree pieces.
fn factor_pool(
    f: &RatFun,
    group: &GroupSpec,
    den: Option<&FactoredDen>,
) -> Result<Vec<MPoly>, Error> {
    match den {
        Some(fd) => {
            // the supplied factorization must cover the denominator
            if !fd
                .expand()
                .div_exact(f.den())
                .is_some_and(|r| r.is_constant())
                && !f
                    .den()
                    .div_exact(&fd.expand())
                    .is_some_and(|r| r.is_constant())
            {
                // allow a factorization of a multiple of the denominator
                let ok = f.den().divides(&fd.expand());
                if !ok {
                    return Err(Error::BadFactorization(format!(
                        "supplied factorization does not cover {}",
                        f.den()
                    )));
                }
            }
            Ok(fd
                .factors
                .iter()
                .filter(|(d, _)| d.depends_on(Var::Z))
                .map(|(d, _)| d.clone())
                .collect())
        }
        None => {
            let mut pool = Vec::new();
            if f.den().depends_on(Var::Z) {
                for (p, _) in squarefree_decompose(f.den(), Var::Z) {
                    pool.push(p.monic());
                }
                // refine under the group generators before judging
                for v in group.vars() {
                    let op = OperatorKind::new(v, group.gens[v.index()].unwrap());
                    pool = super::abramov::refine_under_op(pool, op, Var::Z);
                }
                for p in &pool {
                    if p.deg(Var::Z) >= 2 {
                        return Err(Error::FactorizationRequired(format!(
                            "denominator piece {} has z-degree {}",
                            p,
                            p.deg(Var::Z)
                        )));
                    }
                }
            }
            Ok(pool)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::mixed_equiv;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }
    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }
    fn two() -> Coeff {
        Coeff::from_i64(2)
    }

    fn d1() -> MPoly {
        z().pow(2).add(&x().scale(&two())).add(&y())
    }
    fn d2() -> MPoly {
        z().pow(2)
            .add(&x().scale(&two()).scale(&Coeff::q_power(1)))
            .add(&y())
    }
    fn d3() -> MPoly {
        d2().add(&z().scale(&two())).add(&MPoly::from_i64(2))
    }

    /// The four-fraction function used throughout the orbit examples.
    fn example_function() -> (RatFun, FactoredDen) {
        let f1 = RatFun::new(x(), d1()).unwrap();
        let f2 = RatFun::new(y(), d1().shift_var_i64(Var::Y, 1)).unwrap();
        let f3 = RatFun::new(x().sub(&y().mul(&z())), d2()).unwrap();
        let f4 = RatFun::new(x().pow(2).scale(&Coeff::from_i64(3)), d3()).unwrap();
        let f = &(&(&f1 + &f2) + &f3) + &f4;
        let den = FactoredDen::new(
            Coeff::one(),
            vec![
                (d1(), 1),
                (d1().shift_var_i64(Var::Y, 1), 1),
                (d2(), 1),
                (d3(), 1),
            ],
        )
        .unwrap();
        (f, den)
    }

    fn check_form(form: &ReducedForm, f: &RatFun) {
        assert_eq!(form.reconstruct(), *f, "reconstruction identity");
        // representatives pairwise inequivalent
        for (i, a) in form.blocks.iter().enumerate() {
            for b in form.blocks.iter().skip(i + 1) {
                assert!(
                    mixed_equiv(&a.rep, &b.rep, &form.group).is_none(),
                    "representatives {} and {} are equivalent",
                    a.rep,
                    b.rep
                );
            }
        }
        // numerator degrees below the representative degree
        for b in &form.blocks {
            for it in &b.items {
                assert!(it.num.num().deg(Var::Z) < b.rep.deg(Var::Z));
                assert!(!it.num.den().depends_on(Var::Z));
            }
        }
    }

    #[test]
    fn orbit_collapse_under_sigma_y() {
        let (f, den) = example_function();
        let g = GroupSpec::single(Var::Y, OpKind::Shift);
        let form = orbit_normal_form(
            &f,
            OperatorKind::new(Var::Y, OpKind::Shift),
            OperatorKind::new(Var::Z, OpKind::Shift),
            &g,
            Some(&den),
        )
        .unwrap();
        check_form(&form, &f);
        assert_eq!(form.blocks.len(), 3, "three orbits under the y-shift");
    }

    #[test]
    fn orbit_collapse_under_mixed_group() {
        let (f, den) = example_function();
        let g = GroupSpec::pair(Var::X, OpKind::QShift, Var::Y, OpKind::Shift);
        let form = orbit_normal_form(
            &f,
            OperatorKind::new(Var::Y, OpKind::Shift),
            OperatorKind::new(Var::Z, OpKind::Shift),
            &g,
            Some(&den),
        )
        .unwrap();
        check_form(&form, &f);
        assert_eq!(form.blocks.len(), 2, "two orbits with the q-shift joined");
    }

    #[test]
    fn orbit_collapse_under_full_group() {
        let (f, den) = example_function();
        let mut gens = [None, None, None];
        gens[Var::X.index()] = Some(OpKind::QShift);
        gens[Var::Y.index()] = Some(OpKind::Shift);
        gens[Var::Z.index()] = Some(OpKind::Shift);
        let g = GroupSpec::new(gens);
        let form = orbit_normal_form(
            &f,
            OperatorKind::new(Var::Y, OpKind::Shift),
            OperatorKind::new(Var::Z, OpKind::Shift),
            &g,
            Some(&den),
        )
        .unwrap();
        check_form(&form, &f);
        assert_eq!(form.blocks.len(), 1, "a single orbit under the full group");
    }

    #[test]
    fn single_irreducible_fraction() {
        let f = RatFun::new(MPoly::one(), z().pow(2).sub(&y())).unwrap();
        let den = FactoredDen::new(Coeff::one(), vec![(z().pow(2).sub(&y()), 1)]).unwrap();
        let g = GroupSpec::pair(Var::Y, OpKind::Shift, Var::Z, OpKind::Shift);
        let form = orbit_normal_form(
            &f,
            OperatorKind::new(Var::Y, OpKind::Shift),
            OperatorKind::new(Var::Z, OpKind::Shift),
            &g,
            Some(&den),
        )
        .unwrap();
        check_form(&form, &f);
        assert!(form.u.is_zero() && form.v.is_zero());
        assert_eq!(form.blocks.len(), 1);
    }

    #[test]
    fn construct_then_reduce_roundtrip() {
        // f = Delta_y(1/(y+z)) reduces to an empty remainder
        let inner = RatFun::new(MPoly::one(), y().add(&z())).unwrap();
        let f = apply_theta(OperatorKind::new(Var::Y, OpKind::Shift), &inner);
        let den = FactoredDen::new(
            Coeff::one(),
            vec![
                (y().add(&z()), 1),
                (y().add(&z()).add(&MPoly::one()), 1),
            ],
        )
        .unwrap();
        let g = GroupSpec::pair(Var::Y, OpKind::Shift, Var::Z, OpKind::Shift);
        let form = orbit_normal_form(
            &f,
            OperatorKind::new(Var::Y, OpKind::Shift),
            OperatorKind::new(Var::Z, OpKind::Shift),
            &g,
            Some(&den),
        )
        .unwrap();
        check_form(&form, &f);
        assert!(form.blocks.is_empty(), "an exact input leaves no remainder");
        assert!(form.mu.is_zero());
    }

    #[test]
    fn hermite_based_mixed_form() {
        // (Delta_y, D_z) form on (z+1)/((x+y) z^2): the square reduces away
        // and the simple pole at z stays as the block
        let f = RatFun::new(
            z().add(&MPoly::one()),
            x().add(&y()).mul(&z().pow(2)),
        )
        .unwrap();
        let den =
            FactoredDen::new(Coeff::one(), vec![(x().add(&y()), 1), (z(), 2)]).unwrap();
        let g = GroupSpec::single(Var::Y, OpKind::Shift);
        let form = orbit_normal_form(
            &f,
            OperatorKind::new(Var::Y, OpKind::Shift),
            OperatorKind::new(Var::Z, OpKind::Derivation),
            &g,
            Some(&den),
        )
        .unwrap();
        check_form(&form, &f);
        assert_eq!(form.blocks.len(), 1);
        assert_eq!(form.blocks[0].rep, z());
        assert_eq!(form.blocks[0].items.len(), 1);
        assert_eq!(form.blocks[0].items[0].mult, 1, "Hermite reduces the square");
    }

    #[test]
    fn x_layers_kept_for_class_grouping() {
        // f = 1/d + 1/sigma_x(d) with d = z^2-x-y under <sigma_x, sigma_y>:
        // one orbit, either collapsed onto a single layer through the
        // invariance sigma_x(d) = sigma_y(d) or kept as layers
        let d = z().pow(2).sub(&x()).sub(&y());
        let dx = d.shift_var_i64(Var::X, 1);
        let f = &RatFun::new(MPoly::one(), d.clone()).unwrap()
            + &RatFun::new(MPoly::one(), dx.clone()).unwrap();
        let den = FactoredDen::new(Coeff::one(), vec![(d.clone(), 1), (dx, 1)]).unwrap();
        let g = GroupSpec::pair(Var::X, OpKind::Shift, Var::Y, OpKind::Shift);
        let form = orbit_normal_form(
            &f,
            OperatorKind::new(Var::Y, OpKind::Shift),
            OperatorKind::new(Var::Z, OpKind::Derivation),
            &g,
            Some(&den),
        )
        .unwrap();
        check_form(&form, &f);
        assert_eq!(form.blocks.len(), 1);
        // the invariance sigma_x(d) = sigma_y(d) allows collapsing the
        // x-layer to zero
        for it in &form.blocks[0].items {
            assert_eq!(it.x_shift, 0, "x-offsets reduce modulo the invariance");
        }
    }
}
