//! Sparse multivariate polynomials in `x, y, z` over `Q(q)`.
//!
//! Terms are kept in a BTreeMap keyed by exponent triples under graded
//! lexicographic order with `x > y > z`, so iteration order, leading terms
//! and printed forms are all canonical.

use super::coeff::Coeff;
use super::vars::{Var, ALL_VARS};
use num::{BigRational, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent triple `(e_x, e_y, e_z)` ordered by graded lex with `x > y > z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exp(pub [u32; 3]);

impl Exp {
    pub fn total(&self) -> u32 {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn get(&self, v: Var) -> u32 {
        self.0[v.index()]
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<Exp, Coeff>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> MPoly {
        MPoly::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exp([0, 0, 0]), c);
        }
        MPoly { terms }
    }

    pub fn from_i64(n: i64) -> MPoly {
        MPoly::constant(Coeff::from_i64(n))
    }

    pub fn var(v: Var) -> MPoly {
        MPoly::monomial(Coeff::one(), {
            let mut e = [0, 0, 0];
            e[v.index()] = 1;
            Exp(e)
        })
    }

    pub fn monomial(c: Coeff, e: Exp) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MPoly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Exp, Coeff)>) -> MPoly {
        let mut p = MPoly::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exp, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Exp([0, 0, 0])).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Exp([0, 0, 0])))
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(Coeff::zero());
        }
        if self.is_constant() {
            return self.terms.get(&Exp([0, 0, 0])).cloned();
        }
        None
    }

    pub fn leading(&self) -> Option<(&Exp, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Coeff {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Coeff::zero)
    }

    pub fn coeff(&self, e: &Exp) -> Coeff {
        self.terms.get(e).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn total_degree(&self) -> i64 {
        self.leading().map(|(e, _)| e.total() as i64).unwrap_or(-1)
    }

    pub fn deg(&self, v: Var) -> i64 {
        self.terms
            .keys()
            .map(|e| e.get(v) as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.deg(v) > 0
    }

    pub fn vars_present(&self) -> Vec<Var> {
        ALL_VARS.iter().copied().filter(|&v| self.depends_on(v)).collect()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(*e, -c);
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in other.terms.iter() {
                let e = Exp([e1.0[0] + e2.0[0], e1.0[1] + e2.0[1], e1.0[2] + e2.0[2]]);
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Leading coefficient scaled to 1.
    pub fn monic(&self) -> MPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&lc.inv())
    }

    /// Exact division; `None` when not divisible.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero MPoly");
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        let (de, dc) = {
            let (e, c) = d.leading().unwrap();
            (*e, c.clone())
        };
        while !rem.is_zero() {
            let (re, rc) = {
                let (e, c) = rem.leading().unwrap();
                (*e, c.clone())
            };
            if re.0[0] < de.0[0] || re.0[1] < de.0[1] || re.0[2] < de.0[2] {
                return None;
            }
            let e = Exp([re.0[0] - de.0[0], re.0[1] - de.0[1], re.0[2] - de.0[2]]);
            let c = &rc / &dc;
            let t = MPoly::monomial(c, e);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    pub fn divides(&self, other: &MPoly) -> bool {
        other.div_exact(self).is_some()
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        let i = v.index();
        let mut out = MPoly::zero();
        for (e, c) in self.terms.iter() {
            if e.0[i] > 0 {
                let mut ne = e.0;
                ne[i] -= 1;
                out.add_term(Exp(ne), c * &Coeff::from_i64(e.0[i] as i64));
            }
        }
        out
    }

    /// Coefficients of powers of `v`: entry `i` is the (v-free) coefficient
    /// of `v^i`.
    pub fn univar_coeffs(&self, v: Var) -> Vec<MPoly> {
        let d = self.deg(v);
        if d < 0 {
            return Vec::new();
        }
        let mut out = vec![MPoly::zero(); d as usize + 1];
        let i = v.index();
        for (e, c) in self.terms.iter() {
            let k = e.0[i] as usize;
            let mut ne = e.0;
            ne[i] = 0;
            out[k].add_term(Exp(ne), c.clone());
        }
        out
    }

    pub fn from_univar(coeffs: &[MPoly], v: Var) -> MPoly {
        let i = v.index();
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in c.terms.iter() {
                debug_assert_eq!(e.0[i], 0);
                let mut ne = e.0;
                ne[i] += k as u32;
                out.add_term(Exp(ne), a.clone());
            }
        }
        out
    }

    /// Substitute `v -> v + r` for rational `r`.
    pub fn shift_var(&self, v: Var, r: &BigRational) -> MPoly {
        if r.is_zero() || !self.depends_on(v) {
            return self.clone();
        }
        let coeffs = self.univar_coeffs(v);
        let image = MPoly::var(v).add(&MPoly::constant(Coeff::from_rational(r.clone())));
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(&image).add(c);
        }
        acc
    }

    pub fn shift_var_i64(&self, v: Var, k: i64) -> MPoly {
        self.shift_var(v, &BigRational::from_integer(k.into()))
    }

    /// Substitute `v -> q^k * v`.
    pub fn qshift_var(&self, v: Var, k: i64) -> MPoly {
        if k == 0 {
            return self.clone();
        }
        let i = v.index();
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c * &Coeff::q_power(k * e.0[i] as i64)))
                .collect(),
        }
    }

    /// Simultaneous substitution; `None` entries leave the variable alone.
    pub fn subst_simultaneous(&self, images: &[Option<MPoly>; 3]) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in self.terms.iter() {
            let mut t = MPoly::constant(c.clone());
            for (i, img) in images.iter().enumerate() {
                let k = e.0[i];
                if k == 0 {
                    continue;
                }
                match img {
                    Some(g) => t = t.mul(&g.pow(k)),
                    None => {
                        let mut me = [0, 0, 0];
                        me[i] = k;
                        t = t.mul(&MPoly::monomial(Coeff::one(), Exp(me)));
                    }
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Swap the roles of `y` and `z`.
    pub fn swap_yz(&self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (Exp([e.0[0], e.0[2], e.0[1]]), c.clone()))
                .collect(),
        }
    }

    /// Canonical deterministic comparison: graded-lex on term sequences from
    /// the top, then coefficient data.
    pub fn cmp_canonical(&self, other: &MPoly) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ea, ca)), Some((eb, cb))) => {
                    match ea.cmp(eb) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                    match cmp_coeff(ca, cb) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
            }
        }
    }

    /// Evaluate at rational points for a subset of the variables.
    pub fn eval_vars(&self, at: &[(Var, BigRational)]) -> MPoly {
        let mut images: [Option<MPoly>; 3] = [None, None, None];
        for (v, r) in at {
            images[v.index()] = Some(MPoly::constant(Coeff::from_rational(r.clone())));
        }
        self.subst_simultaneous(&images)
    }
}

fn cmp_coeff(a: &Coeff, b: &Coeff) -> Ordering {
    let key = |c: &Coeff| -> (Vec<BigRational>, Vec<BigRational>) {
        (c.num().coeffs().to_vec(), c.den().coeffs().to_vec())
    };
    key(a).cmp(&key(b))
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono = {
                let mut s = String::new();
                for (i, v) in ALL_VARS.iter().enumerate() {
                    let k = e.0[i];
                    if k == 0 {
                        continue;
                    }
                    if !s.is_empty() {
                        s.push('*');
                    }
                    s.push_str(v.name());
                    if k > 1 {
                        s.push_str(&format!("^{}", k));
                    }
                }
                s
            };
            let (cs, negated) = {
                let s = format!("{}", c);
                match s.strip_prefix('-') {
                    Some(rest) if !rest.contains(' ') && !rest.contains('/') => (rest.to_string(), true),
                    _ => (s, false),
                }
            };
            if first {
                first = false;
                if negated {
                    f.write_str("-")?;
                }
            } else if negated {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if mono.is_empty() {
                f.write_str(&cs)?;
            } else if c.is_one() {
                f.write_str(&mono)?;
            } else if negated && cs == "1" {
                f.write_str(&mono)?;
            } else {
                let needs_parens = cs.contains('+') || cs.contains(' ') || cs.contains('/');
                if needs_parens {
                    write!(f, "({})*{}", cs, mono)?;
                } else {
                    write!(f, "{}*{}", cs, mono)?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// gcd, content and squarefree machinery
// ---------------------------------------------------------------------------

/// Normalized (monic) gcd; `gcd(p, 0)` is the normalization of `p`.
pub fn gcd_mpoly(p: &MPoly, r: &MPoly) -> MPoly {
    if p.is_zero() {
        return r.monic();
    }
    if r.is_zero() {
        return p.monic();
    }
    if p.is_constant() || r.is_constant() {
        return MPoly::one();
    }
    if p == r {
        return p.monic();
    }
    // single-monomial fast path
    if p.num_terms() == 1 || r.num_terms() == 1 {
        return monomial_gcd(p, r);
    }
    let Some(v) = common_var(p, r) else {
        return MPoly::one();
    };
    // divisibility fast paths catch the very common power-of-a-factor case
    if p.total_degree() <= r.total_degree() {
        if p.divides(r) {
            return p.monic();
        }
    } else if r.divides(p) {
        return r.monic();
    }
    // heuristic evaluation gcd; every candidate is verified, so a miss only
    // costs time
    let pa = super::intpoly::mpoly_to_int(p);
    let pb = super::intpoly::mpoly_to_int(r);
    if let Some(g) = super::intpoly::heugcd(&pa, &pb) {
        return super::intpoly::int_to_mpoly(&g).monic();
    }
    // complete fallback: monic Euclid over the rational-function field of
    // the remaining variables
    let cp = content(p, v);
    let cr = content(r, v);
    let pp = p.div_exact(&cp).unwrap();
    let pr = r.div_exact(&cr).unwrap();
    let cont_gcd = gcd_mpoly(&cp, &cr);
    let a = super::varpoly::VarPoly::from_mpoly_full(&pp, v);
    let b = super::varpoly::VarPoly::from_mpoly_full(&pr, v);
    let g = a.gcd(&b);
    let prim_gcd = if g.is_constant() {
        MPoly::one()
    } else {
        let (num, _) = g.clear_denominators();
        primitive_part(&num, v)
    };
    cont_gcd.mul(&prim_gcd).monic()
}

fn monomial_gcd(p: &MPoly, r: &MPoly) -> MPoly {
    let mut e = [u32::MAX; 3];
    for q in [p, r] {
        for (ex, _) in q.terms() {
            for i in 0..3 {
                e[i] = e[i].min(ex.0[i]);
            }
        }
    }
    MPoly::monomial(Coeff::one(), Exp(e))
}

fn common_var(p: &MPoly, r: &MPoly) -> Option<Var> {
    [Var::Z, Var::Y, Var::X]
        .into_iter()
        .find(|&v| p.depends_on(v) && r.depends_on(v))
}

/// Content of `p` with respect to `v`: gcd of the `v`-power coefficients.
pub fn content(p: &MPoly, v: Var) -> MPoly {
    let coeffs = p.univar_coeffs(v);
    let mut g = MPoly::zero();
    for c in coeffs.iter() {
        if !c.is_zero() {
            g = gcd_mpoly(&g, c);
            if g.is_one() {
                break;
            }
        }
    }
    g
}

pub fn primitive_part(p: &MPoly, v: Var) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p, v);
    p.div_exact(&c).unwrap()
}

/// Squarefree decomposition with respect to `v` by Yun's algorithm, over the
/// field of the remaining variables. Returns `(part, multiplicity)` pairs
/// with parts monic, pairwise coprime, squarefree in `v`, each depending on
/// `v`. The product of `part^multiplicity` equals `p` up to a `v`-free
/// factor.
pub fn squarefree_decompose(p: &MPoly, v: Var) -> Vec<(MPoly, u32)> {
    assert!(!p.is_zero());
    if !p.depends_on(v) {
        return Vec::new();
    }
    let prim = primitive_part(p, v);
    let dp = prim.derivative(v);
    let mut out = Vec::new();
    let a0 = gcd_mpoly(&prim, &dp);
    let mut b = prim.div_exact(&a0).unwrap();
    let mut c = dp.div_exact(&a0).unwrap();
    let mut i = 1u32;
    loop {
        let d = c.sub(&b.derivative(v));
        if d.is_zero() {
            if b.depends_on(v) {
                out.push((b.monic(), i));
            }
            break;
        }
        let a = gcd_mpoly(&b, &d);
        if a.depends_on(v) {
            out.push((a.monic(), i));
        }
        b = b.div_exact(&a).unwrap();
        c = d.div_exact(&a).unwrap();
        if b.is_constant() {
            break;
        }
        i += 1;
    }
    out
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

    #[test]
    fn graded_lex_leading() {
        // x + y^2: leading term should be y^2 (higher total degree)
        let p = x().add(&y().mul(&y()));
        assert_eq!(p.leading().unwrap().0, &Exp([0, 2, 0]));
        // x*y vs z^2: same degree, x*y wins lexicographically
        let p = x().mul(&y()).add(&z().mul(&z()));
        assert_eq!(p.leading().unwrap().0, &Exp([1, 1, 0]));
    }

    #[test]
    fn exact_division() {
        let p = x().add(&y());
        let r = x().sub(&y());
        let prod = p.mul(&r);
        assert_eq!(prod.div_exact(&p).unwrap(), r);
        assert!(prod.div_exact(&z()).is_none());
    }

    #[test]
    fn gcd_expand_and_divide() {
        // gcd((x+y)(z-1), (x+y)(z+1)) = x+y
        let g = x().add(&y());
        let a = g.mul(&z().sub(&MPoly::one()));
        let b = g.mul(&z().add(&MPoly::one()));
        let got = gcd_mpoly(&a, &b);
        assert_eq!(got, g.monic());
        assert!(got.divides(&a) && got.divides(&b));
    }

    #[test]
    fn gcd_coprime_by_resultant() {
        // gcd(z^2 - y, z^2 + y) = 1
        let a = z().mul(&z()).sub(&y());
        let b = z().mul(&z()).add(&y());
        assert!(gcd_mpoly(&a, &b).is_one());
    }

    #[test]
    fn gcd_with_zero() {
        let p = x().add(&y()).scale(&Coeff::from_i64(2));
        assert_eq!(gcd_mpoly(&p, &MPoly::zero()), p.monic());
    }

    #[test]
    fn squarefree_z2_z_minus_1() {
        // z^2 (z-1) -> [(z,2),(z-1,1)]
        let p = z().mul(&z()).mul(&z().sub(&MPoly::one()));
        let mut decomp = squarefree_decompose(&p, Var::Z);
        decomp.sort_by_key(|(_, m)| *m);
        assert_eq!(decomp.len(), 2);
        assert_eq!(decomp[1], (z(), 2));
        assert_eq!(decomp[0], (z().sub(&MPoly::one()), 1));
    }

    #[test]
    fn squarefree_already() {
        let p = z().mul(&z()).sub(&y());
        let decomp = squarefree_decompose(&p, Var::Z);
        assert_eq!(decomp, vec![(p, 1)]);
    }

    #[test]
    fn squarefree_gcd_oracle() {
        // (y+z)^3 (y-z) -> [(y+z,3),(y-z,1)]; oracle gcd(p, dp/dz) = (y+z)^2
        let a = y().add(&z());
        let b = y().sub(&z());
        let p = a.pow(3).mul(&b);
        let oracle = gcd_mpoly(&p, &p.derivative(Var::Z));
        assert_eq!(oracle, a.mul(&a).monic());
        let mut decomp = squarefree_decompose(&p, Var::Z);
        decomp.sort_by_key(|(_, m)| *m);
        assert_eq!(decomp, vec![(b.monic(), 1), (a.monic(), 3)]);
    }

    #[test]
    fn shift_substitution() {
        // (x+y)^2 shifted y -> y+1 gives (x+y+1)^2
        let p = x().add(&y()).pow(2);
        let shifted = p.shift_var_i64(Var::Y, 1);
        let expect = x().add(&y()).add(&MPoly::one()).pow(2);
        assert_eq!(shifted, expect);
    }

    #[test]
    fn qshift_substitution() {
        let p = x().mul(&y()).add(&z());
        let shifted = p.qshift_var(Var::Y, 2);
        let expect = x().mul(&y()).scale(&Coeff::q_power(2)).add(&z());
        assert_eq!(shifted, expect);
    }
}
