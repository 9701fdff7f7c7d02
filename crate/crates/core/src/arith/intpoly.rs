//! Integer polynomials in `q, x, y, z` used internally by the gcd. The
//! heuristic evaluation gcd maps a multivariate gcd to integer gcds at big
//! evaluation points and reconstructs candidates by balanced base expansion;
//! every candidate is verified by exact division, so a lucky point is a
//! matter of speed, never of correctness.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use std::collections::BTreeMap;

/// Exponents ordered `q, x, y, z`.
pub type Exp4 = [u32; 4];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub terms: BTreeMap<Exp4, BigInt>,
}

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(c: BigInt) -> IntPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0, 0, 0, 0], c);
        }
        IntPoly { terms }
    }

    fn add_term(&mut self, e: Exp4, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        let mut best = None;
        for e in self.terms.keys() {
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    best = Some(best.map_or(i, |b: usize| b.max(i)));
                }
            }
        }
        best
    }

    pub fn depends_on(&self, v: usize) -> bool {
        self.terms.keys().any(|e| e[v] > 0)
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x / &c)).collect(),
        }
    }

    pub fn max_norm(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Substitute variable `v` by the integer `at`.
    pub fn eval_var(&self, v: usize, at: &BigInt) -> IntPoly {
        let deg = self.terms.keys().map(|e| e[v]).max().unwrap_or(0);
        let mut powers = Vec::with_capacity(deg as usize + 1);
        let mut p = BigInt::one();
        for _ in 0..=deg {
            powers.push(p.clone());
            p *= at;
        }
        let mut out = IntPoly::zero();
        for (e, c) in &self.terms {
            let mut ne = *e;
            ne[v] = 0;
            out.add_term(ne, c * &powers[e[v] as usize]);
        }
        out
    }

    /// Balanced base-`xi` expansion in variable `v`: reconstruct a
    /// polynomial `g` with `g(v = xi) = self` and coefficients in
    /// `(-xi/2, xi/2]`.
    pub fn from_evaluation(gamma: &IntPoly, v: usize, xi: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero();
        let mut cur = gamma.clone();
        let mut k = 0u32;
        let half = xi / 2;
        while !cur.is_zero() {
            let mut digit = IntPoly::zero();
            let mut next = IntPoly::zero();
            for (e, c) in &cur.terms {
                let mut r = c.mod_floor(xi);
                if r > half {
                    r -= xi;
                }
                if !r.is_zero() {
                    digit.add_term(*e, r.clone());
                }
                let q = (c - &r) / xi;
                if !q.is_zero() {
                    next.add_term(*e, q);
                }
            }
            for (e, c) in digit.terms {
                let mut ne = e;
                ne[v] = k;
                out.add_term(ne, c);
            }
            cur = next;
            k += 1;
            if k > 10_000 {
                return IntPoly::zero();
            }
        }
        out
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = IntPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Exact division over `Q` (graded-lex leading-term elimination);
    /// `None` when not divisible.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero());
        // work over rationals to dodge integer-content issues
        let mut rem: BTreeMap<Exp4, BigRational> = self
            .terms
            .iter()
            .map(|(e, c)| (*e, BigRational::from_integer(c.clone())))
            .collect();
        let lead = |m: &BTreeMap<Exp4, BigRational>| -> Option<Exp4> {
            m.keys()
                .max_by_key(|e| (e.iter().sum::<u32>(), **e))
                .copied()
        };
        let (de, dc) = {
            let e = lead(&d.terms.iter().map(|(e, c)| (*e, BigRational::from_integer(c.clone()))).collect())?;
            (e, BigRational::from_integer(d.terms[&e].clone()))
        };
        let mut quot: BTreeMap<Exp4, BigRational> = BTreeMap::new();
        while let Some(re) = lead(&rem) {
            if (0..4).any(|i| re[i] < de[i]) {
                return None;
            }
            let e = [re[0] - de[0], re[1] - de[1], re[2] - de[2], re[3] - de[3]];
            let c = rem[&re].clone() / dc.clone();
            quot.insert(e, c.clone());
            for (fe, fc) in &d.terms {
                let te = [e[0] + fe[0], e[1] + fe[1], e[2] + fe[2], e[3] + fe[3]];
                let sub = &c * BigRational::from_integer(fc.clone());
                let entry = rem.entry(te).or_insert_with(BigRational::zero);
                *entry -= sub;
                if entry.is_zero() {
                    rem.remove(&te);
                }
            }
        }
        // success: quot may be rational; scale to integers
        let mut denlcm = BigInt::one();
        for c in quot.values() {
            denlcm = denlcm.lcm(c.denom());
        }
        if !denlcm.is_one() {
            // divisible over Q but not over Z; still a valid cofactor test
            // for primitive inputs this does not happen
            return Some(IntPoly {
                terms: quot
                    .into_iter()
                    .map(|(e, c)| (e, (c * BigRational::from_integer(denlcm.clone())).to_integer()))
                    .collect(),
            });
        }
        Some(IntPoly {
            terms: quot.into_iter().map(|(e, c)| (e, c.to_integer())).collect(),
        })
    }
}

/// Heuristic gcd over `Z[q,x,y,z]`; `None` when all evaluation points were
/// unlucky (callers fall back to a slower complete path).
pub fn heugcd(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    let ca = a.content();
    let cb = b.content();
    let cg = ca.gcd(&cb);
    let pa = a.primitive();
    let pb = b.primitive();
    let g = heugcd_primitive(&pa, &pb, 0)?;
    Some(IntPoly {
        terms: g.terms.iter().map(|(e, c)| (*e, c * &cg)).collect(),
    })
}

fn heugcd_primitive(a: &IntPoly, b: &IntPoly, depth: usize) -> Option<IntPoly> {
    if depth > 12 {
        return None;
    }
    let Some(v) = a.max_var().into_iter().chain(b.max_var()).max() else {
        // both constants
        return Some(IntPoly::constant(a.content().gcd(&b.content())));
    };
    if !a.depends_on(v) || !b.depends_on(v) {
        // gcd free of v: recurse on contents w.r.t. v
        let strip = |p: &IntPoly| -> Vec<IntPoly> {
            let mut by_deg: BTreeMap<u32, IntPoly> = BTreeMap::new();
            for (e, c) in &p.terms {
                let mut ne = *e;
                ne[v] = 0;
                by_deg.entry(e[v]).or_insert_with(IntPoly::zero).add_term(ne, c.clone());
            }
            by_deg.into_values().collect()
        };
        let (dep, other) = if a.depends_on(v) { (a, b) } else { (b, a) };
        let mut g = other.clone();
        for c in strip(dep) {
            g = heugcd_primitive(&g, &c, depth + 1)?;
        }
        return Some(g);
    }
    let two = BigInt::from(2);
    let min_norm = a.max_norm().min(b.max_norm());
    let mut xi: BigInt = &two * &min_norm + BigInt::from(29);
    for _ in 0..6 {
        let ea = a.eval_var(v, &xi);
        let eb = b.eval_var(v, &xi);
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(gamma) = heugcd_primitive(&ea, &eb, depth + 1) {
                let g = IntPoly::from_evaluation(&gamma, v, &xi).primitive();
                if !g.is_zero() && g.div_exact_both(a, b) {
                    return Some(g);
                }
            }
        }
        // next point: grow by an irrational-ish ratio to dodge correlations
        xi = (&xi * BigInt::from(73794)) / BigInt::from(27011) + BigInt::from(37);
    }
    None
}

impl IntPoly {
    fn div_exact_both(&self, a: &IntPoly, b: &IntPoly) -> bool {
        a.div_exact(self).is_some() && b.div_exact(self).is_some()
    }
}

// ---------------------------------------------------------------------------
// conversions to and from MPoly
// ---------------------------------------------------------------------------

use super::coeff::Coeff;
use super::mpoly::{Exp, MPoly};
use super::qpoly::QPoly;

/// Clear all q- and rational denominators; the scaling is irrelevant for
/// gcd purposes.
pub fn mpoly_to_int(p: &MPoly) -> IntPoly {
    let mut qden = QPoly::one();
    for (_, c) in p.terms() {
        let g = qden.gcd(c.den());
        qden = qden.mul(&c.den().div_exact(&g).unwrap());
    }
    // now every coefficient times qden is a q-polynomial
    let mut ratlcm = BigInt::one();
    let mut cleared: Vec<(Exp, QPoly)> = Vec::new();
    for (e, c) in p.terms() {
        let scaled = c.num().mul(&qden.div_exact(c.den()).unwrap());
        for r in scaled.coeffs() {
            ratlcm = ratlcm.lcm(r.denom());
        }
        cleared.push((*e, scaled));
    }
    let scale = BigRational::from_integer(ratlcm);
    let mut out = IntPoly::zero();
    for (e, qp) in cleared {
        for (k, r) in qp.coeffs().iter().enumerate() {
            if !r.is_zero() {
                out.add_term(
                    [k as u32, e.0[0], e.0[1], e.0[2]],
                    (r * &scale).to_integer(),
                );
            }
        }
    }
    out
}

pub fn int_to_mpoly(p: &IntPoly) -> MPoly {
    let mut by_xyz: BTreeMap<[u32; 3], Vec<(usize, BigInt)>> = BTreeMap::new();
    for (e, c) in &p.terms {
        by_xyz
            .entry([e[1], e[2], e[3]])
            .or_default()
            .push((e[0] as usize, c.clone()));
    }
    let mut out = MPoly::zero();
    for (xyz, qterms) in by_xyz {
        let deg = qterms.iter().map(|(k, _)| *k).max().unwrap_or(0);
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (k, c) in qterms {
            coeffs[k] = BigRational::from_integer(c);
        }
        let qp = QPoly::from_coeffs(coeffs);
        out = out.add(&MPoly::monomial(Coeff::from_poly(qp), Exp(xyz)));
    }
    out
}
