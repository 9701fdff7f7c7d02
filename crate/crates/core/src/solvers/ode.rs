//! Bounded-ansatz rational solutions of first-order linear ODE systems
//! `D_y(c) + c * M = rhs` over `Q(q)(x)(y)` -- with `M` the derivation
//! matrix of a quotient-ring power basis this says exactly that the element
//! with coordinates `c` has derivative `rhs`. The ansatz confines candidate
//! denominators to the system's own singularities up to a multiplicity
//! bound; a verified solution is definitive, failure is only definitive in
//! the provably complete subcases and is reported as unsupported otherwise.

use super::SolverBounds;
use crate::arith::{gcd_mpoly, MPoly, RatFun, Var, VarPoly};
use crate::solvers::rational_antiderivative;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OdeOutcome {
    Solved(Vec<RatFun>),
    NoSolution,
    Unsupported(String),
}

/// Solve `D_y(c) + c * M = rhs` for a rational row vector `c`.
pub fn bounded_ode_rational_solve(
    m: &[Vec<RatFun>],
    rhs: &[RatFun],
    bounds: &SolverBounds,
) -> OdeOutcome {
    let n = rhs.len();
    debug_assert!(m.len() == n && m.iter().all(|r| r.len() == n));
    let m_zero = m.iter().all(|r| r.iter().all(|c| c.is_zero()));
    if m_zero {
        // decoupled: plain antiderivatives, complete
        let mut out = Vec::with_capacity(n);
        for r in rhs {
            match rational_antiderivative(r, Var::Y) {
                Some(g) => out.push(g),
                None => return OdeOutcome::NoSolution,
            }
        }
        return OdeOutcome::Solved(out);
    }

    // candidate denominator: product of the distinct y-dependent denominator
    // factors of M and rhs, raised to the multiplicity bound
    let mut den_pool = MPoly::one();
    for f in m.iter().flatten().chain(rhs.iter()) {
        let d = f.den();
        if d.depends_on(Var::Y) {
            let g = gcd_mpoly(&den_pool, d);
            den_pool = den_pool.mul(&d.div_exact(&g).unwrap());
        }
    }
    let den = den_pool.pow(bounds.max_den_multiplicity);
    let deg = bounds.max_num_degree as usize + den.deg(Var::Y).max(0) as usize;

    // unknowns: coefficients of y^j in the numerator of each c_i
    let cols = n * (deg + 1);
    let denr = RatFun::from_mpoly(den.clone());
    // basis element value: y^j/den
    let basis = |i: usize, j: usize| -> (usize, RatFun) {
        let v = &RatFun::from_mpoly(MPoly::var(Var::Y).pow(j as u32)) / &denr;
        (i, v)
    };
    // residual of the equation for unit coefficient (i,j):
    // D_y(e) - e*M restricted to component k
    let mut residual_cols: Vec<Vec<RatFun>> = Vec::with_capacity(cols);
    for i in 0..n {
        for j in 0..=deg {
            let (_, v) = basis(i, j);
            let dv = v.derivative(Var::Y);
            let mut comp = vec![RatFun::zero(); n];
            comp[i] = dv;
            for (k, item) in comp.iter_mut().enumerate() {
                *item = &*item + &(&v * &m[i][k]);
            }
            residual_cols.push(comp);
        }
    }
    // match against rhs: flatten each component over powers of y after
    // clearing a common denominator
    let mut clear = MPoly::one();
    for c in residual_cols.iter().flatten().chain(rhs.iter()) {
        let g = gcd_mpoly(&clear, c.den());
        clear = clear.mul(&c.den().div_exact(&g).unwrap());
    }
    let mut rows: Vec<Vec<RatFun>> = Vec::new();
    let mut rvec: Vec<RatFun> = Vec::new();
    for k in 0..n {
        let cleared: Vec<VarPoly> = residual_cols
            .iter()
            .map(|comp| {
                let scaled = comp[k].num().mul(&clear.div_exact(comp[k].den()).unwrap());
                VarPoly::from_mpoly_full(&scaled, Var::Y)
            })
            .collect();
        let r_clear = VarPoly::from_mpoly_full(
            &rhs[k].num().mul(&clear.div_exact(rhs[k].den()).unwrap()),
            Var::Y,
        );
        let maxdeg = cleared
            .iter()
            .map(|p| p.degree())
            .chain(std::iter::once(r_clear.degree()))
            .max()
            .unwrap_or(-1);
        for pow in 0..=maxdeg.max(0) {
            let row: Vec<RatFun> = cleared.iter().map(|p| p.coeff(pow as usize)).collect();
            let rv = r_clear.coeff(pow as usize);
            if row.iter().all(|c| c.is_zero()) && rv.is_zero() {
                continue;
            }
            rows.push(row);
            rvec.push(rv);
        }
    }
    match crate::linalg::solve_affine(&rows, &rvec) {
        Some((sol, _)) => {
            let mut c = vec![RatFun::zero(); n];
            for i in 0..n {
                for j in 0..=deg {
                    let coeff = &sol[i * (deg + 1) + j];
                    if !coeff.is_zero() {
                        let (_, v) = basis(i, j);
                        c[i] = &c[i] + &(coeff * &v);
                    }
                }
            }
            // verify
            for k in 0..n {
                let mut lhs = c[k].derivative(Var::Y);
                for i in 0..n {
                    lhs = &lhs + &(&c[i] * &m[i][k]);
                }
                if lhs != rhs[k] {
                    return OdeOutcome::Unsupported(
                        "ansatz solution failed verification".into(),
                    );
                }
            }
            OdeOutcome::Solved(c)
        }
        None => OdeOutcome::Unsupported(format!(
            "no rational solution within degree {} and multiplicity {}",
            bounds.max_num_degree, bounds.max_den_multiplicity
        )),
    }
}
