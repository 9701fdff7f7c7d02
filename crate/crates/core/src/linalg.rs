//! Exact linear algebra over the fields used by the engine, plus small
//! integer-lattice utilities for shift witnesses.

use crate::arith::{Coeff, RatFun};
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Minimal field interface for Gaussian elimination.
pub trait Field: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

impl Field for Coeff {
    fn zero() -> Self {
        Coeff::zero()
    }
    fn is_zero(&self) -> bool {
        Coeff::is_zero(self)
    }
    fn one() -> Self {
        Coeff::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

impl Field for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

/// Row echelon reduction in place; returns pivot column per row rank order.
fn row_reduce<F: Field>(rows: &mut Vec<Vec<F>>) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = F::one().div(&rows[rank][col]);
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let t = rows[rank][c].mul(&factor);
                    rows[r][c] = rows[r][c].sub(&t);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    pivots
}

/// Basis of the right kernel `{v : M v = 0}` of the matrix given by rows.
pub fn kernel_basis<F: Field>(rows: &[Vec<F>]) -> Vec<Vec<F>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if ncols == 0 {
        return Vec::new();
    }
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let pivots = row_reduce(&mut m);
    let mut basis = Vec::new();
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = F::zero().sub(&m[r][free]);
        }
        basis.push(v);
    }
    basis
}

/// Any single nonzero kernel vector, if one exists.
pub fn kernel_vector<F: Field>(rows: &[Vec<F>]) -> Option<Vec<F>> {
    kernel_basis(rows).into_iter().next()
}

/// Solve `M v = rhs`: returns `(particular, kernel_basis)` or `None` when
/// inconsistent.
pub fn solve_affine<F: Field>(rows: &[Vec<F>], rhs: &[F]) -> Option<(Vec<F>, Vec<Vec<F>>)> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<F>> = rows
        .iter()
        .zip(rhs.iter())
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut m);
    // inconsistent when a pivot lands in the rhs column
    if pivots.last().is_some_and(|&c| c == ncols) {
        return None;
    }
    let mut particular = vec![F::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        particular[pc] = m[r][ncols].clone();
    }
    let kernel = kernel_basis(rows);
    Some((particular, kernel))
}

// ---------------------------------------------------------------------------
// Integer lattices
// ---------------------------------------------------------------------------

/// Solve the integer linear system `M x = c` (entries BigInt). Returns
/// `(particular, lattice_basis)` of all integer solutions, or `None`.
pub fn solve_integer(m: &[Vec<BigInt>], c: &[BigInt]) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    if cols == 0 {
        return if c.iter().all(|x| x.is_zero()) {
            Some((Vec::new(), Vec::new()))
        } else {
            None
        };
    }
    // Smith normal form: U * M * V = D
    let (d, u, v) = smith_normal_form(m, rows, cols);
    // M x = c  <=>  D y = U c with x = V y
    let uc: Vec<BigInt> = (0..rows)
        .map(|i| (0..rows).map(|j| &u[i][j] * &c[j]).sum())
        .collect();
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows.min(cols) {
        if d[i][i].is_zero() {
            if !uc[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = uc[i].div_rem(&d[i][i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    for item in uc.iter().skip(cols) {
        if !item.is_zero() {
            return None;
        }
    }
    let x: Vec<BigInt> = (0..cols)
        .map(|i| (0..cols).map(|j| &v[i][j] * &y[j]).sum())
        .collect();
    // lattice basis: columns of V for indices with zero diagonal
    let mut basis = Vec::new();
    for j in 0..cols {
        let dj = if j < rows.min(cols) {
            d[j][j].clone()
        } else {
            BigInt::zero()
        };
        if dj.is_zero() {
            basis.push((0..cols).map(|i| v[i][j].clone()).collect());
        }
    }
    Some((x, basis))
}

/// Smith normal form of an integer matrix: returns `(D, U, V)` with
/// `U M V = D`, `U`, `V` unimodular, `D` diagonal.
pub fn smith_normal_form(
    m: &[Vec<BigInt>],
    rows: usize,
    cols: usize,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut d: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // find a pivot with minimal absolute value in the submatrix
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[i][j].is_zero()
                        && best
                            .map(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (d, u, v);
            };
            if pi != t {
                d.swap(t, pi);
                u.swap(t, pi);
            }
            if pj != t {
                for row in d.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let mut done = true;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = div_nearest(&d[i][t], &d[t][t]);
                    for j in 0..cols {
                        let s = &d[t][j] * &q;
                        d[i][j] -= s;
                    }
                    for j in 0..rows {
                        let s = &u[t][j] * &q;
                        u[i][j] -= s;
                    }
                    if !d[i][t].is_zero() {
                        done = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = div_nearest(&d[t][j], &d[t][t]);
                    for i in 0..rows {
                        let s = &d[i][t] * &q;
                        d[i][j] -= s;
                    }
                    for i in 0..cols {
                        let s = &v[i][t] * &q;
                        v[i][j] -= s;
                    }
                    if !d[t][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done
                && (t + 1..rows).all(|i| d[i][t].is_zero())
                && (t + 1..cols).all(|j| d[t][j].is_zero())
            {
                break;
            }
        }
    }
    (d, u, v)
}

fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    // round(a/b): keeps the remainders small during elimination
    let two = BigInt::from(2);
    let (mut q, r) = a.div_rem(b);
    if &r.abs() * &two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Convert a rational affine subspace `{p + span(dirs)}` of `Q^n` into its
/// integer points: returns `(point, lattice_basis)` or `None` when the
/// subspace has no integer point.
pub fn integer_points_of_affine(
    point: &[BigRational],
    dirs: &[Vec<BigRational>],
) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
    let n = point.len();
    // Describe the affine space as solutions of A x = b where the rows of A
    // span the orthogonal complement of the direction space.
    let normals: Vec<Vec<BigRational>> = if dirs.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![<BigRational as Zero>::zero(); n];
                v[i] = <BigRational as One>::one();
                v
            })
            .collect()
    } else {
        kernel_basis(&dirs.to_vec())
    };
    // each normal gives constraint <normal, x> = <normal, point>
    let mut m_int: Vec<Vec<BigInt>> = Vec::new();
    let mut c_int: Vec<BigInt> = Vec::new();
    for normal in &normals {
        let b: BigRational = normal
            .iter()
            .zip(point.iter())
            .map(|(a, p)| a * p)
            .sum();
        // clear denominators
        let mut denlcm = BigInt::one();
        for x in normal.iter().chain(std::iter::once(&b)) {
            denlcm = denlcm.lcm(x.denom());
        }
        m_int.push(
            normal
                .iter()
                .map(|x| (x * BigRational::from_integer(denlcm.clone())).to_integer())
                .collect(),
        );
        c_int.push((b * BigRational::from_integer(denlcm.clone())).to_integer());
    }
    if m_int.is_empty() {
        // whole space: any integer point, lattice = Z^n
        let pt = vec![0i64; n];
        let basis = (0..n)
            .map(|i| {
                let mut v = vec![0i64; n];
                v[i] = 1;
                v
            })
            .collect();
        return Some((pt, basis));
    }
    let (x, basis) = solve_integer(&m_int, &c_int)?;
    let to_i64 = |v: &[BigInt]| -> Option<Vec<i64>> {
        v.iter().map(|b| i64::try_from(b.clone()).ok()).collect()
    };
    Some((to_i64(&x)?, basis.iter().map(|b| to_i64(b)).collect::<Option<Vec<_>>>()?))
}



// ---------------------------------------------------------------------------
// dense univariate polynomial helpers over a Field (used for resultants and
// interpolation in the dispersion machinery)
// ---------------------------------------------------------------------------

pub mod polyf {
    use super::Field;

    pub fn trim<F: Field>(p: &mut Vec<F>) {
        while matches!(p.last(), Some(c) if c.is_zero()) {
            p.pop();
        }
    }

    pub fn deg<F: Field>(p: &[F]) -> isize {
        p.len() as isize - 1
    }

    pub fn add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
        let n = a.len().max(b.len());
        let get = |p: &[F], i: usize| p.get(i).cloned().unwrap_or_else(F::zero);
        let mut out: Vec<F> = (0..n).map(|i| get(a, i).add(&get(b, i))).collect();
        trim(&mut out);
        out
    }

    pub fn scale<F: Field>(a: &[F], c: &F) -> Vec<F> {
        if c.is_zero() {
            return Vec::new();
        }
        a.iter().map(|x| x.mul(c)).collect()
    }

    pub fn mul<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![F::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        trim(&mut out);
        out
    }

    pub fn rem<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
        assert!(!b.is_empty());
        let mut r: Vec<F> = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead = &b[db];
        while r.len() > db {
            let dr = r.len() - 1;
            let c = r[dr].div(lead);
            for j in 0..=db {
                let t = b[j].mul(&c);
                r[dr - db + j] = r[dr - db + j].sub(&t);
            }
            trim(&mut r);
        }
        r
    }

    pub fn eval<F: Field>(p: &[F], at: &F) -> F {
        let mut acc = F::zero();
        for c in p.iter().rev() {
            acc = acc.mul(at).add(c);
        }
        acc
    }

    /// Resultant by the Euclidean recurrence.
    pub fn resultant<F: Field>(a: &[F], b: &[F]) -> F {
        let mut a: Vec<F> = a.to_vec();
        let mut b: Vec<F> = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        let mut acc = F::one();
        let mut sign_flip = false;
        loop {
            if a.is_empty() || b.is_empty() {
                return F::zero();
            }
            if b.len() == 1 {
                // res(a, const) = const^deg(a)
                let mut p = F::one();
                for _ in 0..a.len() - 1 {
                    p = p.mul(&b[0]);
                }
                let v = acc.mul(&p);
                return if sign_flip { F::zero().sub(&v) } else { v };
            }
            if a.len() < b.len() {
                // res(a,b) = (-1)^(deg a * deg b) res(b,a)
                if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
                    sign_flip = !sign_flip;
                }
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = rem(&a, &b);
            // res(a,b) = lc(b)^(deg a - deg r) * (-1)^(deg a * deg b) * res(b, r)
            let da = a.len() as isize - 1;
            let db = b.len() as isize - 1;
            let dr = r.len() as isize - 1;
            let lead = b[b.len() - 1].clone();
            let mut p = F::one();
            for _ in 0..(da - dr) {
                p = p.mul(&lead);
            }
            acc = acc.mul(&p);
            if (da % 2 == 1) && (db % 2 == 1) {
                sign_flip = !sign_flip;
            }
            a = b;
            b = r;
        }
    }

    /// Lagrange interpolation through `(x_i, y_i)`.
    pub fn interpolate<F: Field>(points: &[(F, F)]) -> Vec<F> {
        let mut acc: Vec<F> = Vec::new();
        for (i, (xi, yi)) in points.iter().enumerate() {
            // basis polynomial prod_{j!=i} (t - x_j)/(x_i - x_j)
            let mut basis = vec![F::one()];
            let mut denom = F::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = mul(&basis, &[F::zero().sub(xj), F::one()]);
                denom = denom.mul(&xi.sub(xj));
            }
            let c = yi.div(&denom);
            acc = add(&acc, &scale(&basis, &c));
        }
        acc
    }
}
