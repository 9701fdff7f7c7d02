//! Arithmetic in `K(x,y)[z]/(d)` for `d` monic and squarefree in `z`:
//! the home of residues at nonlinear denominator factors. Derivations
//! extend to the quotient through the relation `d(x,y,z) = 0`.

use crate::arith::{Coeff, MPoly, RatFun, Var, VarPoly};
use crate::error::Error;

/// Element of the quotient by `modulus` in the power basis
/// `1, z, ..., z^(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicElement {
    pub modulus: MPoly,
    pub coords: Vec<RatFun>,
}

impl AlgebraicElement {
    pub fn new(modulus: MPoly, mut coords: Vec<RatFun>) -> AlgebraicElement {
        let n = modulus.deg(Var::Z) as usize;
        coords.resize(n, RatFun::zero());
        AlgebraicElement { modulus, coords }
    }

    pub fn zero(modulus: MPoly) -> AlgebraicElement {
        let n = modulus.deg(Var::Z) as usize;
        AlgebraicElement {
            modulus,
            coords: vec![RatFun::zero(); n],
        }
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Reduce a z-polynomial with rational-function coefficients modulo the
    /// modulus.
    pub fn from_varpoly(modulus: &MPoly, p: &VarPoly) -> AlgebraicElement {
        debug_assert_eq!(p.var, Var::Z);
        let m = VarPoly::from_mpoly_full(modulus, Var::Z).monic();
        let (_, r) = p.divrem(&m);
        AlgebraicElement::new(modulus.clone(), r.coeffs().to_vec())
    }

    /// View a rational function whose denominator is coprime to the modulus
    /// as a quotient element: numerator times the inverse of the
    /// denominator, both reduced.
    pub fn from_ratfun(modulus: &MPoly, f: &RatFun) -> Result<AlgebraicElement, Error> {
        let m = VarPoly::from_mpoly_full(modulus, Var::Z).monic();
        let (num, den) = VarPoly::fraction_parts(f, Var::Z);
        let (_, nr) = num.divrem(&m);
        let (_, dr) = den.divrem(&m);
        let denel = AlgebraicElement::new(modulus.clone(), dr.coeffs().to_vec());
        let inv = denel.inverse()?;
        Ok(AlgebraicElement::new(modulus.clone(), nr.coeffs().to_vec()).mul(&inv))
    }

    pub fn to_varpoly(&self) -> VarPoly {
        VarPoly::from_coeffs(Var::Z, self.coords.clone())
    }

    pub fn add(&self, other: &AlgebraicElement) -> AlgebraicElement {
        debug_assert_eq!(self.modulus, other.modulus);
        AlgebraicElement::new(
            self.modulus.clone(),
            self.coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &AlgebraicElement) -> AlgebraicElement {
        debug_assert_eq!(self.modulus, other.modulus);
        AlgebraicElement::new(
            self.modulus.clone(),
            self.coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &RatFun) -> AlgebraicElement {
        AlgebraicElement::new(
            self.modulus.clone(),
            self.coords.iter().map(|a| a * c).collect(),
        )
    }

    pub fn mul(&self, other: &AlgebraicElement) -> AlgebraicElement {
        debug_assert_eq!(self.modulus, other.modulus);
        let m = VarPoly::from_mpoly_full(&self.modulus, Var::Z).monic();
        let prod = self.to_varpoly().mul(&other.to_varpoly());
        let (_, r) = prod.divrem(&m);
        AlgebraicElement::new(self.modulus.clone(), r.coeffs().to_vec())
    }

    /// Inverse modulo the modulus; fails when the element shares a factor
    /// with it.
    pub fn inverse(&self) -> Result<AlgebraicElement, Error> {
        let m = VarPoly::from_mpoly_full(&self.modulus, Var::Z).monic();
        let s = VarPoly::solve_congruence(&self.to_varpoly(), &VarPoly::one(Var::Z), &m)?;
        Ok(AlgebraicElement::new(self.modulus.clone(), s.coeffs().to_vec()))
    }

    /// `D_w` on the quotient: coefficients differentiate and the class of
    /// `z` moves by `-d_w/d_z mod d`.
    pub fn derivative(&self, w: Var) -> AlgebraicElement {
        let dz = self.z_derivative(w);
        let mut out = AlgebraicElement::zero(self.modulus.clone());
        // coefficient part
        for (i, c) in self.coords.iter().enumerate() {
            let mut v = AlgebraicElement::zero(self.modulus.clone());
            if i < v.coords.len() {
                v.coords[i] = c.derivative(w);
            }
            out = out.add(&v);
        }
        // chain-rule part: sum c_i * i * z^(i-1) * D_w(z)
        let mut chain = AlgebraicElement::zero(self.modulus.clone());
        for (i, c) in self.coords.iter().enumerate() {
            if i == 0 || c.is_zero() {
                continue;
            }
            let mut v = AlgebraicElement::zero(self.modulus.clone());
            v.coords[i - 1] = c.scale(&Coeff::from_i64(i as i64));
            chain = chain.add(&v);
        }
        out.add(&chain.mul(&dz))
    }

    /// The class of `D_w(z) = -d_w/d_z` in the quotient.
    pub fn z_derivative(&self, w: Var) -> AlgebraicElement {
        let dw = self.modulus.derivative(w);
        let dz = self.modulus.derivative(Var::Z);
        let dz_el = AlgebraicElement::from_varpoly(&self.modulus, &VarPoly::from_mpoly_full(&dz, Var::Z));
        let inv = dz_el
            .inverse()
            .expect("squarefree modulus is coprime to its z-derivative");
        let dw_el =
            AlgebraicElement::from_varpoly(&self.modulus, &VarPoly::from_mpoly_full(&dw, Var::Z));
        dw_el.neg().mul(&inv)
    }

    pub fn neg(&self) -> AlgebraicElement {
        AlgebraicElement::new(self.modulus.clone(), self.coords.iter().map(|c| -c).collect())
    }

    /// Derivation matrix of the power basis: row `i` holds the coordinates
    /// of `D_w(z^i)`.
    pub fn derivation_matrix(modulus: &MPoly, w: Var) -> Vec<Vec<RatFun>> {
        let n = modulus.deg(Var::Z) as usize;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = AlgebraicElement::zero(modulus.clone());
            e.coords[i] = RatFun::one();
            rows.push(e.derivative(w).coords);
        }
        rows
    }
}

/// The residue of `a/b` at the factor `d` of the squarefree (in z)
/// denominator `b`: the class of `a * (b/d)^(-1) * d_z(d)^(-1) ... ` --
/// concretely the coefficient of `1/(z - beta)` summed into the quotient:
/// `res = a / ((b/d)' ...)`; computed as `a * inv(b/d) * inv(d_z)` mod `d`.
pub fn residue_at_factor(a: &MPoly, b: &MPoly, d: &MPoly) -> Result<AlgebraicElement, Error> {
    let cof = b.div_exact(d).ok_or_else(|| {
        Error::BadFactorization(format!("{} does not divide the denominator", d))
    })?;
    let a_el = AlgebraicElement::from_varpoly(d, &VarPoly::from_mpoly_full(a, Var::Z));
    let cof_el = AlgebraicElement::from_varpoly(d, &VarPoly::from_mpoly_full(&cof, Var::Z));
    let dz_el = AlgebraicElement::from_varpoly(
        d,
        &VarPoly::from_mpoly_full(&d.derivative(Var::Z), Var::Z),
    );
    Ok(a_el.mul(&cof_el.inverse()?).mul(&dz_el.inverse()?))
}

/// Rebuild the rational function with prescribed residues: given `h` in the
/// quotient by `d`, the unique proper fraction with denominator `d` whose
/// residue at each root `beta` is `h(beta)` is `N/d` with
/// `N = h * d_z mod d`.
pub fn fraction_with_residues(h: &AlgebraicElement) -> RatFun {
    let d = &h.modulus;
    let dz = AlgebraicElement::from_varpoly(d, &VarPoly::from_mpoly_full(&d.derivative(Var::Z), Var::Z));
    let num = h.mul(&dz).to_varpoly().to_ratfun();
    &num / &RatFun::from_mpoly(d.clone())
}
