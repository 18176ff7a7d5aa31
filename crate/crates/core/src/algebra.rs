//! Coefficient algebras for truncated series arithmetic.
//!
//! A [`Coefficient`] is anything the series layer can add, scale by a complex
//! number, multiply, invert and measure. Four algebras are used: plain complex
//! scalars, polynomials in an eigenvalue `mu` (the per-eigenvalue backend for
//! Einstein models), grid scalar fields and grid matrix fields (the latter two
//! live in [`crate::chart`]).

use num_complex::Complex64;

pub const ZERO_TOL: f64 = 1e-11;

pub trait Coefficient: Clone + Send + Sync {
    /// Tag identifying the algebra and shape; arithmetic across different
    /// tags is rejected by the series layer.
    fn algebra_tag(&self) -> String;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: Complex64) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Multiplicative inverse, when one exists in the algebra.
    fn try_inverse(&self) -> Option<Self>;
    /// Sup-style magnitude used for zero tests and residual norms.
    fn norm(&self) -> f64;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }
}

impl Coefficient for Complex64 {
    fn algebra_tag(&self) -> String {
        "complex".into()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, c: Complex64) -> Self {
        self * c
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn norm(&self) -> f64 {
        num_complex::Complex::norm(*self)
    }
}

/// Polynomial in the Laplace eigenvalue `mu`, the "spectral scalar" backend.
///
/// `coeffs[d]` multiplies `mu^d`. On an Einstein model a scalar quantity
/// produced by the boundary recursion from a single eigenfunction is exactly
/// such a polynomial; evaluating at `mu = 0` gives the action on constants.
#[derive(Debug, Clone, PartialEq)]
pub struct MuPoly {
    coeffs: Vec<Complex64>,
}

impl MuPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.norm() == 0.0) == Some(true) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        MuPoly { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        MuPoly { coeffs: vec![c] }
    }

    /// The monomial `mu`.
    pub fn mu() -> Self {
        MuPoly {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn eval(&self, mu: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * mu + c;
        }
        acc
    }
}

impl Coefficient for MuPoly {
    fn algebra_tag(&self) -> String {
        "mu-poly".into()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        MuPoly::new(out)
    }
    fn scale(&self, c: Complex64) -> Self {
        MuPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        MuPoly::new(out)
    }
    fn zero_like(&self) -> Self {
        MuPoly::constant(Complex64::new(0.0, 0.0))
    }
    fn one_like(&self) -> Self {
        MuPoly::constant(Complex64::new(1.0, 0.0))
    }
    fn try_inverse(&self) -> Option<Self> {
        // Only degree-zero polynomials are invertible within the algebra.
        if self.degree() == 0 && self.coeffs[0].norm() > 0.0 {
            Some(MuPoly::constant(1.0 / self.coeffs[0]))
        } else {
            None
        }
    }
    fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_poly_eval_and_mul() {
        let p = MuPoly::mu().add(&MuPoly::constant(Complex64::new(2.0, 0.0)));
        let q = p.mul(&p); // (mu + 2)^2
        assert_eq!(q.degree(), 2);
        let v = q.eval(Complex64::new(3.0, 0.0));
        assert!((v - Complex64::new(25.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn mu_poly_inverse_only_constants() {
        assert!(MuPoly::mu().try_inverse().is_none());
        let c = MuPoly::constant(Complex64::new(2.0, 0.0));
        let inv = c.try_inverse().unwrap();
        assert!((inv.eval(Complex64::new(0.0, 0.0)) - 0.5).norm() < 1e-15);
    }
}
