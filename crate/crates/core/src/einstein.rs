//! Exact per-eigenvalue backend for Einstein model boundaries.
//!
//! The round spheres (and any Einstein metric with `Ric = (n-1) lambda h`)
//! never get a coordinate chart here; scalar quantities produced from a single
//! Laplace eigenfunction are polynomials in the eigenvalue `mu`, and curvature
//! scalars are constants. This keeps the model spaces exact.

use num_complex::Complex64;

use crate::algebra::MuPoly;
use crate::error::{Error, Result};

/// An Einstein model boundary: `Ric(h) = (n-1) lambda h`, with total volume.
#[derive(Debug, Clone, Copy)]
pub struct EinsteinModel {
    pub n: usize,
    pub lambda: f64,
    pub volume: f64,
}

impl EinsteinModel {
    pub fn new(n: usize, lambda: f64, volume: f64) -> Result<Self> {
        if n == 0 || volume <= 0.0 {
            return Err(Error::InvalidParameter(
                "Einstein model needs n >= 1 and positive volume".into(),
            ));
        }
        Ok(EinsteinModel { n, lambda, volume })
    }

    /// Unit round sphere S^n: lambda = 1, volume 2 pi^{(n+1)/2} / Gamma((n+1)/2).
    pub fn round_sphere(n: usize) -> Result<Self> {
        let vol = unit_sphere_volume(n)?;
        Self::new(n, 1.0, vol)
    }

    /// Laplace eigenvalue of the degree-k spherical harmonics on the unit
    /// round sphere: k (k + n - 1).
    pub fn sphere_eigenvalue(&self, k: usize) -> f64 {
        (k * (k + self.n - 1)) as f64
    }

    pub fn scalar_curvature(&self) -> f64 {
        (self.n * (self.n - 1)) as f64 * self.lambda
    }

    pub fn j_scalar(&self) -> f64 {
        self.scalar_curvature() / (2.0 * (self.n as f64 - 1.0))
    }

    /// Schouten tensor coefficient: P_ij = (lambda/2) h_ij.
    pub fn schouten_coeff(&self) -> f64 {
        self.lambda / 2.0
    }

    /// Ricci coefficient: R_ij = (n-1) lambda h_ij.
    pub fn ricci_coeff(&self) -> f64 {
        (self.n as f64 - 1.0) * self.lambda
    }

    pub fn p_norm2(&self) -> f64 {
        let c = self.schouten_coeff();
        self.n as f64 * c * c
    }

    pub fn ricci_norm2(&self) -> f64 {
        let c = self.ricci_coeff();
        self.n as f64 * c * c
    }

    /// Action of the Laplacian on a spectral scalar: multiplication by mu.
    pub fn laplace(&self, p: &MuPoly) -> MuPoly {
        p.mul_by_mu()
    }

    /// `int_M p(Delta) phi_mu dv_h` for the constant eigenfunction branch:
    /// meaningful for mu = 0 (phi = 1), where it is p(0) * volume.
    pub fn integrate_constant_branch(&self, p: &MuPoly) -> Complex64 {
        p.eval(Complex64::new(0.0, 0.0)) * self.volume
    }
}

impl MuPoly {
    pub fn mul_by_mu(&self) -> MuPoly {
        let mut c = vec![Complex64::new(0.0, 0.0)];
        c.extend_from_slice(self.coeffs());
        MuPoly::new(c)
    }
}

fn unit_sphere_volume(n: usize) -> Result<f64> {
    use std::f64::consts::PI;
    // 2 pi^{(n+1)/2} / Gamma((n+1)/2), with half-integer Gamma evaluated exactly.
    let half = (n + 1) as f64 / 2.0;
    let gamma_half = if (n + 1) % 2 == 0 {
        // integer argument
        let m = (n + 1) / 2;
        (1..m).map(|k| k as f64).product::<f64>()
    } else {
        // half-integer argument: Gamma(1/2 + m) = (2m)! sqrt(pi) / (4^m m!)
        let m = n / 2;
        let mut v = PI.sqrt();
        for k in 0..m {
            v *= 0.5 + k as f64;
        }
        v
    };
    if n > 16 {
        return Err(Error::InvalidParameter("sphere dimension too large".into()));
    }
    Ok(2.0 * PI.powf(half) / gamma_half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_volumes() {
        let s2 = EinsteinModel::round_sphere(2).unwrap();
        assert!((s2.volume - 4.0 * PI).abs() < 1e-12);
        let s4 = EinsteinModel::round_sphere(4).unwrap();
        assert!((s4.volume - 8.0 * PI * PI / 3.0).abs() < 1e-12);
        let s3 = EinsteinModel::round_sphere(3).unwrap();
        assert!((s3.volume - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn curvature_constants_unit_s4() {
        let s4 = EinsteinModel::round_sphere(4).unwrap();
        assert_eq!(s4.scalar_curvature(), 12.0);
        assert_eq!(s4.j_scalar(), 2.0);
        assert_eq!(s4.ricci_coeff(), 3.0);
        assert_eq!(s4.schouten_coeff(), 0.5);
        assert_eq!(s4.ricci_norm2(), 36.0);
    }

    #[test]
    fn sphere_eigenvalues() {
        let s4 = EinsteinModel::round_sphere(4).unwrap();
        assert_eq!(s4.sphere_eigenvalue(0), 0.0);
        assert_eq!(s4.sphere_eigenvalue(1), 4.0);
        assert_eq!(s4.sphere_eigenvalue(2), 10.0);
    }
}
