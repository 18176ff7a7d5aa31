//! Periodic n-torus charts with spectral differentiation and tensor algebra.

mod curvature;
mod fft;
mod matrix;

pub use curvature::CurvaturePack;
pub use matrix::GridMatrix;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::algebra::Coefficient;
use crate::error::{Error, Result};
use fft::AxisFft;

/// A flat periodic chart on the n-torus, n in 1..=4. Resolutions are powers
/// of two (>= 8 per axis) so spectral differentiation of band-limited fields
/// is exact to rounding.
pub struct TorusChart {
    dims: Vec<usize>,
    periods: Vec<f64>,
    strides: Vec<usize>,
    len: usize,
    ffts: Vec<AxisFft>,
}

impl std::fmt::Debug for TorusChart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorusChart")
            .field("dims", &self.dims)
            .field("periods", &self.periods)
            .finish()
    }
}

impl TorusChart {
    pub fn new(dims: &[usize], periods: Option<&[f64]>) -> Result<Arc<Self>> {
        let n = dims.len();
        if n == 0 || n > 4 {
            return Err(Error::InvalidParameter(format!(
                "chart dimension {n} outside 1..=4"
            )));
        }
        for &d in dims {
            if d < 8 || !d.is_power_of_two() {
                return Err(Error::InvalidParameter(format!(
                    "resolution {d} must be a power of two >= 8"
                )));
            }
        }
        let periods: Vec<f64> = match periods {
            Some(p) => {
                if p.len() != n {
                    return Err(Error::InvalidParameter("period count mismatch".into()));
                }
                p.to_vec()
            }
            None => vec![2.0 * PI; n],
        };
        // Row-major: the last axis is contiguous.
        let mut strides = vec![0usize; n];
        let mut s = 1usize;
        for a in (0..n).rev() {
            strides[a] = s;
            s *= dims[a];
        }
        let mut planner = FftPlanner::new();
        let ffts = dims.iter().map(|&d| AxisFft::new(&mut planner, d)).collect();
        Ok(Arc::new(TorusChart {
            dims: dims.to_vec(),
            periods,
            strides,
            len: s,
            ffts,
        }))
    }

    pub fn square(n: usize, res: usize) -> Result<Arc<Self>> {
        Self::new(&vec![res; n], None)
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid-cell volume of the flat reference chart.
    pub fn cell_volume(&self) -> f64 {
        self.dims
            .iter()
            .zip(&self.periods)
            .map(|(&d, &p)| p / d as f64)
            .product()
    }

    /// Coordinates of the flat index `p`.
    pub fn coords(&self, p: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for a in 0..self.dim() {
            let idx = (p / self.strides[a]) % self.dims[a];
            out.push(self.periods[a] * idx as f64 / self.dims[a] as f64);
        }
        out
    }

    pub fn multi_index(&self, p: usize) -> Vec<usize> {
        (0..self.dim())
            .map(|a| (p / self.strides[a]) % self.dims[a])
            .collect()
    }

    fn tag(&self) -> String {
        format!("grid{:?}", self.dims)
    }
}

/// A complex scalar field sampled at every grid point of a [`TorusChart`].
#[derive(Clone)]
pub struct GridField {
    chart: Arc<TorusChart>,
    data: Vec<Complex64>,
}

impl std::fmt::Debug for GridField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GridField({:?}, sup {:.3e})", self.chart.dims, self.norm())
    }
}

impl GridField {
    pub fn zeros(chart: &Arc<TorusChart>) -> Self {
        GridField {
            chart: chart.clone(),
            data: vec![Complex64::new(0.0, 0.0); chart.len()],
        }
    }

    pub fn constant(chart: &Arc<TorusChart>, c: Complex64) -> Self {
        GridField {
            chart: chart.clone(),
            data: vec![c; chart.len()],
        }
    }

    pub fn from_fn(chart: &Arc<TorusChart>, f: impl Fn(&[f64]) -> f64) -> Self {
        let data = (0..chart.len())
            .map(|p| Complex64::new(f(&chart.coords(p)), 0.0))
            .collect();
        GridField {
            chart: chart.clone(),
            data,
        }
    }

    pub fn from_fn_complex(chart: &Arc<TorusChart>, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let data = (0..chart.len()).map(|p| f(&chart.coords(p))).collect();
        GridField {
            chart: chart.clone(),
            data,
        }
    }

    pub fn chart(&self) -> &Arc<TorusChart> {
        &self.chart
    }

    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn sup_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn assert_finite(&self) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch("non-finite field values".into()))
        }
    }

    /// Spectral derivative along `axis`: exact for band-limited fields.
    pub fn spectral_diff(&self, axis: usize) -> Result<GridField> {
        let n = self.chart.dim();
        if axis >= n {
            return Err(Error::AxisOutOfRange { axis, dim: n });
        }
        let mut out = self.clone();
        let d = self.chart.dims[axis];
        let period = self.chart.periods[axis];
        let base_k = 2.0 * PI / period;
        fft::transform_lanes(
            &mut out.data,
            self.chart.strides[axis],
            &self.chart.ffts[axis],
            |m, v| {
                let k = base_k * fft::signed_freq(m, d) as f64;
                v * Complex64::new(0.0, k)
            },
        );
        Ok(out)
    }

    /// Pointwise map.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridField {
        GridField {
            chart: self.chart.clone(),
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Deterministic pairwise sum of values (order independent of workers).
    pub fn pairwise_sum(&self) -> Complex64 {
        fn rec(v: &[Complex64]) -> Complex64 {
            match v.len() {
                0 => Complex64::new(0.0, 0.0),
                1 => v[0],
                n => {
                    let (a, b) = v.split_at(n / 2);
                    rec(a) + rec(b)
                }
            }
        }
        rec(&self.data)
    }
}

impl Coefficient for GridField {
    fn algebra_tag(&self) -> String {
        format!("field/{}", self.chart.tag())
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.data.len(), other.data.len());
        GridField {
            chart: self.chart.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
    fn scale(&self, c: Complex64) -> Self {
        GridField {
            chart: self.chart.clone(),
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.data.len(), other.data.len());
        GridField {
            chart: self.chart.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
    fn zero_like(&self) -> Self {
        GridField::zeros(&self.chart)
    }
    fn one_like(&self) -> Self {
        GridField::constant(&self.chart, Complex64::new(1.0, 0.0))
    }
    fn try_inverse(&self) -> Option<Self> {
        if self.data.iter().any(|z| z.norm() < 1e-300) {
            return None;
        }
        Some(GridField {
            chart: self.chart.clone(),
            data: self.data.iter().map(|z| 1.0 / z).collect(),
        })
    }
    fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Symmetric positive-definite 2-tensor field; symmetry is exact by storage.
#[derive(Clone, Debug)]
pub struct GridMetric {
    mat: GridMatrix,
}

impl GridMetric {
    /// Flat metric delta_ij.
    pub fn flat(chart: &Arc<TorusChart>) -> Self {
        GridMetric {
            mat: GridMatrix::identity(chart, chart.dim()),
        }
    }

    /// Build from the upper-triangular component functions h_ij, i <= j.
    /// Symmetry holds exactly because (i,j) and (j,i) share the same values.
    pub fn from_components(
        chart: &Arc<TorusChart>,
        comp: impl Fn(usize, usize, &[f64]) -> f64,
    ) -> Result<Self> {
        let n = chart.dim();
        let mut mat = GridMatrix::zeros(chart, n);
        for i in 0..n {
            for j in i..n {
                let f = GridField::from_fn(chart, |y| comp(i, j, y));
                mat.set_entry(i, j, f.clone());
                if i != j {
                    mat.set_entry(j, i, f);
                }
            }
        }
        let m = GridMetric { mat };
        m.check_positive_definite()?;
        Ok(m)
    }

    pub fn from_matrix(mat: GridMatrix) -> Result<Self> {
        let m = GridMetric { mat };
        m.check_positive_definite()?;
        Ok(m)
    }

    pub fn chart(&self) -> &Arc<TorusChart> {
        self.mat.chart()
    }

    pub fn dim(&self) -> usize {
        self.mat.size()
    }

    pub fn matrix(&self) -> &GridMatrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> GridField {
        self.mat.entry(i, j)
    }

    pub fn inverse(&self) -> GridMatrix {
        self.mat
            .try_inverse()
            .expect("positive-definite metric is invertible")
    }

    pub fn det(&self) -> GridField {
        self.mat.det()
    }

    /// Pointwise Cholesky; failure pinpoints the first non-PD grid point.
    pub fn check_positive_definite(&self) -> Result<()> {
        let n = self.dim();
        let chart = self.chart().clone();
        for p in 0..chart.len() {
            let mut a = [[0.0f64; 4]; 4];
            for i in 0..n {
                for j in 0..n {
                    a[i][j] = self.mat.entry_value(i, j, p).re;
                }
            }
            let mut min_pivot = f64::INFINITY;
            let mut ok = true;
            for k in 0..n {
                let mut d = a[k][k];
                for t in 0..k {
                    d -= a[k][t] * a[k][t];
                }
                if d <= 0.0 {
                    min_pivot = d;
                    ok = false;
                    break;
                }
                min_pivot = min_pivot.min(d);
                let ds = d.sqrt();
                a[k][k] = ds;
                for i in (k + 1)..n {
                    let mut v = a[i][k];
                    for t in 0..k {
                        v -= a[i][t] * a[k][t];
                    }
                    a[i][k] = v / ds;
                }
            }
            if !ok {
                return Err(Error::NotPositiveDefinite {
                    point: chart.multi_index(p),
                    min_eig: min_pivot,
                });
            }
        }
        Ok(())
    }

    /// Conformal rescale `e^{2 Upsilon} h`, pointwise.
    pub fn conformal_rescale(&self, upsilon: &GridField) -> GridMetric {
        let factor = upsilon.map(|z| (2.0 * z).exp());
        GridMetric {
            mat: self.mat.scale_by_field(&factor),
        }
    }
}

pub use curvature::{
    curvature_pack, divergence_one_form, inner_product, integrate, laplace_beltrami,
};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_rejects_bad_resolution() {
        assert!(TorusChart::new(&[7], None).is_err());
        assert!(TorusChart::new(&[8, 8, 8, 8, 8], None).is_err());
        assert!(TorusChart::new(&[64], None).is_ok());
    }

    #[test]
    fn spectral_diff_sin_is_cos() {
        let chart = TorusChart::square(1, 64).unwrap();
        let f = GridField::from_fn(&chart, |y| y[0].sin());
        let d = f.spectral_diff(0).unwrap();
        let want = GridField::from_fn(&chart, |y| y[0].cos());
        let err = d.sub(&want).norm();
        assert!(err < 1e-12, "err {err:.3e}");
        assert!(d.sup_imag() < 1e-12);
    }

    #[test]
    fn spectral_diff_constant_is_zero() {
        let chart = TorusChart::square(2, 8).unwrap();
        let f = GridField::constant(&chart, Complex64::new(3.5, 0.0));
        let d = f.spectral_diff(1).unwrap();
        assert!(d.norm() < 1e-13);
    }

    #[test]
    fn spectral_diff_exp_sin() {
        // d/dy exp(sin y) = cos(y) exp(sin y); smooth but not band-limited,
        // spectrally converged well below 1e-10 at 64 points.
        let chart = TorusChart::square(1, 64).unwrap();
        let f = GridField::from_fn(&chart, |y| y[0].sin().exp());
        let d = f.spectral_diff(0).unwrap();
        let want = GridField::from_fn(&chart, |y| y[0].cos() * y[0].sin().exp());
        assert!(d.sub(&want).norm() < 1e-10);
    }

    #[test]
    fn axis_out_of_range() {
        let chart = TorusChart::square(2, 8).unwrap();
        let f = GridField::zeros(&chart);
        assert!(matches!(
            f.spectral_diff(2),
            Err(Error::AxisOutOfRange { axis: 2, dim: 2 })
        ));
    }

    #[test]
    fn metric_positive_definite_check() {
        let chart = TorusChart::square(2, 8).unwrap();
        let ok = GridMetric::from_components(&chart, |i, j, _| if i == j { 1.0 } else { 0.3 });
        assert!(ok.is_ok());
        let bad = GridMetric::from_components(&chart, |i, j, _| if i == j { 1.0 } else { 1.5 });
        assert!(matches!(bad, Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn rescale_with_zero_upsilon_is_bitwise() {
        let chart = TorusChart::square(2, 8).unwrap();
        let h = GridMetric::from_components(&chart, |i, j, y| {
            if i == j {
                1.0 + 0.1 * y[0].sin()
            } else {
                0.05 * y[1].cos()
            }
        })
        .unwrap();
        let zero = GridField::zeros(&chart);
        let h2 = h.conformal_rescale(&zero);
        for i in 0..2 {
            for j in 0..2 {
                let a = h.entry(i, j);
                let b = h2.entry(i, j);
                assert!(a
                    .values()
                    .iter()
                    .zip(b.values())
                    .all(|(x, y)| x.re.to_bits() == y.re.to_bits()
                        && x.im.to_bits() == y.im.to_bits()));
            }
        }
    }
}
