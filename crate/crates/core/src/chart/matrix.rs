//! Pointwise m x m complex matrix fields: the tensor coefficient algebra.
//!
//! The matrix size is independent of the chart dimension; the normal-form
//! machinery uses (n+1) x (n+1) matrices over an n-torus chart.

use std::sync::Arc;

use num_complex::Complex64;

use super::{GridField, TorusChart};
use crate::algebra::Coefficient;

#[derive(Clone)]
pub struct GridMatrix {
    chart: Arc<TorusChart>,
    m: usize,
    // entry-major: data[(i*m + j)*len + p]
    data: Vec<Complex64>,
}

impl std::fmt::Debug for GridMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GridMatrix({}x{} on {:?}, sup {:.3e})",
            self.m,
            self.m,
            self.chart.dims(),
            self.norm()
        )
    }
}

impl GridMatrix {
    pub fn zeros(chart: &Arc<TorusChart>, m: usize) -> Self {
        GridMatrix {
            chart: chart.clone(),
            m,
            data: vec![Complex64::new(0.0, 0.0); m * m * chart.len()],
        }
    }

    pub fn identity(chart: &Arc<TorusChart>, m: usize) -> Self {
        let mut out = Self::zeros(chart, m);
        let len = chart.len();
        for i in 0..m {
            let base = (i * m + i) * len;
            for p in 0..len {
                out.data[base + p] = Complex64::new(1.0, 0.0);
            }
        }
        out
    }

    pub fn chart(&self) -> &Arc<TorusChart> {
        &self.chart
    }

    pub fn size(&self) -> usize {
        self.m
    }

    fn block(&self, i: usize, j: usize) -> &[Complex64] {
        let len = self.chart.len();
        let base = (i * self.m + j) * len;
        &self.data[base..base + len]
    }

    fn block_mut(&mut self, i: usize, j: usize) -> &mut [Complex64] {
        let len = self.chart.len();
        let base = (i * self.m + j) * len;
        &mut self.data[base..base + len]
    }

    pub fn entry(&self, i: usize, j: usize) -> GridField {
        let mut f = GridField::zeros(&self.chart);
        f.values_mut().copy_from_slice(self.block(i, j));
        f
    }

    pub fn entry_value(&self, i: usize, j: usize, p: usize) -> Complex64 {
        self.block(i, j)[p]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, f: GridField) {
        self.block_mut(i, j).copy_from_slice(f.values());
    }

    pub fn set_entry_value(&mut self, i: usize, j: usize, p: usize, v: Complex64) {
        self.block_mut(i, j)[p] = v;
    }

    /// Add `c * f` to entry (i, j).
    pub fn add_to_entry(&mut self, i: usize, j: usize, f: &GridField, c: Complex64) {
        for (slot, v) in self.block_mut(i, j).iter_mut().zip(f.values()) {
            *slot += c * v;
        }
    }

    pub fn trace(&self) -> GridField {
        let mut f = GridField::zeros(&self.chart);
        for i in 0..self.m {
            let b = self.block(i, i);
            for (slot, v) in f.values_mut().iter_mut().zip(b) {
                *slot += v;
            }
        }
        f
    }

    /// Multiply every entry pointwise by a scalar field.
    pub fn scale_by_field(&self, f: &GridField) -> GridMatrix {
        let len = self.chart.len();
        let mut out = self.clone();
        for e in 0..self.m * self.m {
            let base = e * len;
            for p in 0..len {
                out.data[base + p] *= f.values()[p];
            }
        }
        out
    }

    /// Pointwise determinant (m <= 5, Gaussian elimination with pivoting).
    pub fn det(&self) -> GridField {
        let len = self.chart.len();
        let m = self.m;
        let mut out = GridField::zeros(&self.chart);
        let mut a = vec![Complex64::new(0.0, 0.0); m * m];
        for p in 0..len {
            for i in 0..m {
                for j in 0..m {
                    a[i * m + j] = self.block(i, j)[p];
                }
            }
            out.values_mut()[p] = det_small(&mut a, m);
        }
        out
    }
}

fn det_small(a: &mut [Complex64], m: usize) -> Complex64 {
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..m {
        let mut piv = k;
        let mut best = a[k * m + k].norm();
        for r in (k + 1)..m {
            let v = a[r * m + k].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != k {
            for c in 0..m {
                a.swap(k * m + c, piv * m + c);
            }
            det = -det;
        }
        let d = a[k * m + k];
        det *= d;
        for r in (k + 1)..m {
            let f = a[r * m + k] / d;
            for c in k..m {
                let v = a[k * m + c];
                a[r * m + c] -= f * v;
            }
        }
    }
    det
}

/// Pointwise inverse via Gauss-Jordan; returns None on a singular point.
fn invert_small(a: &mut [Complex64], inv: &mut [Complex64], m: usize) -> bool {
    for i in 0..m {
        for j in 0..m {
            inv[i * m + j] = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
    }
    for k in 0..m {
        let mut piv = k;
        let mut best = a[k * m + k].norm();
        for r in (k + 1)..m {
            let v = a[r * m + k].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best < 1e-300 {
            return false;
        }
        if piv != k {
            for c in 0..m {
                a.swap(k * m + c, piv * m + c);
                inv.swap(k * m + c, piv * m + c);
            }
        }
        let d = a[k * m + k];
        for c in 0..m {
            a[k * m + c] /= d;
            inv[k * m + c] /= d;
        }
        for r in 0..m {
            if r == k {
                continue;
            }
            let f = a[r * m + k];
            if f.norm() == 0.0 {
                continue;
            }
            for c in 0..m {
                let av = a[k * m + c];
                let iv = inv[k * m + c];
                a[r * m + c] -= f * av;
                inv[r * m + c] -= f * iv;
            }
        }
    }
    true
}

impl Coefficient for GridMatrix {
    fn algebra_tag(&self) -> String {
        format!("matrix{}x{}/grid{:?}", self.m, self.m, self.chart.dims())
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.data.len(), other.data.len());
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }
    fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        let len = self.chart.len();
        let m = self.m;
        let mut out = GridMatrix::zeros(&self.chart, m);
        for i in 0..m {
            for j in 0..m {
                let ob = out.block_mut(i, j);
                for k in 0..m {
                    let ab = self.block(i, k);
                    let bb = other.block(k, j);
                    for p in 0..len {
                        ob[p] += ab[p] * bb[p];
                    }
                }
            }
        }
        out
    }
    fn zero_like(&self) -> Self {
        GridMatrix::zeros(&self.chart, self.m)
    }
    fn one_like(&self) -> Self {
        GridMatrix::identity(&self.chart, self.m)
    }
    fn try_inverse(&self) -> Option<Self> {
        let len = self.chart.len();
        let m = self.m;
        let mut out = GridMatrix::zeros(&self.chart, m);
        let mut a = vec![Complex64::new(0.0, 0.0); m * m];
        let mut inv = vec![Complex64::new(0.0, 0.0); m * m];
        for p in 0..len {
            for i in 0..m {
                for j in 0..m {
                    a[i * m + j] = self.block(i, j)[p];
                }
            }
            if !invert_small(&mut a, &mut inv, m) {
                return None;
            }
            for i in 0..m {
                for j in 0..m {
                    out.block_mut(i, j)[p] = inv[i * m + j];
                }
            }
        }
        Some(out)
    }
    fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_inverse_pointwise() {
        let chart = TorusChart::square(1, 8).unwrap();
        let mut m = GridMatrix::identity(&chart, 3);
        m.set_entry(0, 1, GridField::from_fn(&chart, |y| 0.3 * y[0].sin()));
        m.set_entry(1, 2, GridField::from_fn(&chart, |y| 0.2 * y[0].cos()));
        let inv = m.try_inverse().unwrap();
        let prod = m.mul(&inv);
        let id = GridMatrix::identity(&chart, 3);
        assert!(prod.sub(&id).norm() < 1e-13);
    }

    #[test]
    fn det_of_diagonal() {
        let chart = TorusChart::square(1, 8).unwrap();
        let mut m = GridMatrix::identity(&chart, 2);
        m.set_entry(1, 1, GridField::constant(&chart, Complex64::new(4.0, 0.0)));
        let d = m.det();
        assert!((d.values()[0] - Complex64::new(4.0, 0.0)).norm() < 1e-14);
    }
}
