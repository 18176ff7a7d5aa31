//! Curvature suite and metric-aware calculus on torus charts.
//!
//! Conventions are anchored by two choices and everything else follows:
//! the unit round model has scalar curvature n(n-1), and the Laplacian is
//! positive (on the flat 2-pi torus, Delta e^{i<xi,y>} = |xi|^2 e^{i<xi,y>}).

use num_complex::Complex64;

use super::{GridField, GridMatrix, GridMetric};
use crate::algebra::Coefficient;
use crate::error::Result;

/// Curvature quantities of a metric, computed spectrally from Christoffel
/// symbols. `schouten`, `t_endo` and `p_norm2` are present for n >= 3.
pub struct CurvaturePack {
    pub dim: usize,
    /// R^l_{kij}, flattened as ((l*n + k)*n + i)*n + j.
    pub riemann: Vec<GridField>,
    /// Ricci tensor R_ij (symmetric by construction).
    pub ricci: GridMatrix,
    /// Scalar curvature R = h^{ij} R_ij.
    pub scalar: GridField,
    /// J = R / (2(n-1)).
    pub j_scalar: GridField,
    /// Schouten tensor P_ij = (R_ij - J h_ij)/(n-2).
    pub schouten: Option<GridMatrix>,
    /// T = (n-2) J h - 4 P as an endomorphism on 1-forms: T_i^j.
    pub t_endo: Option<GridMatrix>,
    /// |P|^2 = P_ij P^ij.
    pub p_norm2: Option<GridField>,
    /// |Ric|^2 = R_ij R^ij.
    pub ricci_norm2: GridField,
    pub hinv: GridMatrix,
    pub sqrt_det: GridField,
}

fn idx4(n: usize, l: usize, k: usize, i: usize, j: usize) -> usize {
    ((l * n + k) * n + i) * n + j
}

pub fn curvature_pack(h: &GridMetric) -> Result<CurvaturePack> {
    let n = h.dim();
    let chart = h.chart().clone();
    h.check_positive_definite()?;
    let hinv = h.inverse();
    let det = h.det();
    let sqrt_det = det.map(|z| z.sqrt());

    // dh[k] = partial_k h
    let mut dh: Vec<GridMatrix> = Vec::with_capacity(n);
    for k in 0..n {
        let mut m = GridMatrix::zeros(&chart, n);
        for i in 0..n {
            for j in i..n {
                let d = h.entry(i, j).spectral_diff(k)?;
                m.set_entry(i, j, d.clone());
                if i != j {
                    m.set_entry(j, i, d);
                }
            }
        }
        dh.push(m);
    }

    // Christoffel symbols Gamma^k_{ij} = 1/2 h^{kl} (d_i h_jl + d_j h_il - d_l h_ij)
    let mut gamma: Vec<GridField> = vec![GridField::zeros(&chart); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = GridField::zeros(&chart);
                for l in 0..n {
                    let br = dh[i]
                        .entry(j, l)
                        .add(&dh[j].entry(i, l))
                        .sub(&dh[l].entry(i, j));
                    acc = acc.add(&hinv.entry(k, l).mul(&br));
                }
                let g = acc.scale(Complex64::new(0.5, 0.0));
                gamma[(k * n + i) * n + j] = g.clone();
                gamma[(k * n + j) * n + i] = g;
            }
        }
    }
    let ga = |k: usize, i: usize, j: usize| -> &GridField { &gamma[(k * n + i) * n + j] };

    // dgamma[a][k,i,j] = partial_a Gamma^k_{ij}
    let mut dgamma: Vec<Vec<GridField>> = Vec::with_capacity(n);
    for a in 0..n {
        let mut v = vec![GridField::zeros(&chart); n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let d = ga(k, i, j).spectral_diff(a)?;
                    v[(k * n + i) * n + j] = d.clone();
                    v[(k * n + j) * n + i] = d;
                }
            }
        }
        dgamma.push(v);
    }
    let dga =
        |a: usize, k: usize, i: usize, j: usize| -> &GridField { &dgamma[a][(k * n + i) * n + j] };

    // Riemann R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
    //                    + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
    let mut riemann: Vec<GridField> = vec![GridField::zeros(&chart); n * n * n * n];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let mut acc = dga(i, l, j, k).sub(dga(j, l, i, k));
                    for m in 0..n {
                        acc = acc.add(&ga(l, i, m).mul(ga(m, j, k)));
                        acc = acc.sub(&ga(l, j, m).mul(ga(m, i, k)));
                    }
                    riemann[idx4(n, l, k, i, j)] = acc;
                }
            }
        }
    }

    // Ricci by contraction, then exact symmetrisation.
    let mut ricci = GridMatrix::zeros(&chart, n);
    for k in 0..n {
        for j in k..n {
            let mut acc = GridField::zeros(&chart);
            for i in 0..n {
                acc = acc.add(&riemann[idx4(n, i, k, i, j)]);
            }
            let sym = if j > k {
                let mut acc2 = GridField::zeros(&chart);
                for i in 0..n {
                    acc2 = acc2.add(&riemann[idx4(n, i, j, i, k)]);
                }
                acc.add(&acc2).scale(Complex64::new(0.5, 0.0))
            } else {
                acc
            };
            ricci.set_entry(k, j, sym.clone());
            if j > k {
                ricci.set_entry(j, k, sym);
            }
        }
    }

    // Scalar curvature and derived quantities.
    let scalar = contract2(&hinv, &ricci);
    let j_scalar = scalar.scale(Complex64::new(1.0 / (2.0 * (n as f64 - 1.0)), 0.0));
    // |Ric|^2 = R_ij R^ij
    let ric_up = hinv.mul(&ricci).mul(&hinv); // R^{ij}
    let ricci_norm2 = frob_pair(&ricci, &ric_up);

    let (schouten, t_endo, p_norm2) = if n >= 3 {
        let mut p = GridMatrix::zeros(&chart, n);
        let inv_nm2 = Complex64::new(1.0 / (n as f64 - 2.0), 0.0);
        for i in 0..n {
            for j in i..n {
                let v = ricci
                    .entry(i, j)
                    .sub(&j_scalar.mul(&h.entry(i, j)))
                    .scale(inv_nm2);
                p.set_entry(i, j, v.clone());
                if i != j {
                    p.set_entry(j, i, v);
                }
            }
        }
        // P_i^j = P_ik h^{kj}
        let p_mixed = p.mul(&hinv);
        let p_up = hinv.mul(&p).mul(&hinv);
        let p_norm2 = frob_pair(&p, &p_up);
        // T_i^j = (n-2) J delta_i^j - 4 P_i^j
        let mut t = p_mixed.scale(Complex64::new(-4.0, 0.0));
        for i in 0..n {
            t.add_to_entry(i, i, &j_scalar, Complex64::new(n as f64 - 2.0, 0.0));
        }
        (Some(p), Some(t), Some(p_norm2))
    } else {
        (None, None, None)
    };

    Ok(CurvaturePack {
        dim: n,
        riemann,
        ricci,
        scalar,
        j_scalar,
        schouten,
        t_endo,
        p_norm2,
        ricci_norm2,
        hinv,
        sqrt_det,
    })
}

/// h^{ij} A_ij for a symmetric tensor A.
fn contract2(hinv: &GridMatrix, a: &GridMatrix) -> GridField {
    hinv.mul(a).trace()
}

/// A_ij B^{ij} where `b_up` already carries upper indices.
fn frob_pair(a: &GridMatrix, b_up: &GridMatrix) -> GridField {
    let n = a.size();
    let mut acc = GridField::zeros(a.chart());
    for i in 0..n {
        for j in 0..n {
            acc = acc.add(&a.entry(i, j).mul(&b_up.entry(i, j)));
        }
    }
    acc
}

/// Positive Laplace-Beltrami operator:
/// `Delta_h f = -(det h)^{-1/2} d_i ( (det h)^{1/2} h^{ij} d_j f )`.
pub fn laplace_beltrami(h: &GridMetric, f: &GridField) -> Result<GridField> {
    let n = h.dim();
    let hinv = h.inverse();
    let sqrt_det = h.det().map(|z| z.sqrt());
    let inv_sqrt_det = sqrt_det.map(|z| 1.0 / z);
    let mut acc = GridField::zeros(f.chart());
    for i in 0..n {
        let mut flux = GridField::zeros(f.chart());
        for j in 0..n {
            flux = flux.add(&hinv.entry(i, j).mul(&f.spectral_diff(j)?));
        }
        acc = acc.add(&sqrt_det.mul(&flux).spectral_diff(i)?);
    }
    Ok(acc.mul(&inv_sqrt_det).scale(Complex64::new(-1.0, 0.0)))
}

/// Divergence (adjoint of d) on 1-forms, compatible with the positive
/// Laplacian: `delta(df) = Delta f`.
pub fn divergence_one_form(h: &GridMetric, omega: &[GridField]) -> Result<GridField> {
    let n = h.dim();
    assert_eq!(omega.len(), n);
    let hinv = h.inverse();
    let sqrt_det = h.det().map(|z| z.sqrt());
    let inv_sqrt_det = sqrt_det.map(|z| 1.0 / z);
    let mut acc = GridField::zeros(omega[0].chart());
    for i in 0..n {
        let mut flux = GridField::zeros(omega[0].chart());
        for j in 0..n {
            flux = flux.add(&hinv.entry(i, j).mul(&omega[j]));
        }
        acc = acc.add(&sqrt_det.mul(&flux).spectral_diff(i)?);
    }
    Ok(acc.mul(&inv_sqrt_det).scale(Complex64::new(-1.0, 0.0)))
}

/// `int_M f dv_h` by the trapezoidal rule on the periodic grid (spectrally
/// accurate for smooth integrands). Deterministic pairwise summation.
pub fn integrate(h: &GridMetric, f: &GridField) -> Complex64 {
    let sqrt_det = h.det().map(|z| z.sqrt());
    let weighted = f.mul(&sqrt_det);
    weighted.pairwise_sum() * Complex64::new(f.chart().cell_volume(), 0.0)
}

/// L2 inner product `<f, g>_h = int f conj(g) dv_h`.
pub fn inner_product(h: &GridMetric, f: &GridField, g: &GridField) -> Complex64 {
    let gc = g.map(|z| z.conj());
    integrate(h, &f.mul(&gc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::TorusChart;
    use std::f64::consts::PI;

    fn conformal_metric(res: usize, amp: f64) -> (GridMetric, GridField) {
        let chart = TorusChart::square(2, res).unwrap();
        let ups = GridField::from_fn(&chart, |y| amp * y[0].sin());
        let flat = GridMetric::flat(&chart);
        (flat.conformal_rescale(&ups), ups)
    }

    #[test]
    fn flat_curvature_vanishes() {
        let chart = TorusChart::square(2, 8).unwrap();
        let h = GridMetric::flat(&chart);
        let pack = curvature_pack(&h).unwrap();
        assert!(pack.scalar.norm() < 1e-12);
        assert!(pack.ricci.norm() < 1e-12);
        assert!(pack.riemann.iter().all(|r| r.norm() < 1e-12));
    }

    #[test]
    fn laplace_flat_fourier_eigenvalue() {
        // Positive-sign anchor: Delta e^{i y1} = e^{i y1} on the flat torus.
        let chart = TorusChart::square(2, 8).unwrap();
        let h = GridMetric::flat(&chart);
        let f = GridField::from_fn_complex(&chart, |y| Complex64::new(0.0, y[0]).exp());
        let lf = laplace_beltrami(&h, &f).unwrap();
        assert!(lf.sub(&f).norm() < 1e-12);
    }

    #[test]
    fn laplace_constant_zero() {
        let (h, _) = conformal_metric(16, 0.1);
        let f = GridField::constant(h.chart(), Complex64::new(2.0, 0.0));
        assert!(laplace_beltrami(&h, &f).unwrap().norm() < 1e-12);
    }

    #[test]
    fn integrate_flat_torus_area() {
        let chart = TorusChart::square(2, 8).unwrap();
        let h = GridMetric::flat(&chart);
        let one = GridField::constant(&chart, Complex64::new(1.0, 0.0));
        let v = integrate(&h, &one);
        assert!((v.re - 4.0 * PI * PI).abs() < 1e-10);
        let s = GridField::from_fn(&chart, |y| y[0].sin());
        assert!(integrate(&h, &s).norm() < 1e-14);
    }

    #[test]
    fn conformal_scalar_curvature_identity_dim2() {
        // Rhat = e^{-2u}(R + 2 Delta u) with the positive Laplacian; flat base.
        let (hhat, ups) = conformal_metric(64, 0.1);
        let chart = hhat.chart().clone();
        let flat = GridMetric::flat(&chart);
        let lap_u = laplace_beltrami(&flat, &ups).unwrap();
        let want = ups.map(|z| (-2.0 * z).exp()).mul(&lap_u.scale(Complex64::new(2.0, 0.0)));
        let pack = curvature_pack(&hhat).unwrap();
        let err = pack.scalar.sub(&want).norm();
        assert!(err < 1e-8, "identity error {err:.3e}");
    }

    #[test]
    fn gauss_bonnet_torus() {
        let (h, _) = conformal_metric(64, 0.1);
        let pack = curvature_pack(&h).unwrap();
        let total = integrate(&h, &pack.scalar);
        assert!(total.norm() < 1e-8, "Gauss-Bonnet defect {:.3e}", total.norm());
    }

    #[test]
    fn laplace_self_adjoint() {
        let (h, _) = conformal_metric(32, 0.1);
        let chart = h.chart().clone();
        let f = GridField::from_fn(&chart, |y| (y[0] + 2.0 * y[1]).cos() + 0.5 * y[1].sin());
        let g = GridField::from_fn(&chart, |y| y[1].cos() - 0.3 * (2.0 * y[0]).sin());
        let lf = laplace_beltrami(&h, &f).unwrap();
        let lg = laplace_beltrami(&h, &g).unwrap();
        let a = inner_product(&h, &lf, &g);
        let b = inner_product(&h, &f, &lg);
        let fn_ = inner_product(&h, &f, &f).norm().sqrt();
        let gn = inner_product(&h, &g, &g).norm().sqrt();
        assert!((a - b).norm() <= 1e-9 * fn_ * gn);
    }

    #[test]
    fn schouten_trace_is_j() {
        let chart = TorusChart::square(3, 8).unwrap();
        let ups = GridField::from_fn(&chart, |y| 0.05 * (y[0] + y[2]).sin());
        let h = GridMetric::flat(&chart).conformal_rescale(&ups);
        let pack = curvature_pack(&h).unwrap();
        let tr_p = pack.hinv.mul(pack.schouten.as_ref().unwrap()).trace();
        let err = tr_p.sub(&pack.j_scalar).norm();
        let scale = pack.j_scalar.norm().max(1e-30);
        assert!(err / scale < 1e-9, "trace defect {err:.3e}");
    }
}
