//! Series Christoffel/Ricci machinery for metrics in normal form
//! `g = x^{-2}(h_x + dx^2)` over a torus chart.
//!
//! Everything is computed from the Christoffel symbols of the full
//! (n+1)-dimensional metric, with x-derivatives acting on series and spatial
//! derivatives acting spectrally on coefficients. No expanded coefficient
//! formulas are transcribed; this routine is the oracle the order-by-order
//! solver is probed against.

use num_complex::Complex64;

use crate::algebra::Coefficient;
use crate::chart::{GridField, GridMatrix, TorusChart};
use crate::error::Result;
use crate::series::PowerLogSeries;

use std::sync::Arc;

type FieldSeries = PowerLogSeries<GridField>;

/// Symmetric-packed index for an m x m symmetric object, a <= b.
pub fn sym_idx(m: usize, a: usize, b: usize) -> usize {
    let (a, b) = (a.min(b), a.max(b));
    a * m - a * (a + 1) / 2 + b
}

pub fn sym_len(m: usize) -> usize {
    m * (m + 1) / 2
}

/// The full-metric residual `Ric(g) + n g` of `g = x^{-2} Gbar`,
/// `Gbar = dx^2 + h_x`, as symmetric-packed field series with base exponent
/// -2: coefficient index `j` is the coefficient of `x^{j-2}`.
pub struct GridResidual {
    pub m: usize,
    /// Packed entries of Ric(g) + n g, all aligned to base exponent -2.
    pub entries: Vec<FieldSeries>,
    /// `tr_g(Ric(g) + n g)`, base exponent 0.
    pub trace: FieldSeries,
}

impl GridResidual {
    /// Sup norm over grid points and tensor components of coefficient index `j`.
    pub fn coeff_norm(&self, j: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for e in &self.entries {
            worst = worst.max(e.plain_coeff(j)?.norm());
        }
        Ok(worst)
    }

    /// Sup norm of the spatial (ij) block only.
    pub fn spatial_coeff_norm(&self, j: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for a in 1..self.m {
            for b in a..self.m {
                worst = worst.max(self.entries[sym_idx(self.m, a, b)].plain_coeff(j)?.norm());
            }
        }
        Ok(worst)
    }

    pub fn trace_coeff_norm(&self, j: usize) -> Result<f64> {
        Ok(self.trace.plain_coeff(j)?.norm())
    }

    /// Residual as a matrix-coefficient series (base exponent -2).
    pub fn to_matrix_series(&self, chart: &Arc<TorusChart>) -> PowerLogSeries<GridMatrix> {
        let order = self.entries[0].order();
        let mut coeffs = Vec::with_capacity(order + 1);
        for j in 0..=order {
            let mut m = GridMatrix::zeros(chart, self.m);
            for a in 0..self.m {
                for b in a..self.m {
                    let f = self.entries[sym_idx(self.m, a, b)]
                        .plain_coeff(j)
                        .expect("aligned series");
                    m.set_entry(a, b, f.clone());
                    if a != b {
                        m.set_entry(b, a, f.clone());
                    }
                }
            }
            coeffs.push(m);
        }
        PowerLogSeries::from_plain(Complex64::new(-2.0, 0.0), coeffs)
    }
}

/// Build the packed series entries of `Gbar = dx^2 + h_x` truncated at
/// `trunc`, from jet coefficients `h^{(j)}` (index 0 is the boundary metric).
pub fn assemble_gbar(
    chart: &Arc<TorusChart>,
    coeffs: &[GridMatrix],
    trunc: usize,
) -> Vec<FieldSeries> {
    let n = coeffs[0].size();
    let m = n + 1;
    let zero_f = GridField::zeros(chart);
    let alpha0 = Complex64::new(0.0, 0.0);
    let mut entries = Vec::with_capacity(sym_len(m));
    for a in 0..m {
        for b in a..m {
            let series = if a == 0 && b == 0 {
                let mut c = vec![zero_f.clone(); trunc + 1];
                c[0] = GridField::constant(chart, Complex64::new(1.0, 0.0));
                PowerLogSeries::from_plain(alpha0, c)
            } else if a == 0 {
                PowerLogSeries::from_plain(alpha0, vec![zero_f.clone(); trunc + 1])
            } else {
                let (i, j) = (a - 1, b - 1);
                let mut c = vec![zero_f.clone(); trunc + 1];
                for (ord, coeff) in coeffs.iter().enumerate() {
                    if ord <= trunc {
                        c[ord] = coeff.entry(i, j);
                    }
                }
                PowerLogSeries::from_plain(alpha0, c)
            };
            entries.push(series);
        }
    }
    entries
}

fn series_to_matrix(
    chart: &Arc<TorusChart>,
    m: usize,
    packed: &[FieldSeries],
) -> PowerLogSeries<GridMatrix> {
    let order = packed[0].order();
    let mut coeffs = Vec::with_capacity(order + 1);
    for j in 0..=order {
        let mut mat = GridMatrix::zeros(chart, m);
        for a in 0..m {
            for b in a..m {
                let f = packed[sym_idx(m, a, b)].plain_coeff(j).expect("order");
                mat.set_entry(a, b, f.clone());
                if a != b {
                    mat.set_entry(b, a, f.clone());
                }
            }
        }
        coeffs.push(mat);
    }
    PowerLogSeries::from_plain(packed[0].alpha(), coeffs)
}

fn spatial_diff_series(s: &FieldSeries, axis: usize) -> Result<FieldSeries> {
    let plain: Result<Vec<GridField>> =
        s.plain_coeffs().iter().map(|f| f.spectral_diff(axis)).collect();
    Ok(PowerLogSeries::from_plain(s.alpha(), plain?))
}

/// `Ric(g) + n g` for `g = x^{-2} Gbar` with `Gbar` packed entries (alpha 0).
pub fn ricci_plus_ng(
    chart: &Arc<TorusChart>,
    n_spatial: usize,
    gbar: &[FieldSeries],
) -> Result<GridResidual> {
    let m = n_spatial + 1;
    let minus2 = Complex64::new(-2.0, 0.0);
    let plus2 = Complex64::new(2.0, 0.0);

    // G = x^{-2} Gbar, Ginv = x^2 Gbar^{-1}.
    let gbar_mat = series_to_matrix(chart, m, gbar);
    let ginv_mat = gbar_mat.inverse()?.shift_exponent(plus2);
    let g_packed: Vec<FieldSeries> = gbar
        .iter()
        .map(|e| e.clone().shift_exponent(minus2))
        .collect();
    // Packed entries of Ginv (symmetric).
    let mut ginv_packed: Vec<FieldSeries> = Vec::with_capacity(sym_len(m));
    for a in 0..m {
        for b in a..m {
            ginv_packed.push(ginv_mat.map(|mat| mat.entry(a, b)));
        }
    }
    drop(ginv_mat);
    drop(gbar_mat);
    let ginv = |a: usize, b: usize| -> &FieldSeries { &ginv_packed[sym_idx(m, a, b)] };

    // dg[c][sym(a,b)]: c = 0 is the x-derivative, c = 1..=n spatial.
    let mut dg: Vec<Vec<FieldSeries>> = Vec::with_capacity(m);
    dg.push(g_packed.iter().map(|e| e.diff()).collect());
    for axis in 0..n_spatial {
        let v: Result<Vec<FieldSeries>> = g_packed
            .iter()
            .map(|e| spatial_diff_series(e, axis))
            .collect();
        dg.push(v?);
    }

    // Christoffels: Gamma^a_{bc} = 1/2 Ginv^{ad} (d_b G_{dc} + d_c G_{bd} - d_d G_{bc})
    let mut gamma: Vec<FieldSeries> = Vec::with_capacity(m * sym_len(m));
    for a in 0..m {
        for b in 0..m {
            for c in b..m {
                let mut acc: Option<FieldSeries> = None;
                for d in 0..m {
                    let t = dg[b][sym_idx(m, d, c)]
                        .add(&dg[c][sym_idx(m, b, d)])?
                        .sub(&dg[d][sym_idx(m, b, c)])?;
                    let term = ginv(a, d).mul(&t)?;
                    acc = Some(match acc {
                        None => term,
                        Some(s) => s.add(&term)?,
                    });
                }
                gamma.push(acc.unwrap().scale(Complex64::new(0.5, 0.0)));
            }
        }
    }
    drop(dg);
    let ga = |a: usize, b: usize, c: usize| -> &FieldSeries { &gamma[a * sym_len(m) + sym_idx(m, b, c)] };

    // Contracted symbol: gam[b] = Gamma^a_{ab}
    let mut contracted: Vec<FieldSeries> = Vec::with_capacity(m);
    for b in 0..m {
        let mut acc: Option<FieldSeries> = None;
        for a in 0..m {
            let t = ga(a, a, b).clone();
            acc = Some(match acc {
                None => t,
                Some(s) => s.add(&t)?,
            });
        }
        contracted.push(acc.unwrap());
    }

    let diff_dir = |s: &FieldSeries, c: usize| -> Result<FieldSeries> {
        if c == 0 {
            Ok(s.diff())
        } else {
            spatial_diff_series(s, c - 1)
        }
    };

    // R_bc = d_a Gamma^a_{bc} - sym(d_b gam_c)
    //        + gam_d Gamma^d_{bc} - Gamma^a_{bd} Gamma^d_{ac}
    let mut entries: Vec<FieldSeries> = Vec::with_capacity(sym_len(m));
    for b in 0..m {
        for c in b..m {
            let mut acc: Option<FieldSeries> = None;
            let push = |acc: &mut Option<FieldSeries>, t: FieldSeries| -> Result<()> {
                *acc = Some(match acc.take() {
                    None => t,
                    Some(s) => s.add(&t)?,
                });
                Ok(())
            };
            for a in 0..m {
                push(&mut acc, diff_dir(ga(a, b, c), a)?)?;
            }
            // exact symmetrisation of the d_b gam_c term
            let half = Complex64::new(-0.5, 0.0);
            push(&mut acc, diff_dir(&contracted[c], b)?.scale(half))?;
            push(&mut acc, diff_dir(&contracted[b], c)?.scale(half))?;
            for d in 0..m {
                push(&mut acc, contracted[d].mul(ga(d, b, c))?)?;
            }
            for a in 0..m {
                for d in 0..m {
                    push(
                        &mut acc,
                        ga(a, b, d)
                            .mul(ga(d, a, c))?
                            .scale(Complex64::new(-1.0, 0.0)),
                    )?;
                }
            }
            // + n * G_bc
            push(
                &mut acc,
                g_packed[sym_idx(m, b, c)].scale(Complex64::new(n_spatial as f64, 0.0)),
            )?;
            entries.push(acc.unwrap());
        }
    }
    drop(gamma);

    // Align every entry to base exponent -2 (sums of -2 and -3 frames come
    // out in the -3 frame with a vanishing leading coefficient).
    let aligned: Result<Vec<FieldSeries>> = entries
        .iter()
        .map(|e| realign_to(e, minus2, chart))
        .collect();
    let entries = aligned?;

    // tr_g(Ric + n g) = Ginv^{ab} (Ric + n g)_{ab}
    let mut trace: Option<FieldSeries> = None;
    for a in 0..m {
        for b in 0..m {
            let t = ginv(a, b).mul(&entries[sym_idx(m, a, b)])?;
            trace = Some(match trace {
                None => t,
                Some(s) => s.add(&t)?,
            });
        }
    }
    let trace = realign_to(&trace.unwrap(), Complex64::new(0.0, 0.0), chart)?;

    Ok(GridResidual {
        m,
        entries,
        trace,
    })
}

/// Re-express a series in the frame with base exponent `target`, dropping
/// leading coefficients that must vanish structurally (they are checked to be
/// numerically negligible relative to the series scale).
fn realign_to(
    s: &FieldSeries,
    target: Complex64,
    chart: &Arc<TorusChart>,
) -> Result<FieldSeries> {
    let delta = (target - s.alpha()).re.round() as i64;
    if delta == 0 {
        return Ok(s.clone());
    }
    if delta > 0 {
        // drop `delta` leading coefficients (structural zeros)
        let d = delta as usize;
        let scale = s.max_coeff_norm().max(1.0);
        for j in 0..d.min(s.order() + 1) {
            let c = s.plain_coeff(j)?;
            debug_assert!(
                c.norm() <= 1e-7 * scale,
                "structural zero violated at index {j}: {:.3e}",
                c.norm()
            );
        }
        let plain: Vec<GridField> = (d..=s.order())
            .map(|j| s.plain_coeff(j).map(|f| f.clone()))
            .collect::<Result<_>>()?;
        if plain.is_empty() {
            return Ok(PowerLogSeries::from_plain(
                target,
                vec![GridField::zeros(chart)],
            ));
        }
        Ok(PowerLogSeries::from_plain(target, plain))
    } else {
        // pad with exact zeros in front
        let d = (-delta) as usize;
        let mut plain = vec![GridField::zeros(chart); d];
        plain.extend(s.plain_coeffs().iter().cloned());
        Ok(PowerLogSeries::from_plain(target, plain))
    }
}

