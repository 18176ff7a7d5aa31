//! Order-by-order solution of the Poincare normal form
//! `g = x^{-2}(h_x + dx^2)` with `Ric(g) + n g` vanishing to the attainable
//! order, plus volume-expansion coefficients and the log coefficient `L`.
//!
//! The per-order unknown `h^{(j)}` is never given by a transcribed formula:
//! the solver probes the residual's pointwise affine dependence on `h^{(j)}`
//! with constant symmetric basis tensors and solves the resulting per-point
//! linear systems; [`ricci`] provides the residual itself, which doubles as
//! the module's oracle.

pub mod ricci;

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::Coefficient;
use crate::chart::{integrate, GridField, GridMatrix, GridMetric, TorusChart};
use crate::einstein::EinsteinModel;
use crate::error::{Error, Result};
use crate::series::{sqrt_unit_leading, PowerLogSeries};

use ricci::{assemble_gbar, ricci_plus_ng, sym_idx, GridResidual};

pub const MAX_ODD_ORDER: usize = 8;
pub const RESIDUAL_TOL: f64 = 1e-8;

/// The jet of `h_x` over a torus chart: `coeffs[j]` is `h^{(j)}` (odd entries
/// are identically zero, `coeffs[0] = h`).
#[derive(Clone)]
pub struct GridJet {
    pub h: GridMetric,
    pub coeffs: Vec<GridMatrix>,
    /// Jet order actually solved/available.
    pub order: usize,
    /// True when the jet is exact to all orders (flat boundary metric).
    pub exact: bool,
    /// Per-order residual sup norms from the final verification pass
    /// (index j is the coefficient of x^{j-2} in Ric(g)+ng).
    pub residual_norms: Vec<f64>,
    /// Order-n trace residual for n even (if the trace order was solved).
    pub trace_residual: Option<f64>,
    /// Recorded choice for the undetermined trace-free part at order n.
    pub trace_free_choice: &'static str,
}

impl GridJet {
    pub fn chart(&self) -> &Arc<TorusChart> {
        self.h.chart()
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// Jet order usable by series consumers (unbounded for exact jets).
    pub fn available_order(&self) -> usize {
        if self.exact {
            usize::MAX
        } else {
            self.order
        }
    }

    /// `h_x` as a matrix-coefficient series truncated at `trunc`, padding an
    /// exact jet with its (exactly zero) higher coefficients.
    pub fn h_series(&self, trunc: usize) -> Result<PowerLogSeries<GridMatrix>> {
        if !self.exact && trunc > self.order {
            return Err(Error::JetOrderInsufficient {
                have: self.order,
                need: trunc,
            });
        }
        let zero = GridMatrix::zeros(self.chart(), self.dim());
        let mut c = vec![zero; trunc + 1];
        for (j, m) in self.coeffs.iter().enumerate() {
            if j <= trunc {
                c[j] = m.clone();
            }
        }
        Ok(PowerLogSeries::from_plain(Complex64::new(0.0, 0.0), c))
    }
}

/// A warped jet `h_x = phi(x) h` over an Einstein model boundary
/// (`phi = a(x)^2`, polynomial in x, `phi(0) = 1`).
#[derive(Clone)]
pub struct WarpJet {
    pub n: usize,
    pub phi: PowerLogSeries<Complex64>,
    pub exact: bool,
}

impl WarpJet {
    pub fn new(n: usize, phi: PowerLogSeries<Complex64>, exact: bool) -> Result<Self> {
        let lead = phi.plain_coeff(0)?;
        if (lead - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "warp must have a(0)^2 = 1, got {lead}"
            )));
        }
        Ok(WarpJet { n, phi, exact })
    }

    pub fn available_order(&self) -> usize {
        if self.exact {
            usize::MAX
        } else {
            self.phi.order()
        }
    }

    pub fn phi_at(&self, trunc: usize) -> Result<PowerLogSeries<Complex64>> {
        if !self.exact && trunc > self.phi.order() {
            return Err(Error::JetOrderInsufficient {
                have: self.phi.order(),
                need: trunc,
            });
        }
        let mut c = vec![Complex64::new(0.0, 0.0); trunc + 1];
        for j in 0..=trunc.min(self.phi.order()) {
            c[j] = *self.phi.plain_coeff(j)?;
        }
        Ok(PowerLogSeries::from_plain(Complex64::new(0.0, 0.0), c))
    }
}

/// `Ric(g) + n g` for a grid jet, through coefficient index `order`
/// (coefficient `j` multiplies `x^{j-2}`).
pub fn einstein_residual(jet: &GridJet, order: usize) -> Result<GridResidual> {
    if !jet.exact && order > jet.order {
        return Err(Error::JetOrderInsufficient {
            have: jet.order,
            need: order,
        });
    }
    let gbar = assemble_gbar(jet.chart(), &jet.coeffs, order);
    ricci_plus_ng(jet.chart(), jet.dim(), &gbar)
}

/// Scalar residual data of a warped jet `h_x = phi h` with Einstein boundary
/// `Ric(h) = (n-1) lambda h`. Series carry base exponent 0; coefficient `j`
/// is the coefficient of `x^{j-2}` in the corresponding residual component
/// (same indexing as [`GridResidual`]).
pub struct WarpResidual {
    /// `x^2 (Ric(g)+ng)_{00}`.
    pub res00: PowerLogSeries<Complex64>,
    /// Scalar multiplying `h_ij` in `x^2 (Ric(g)+ng)_{ij}`.
    pub res_tan: PowerLogSeries<Complex64>,
    /// `tr_g(Ric(g)+ng)`.
    pub trace: PowerLogSeries<Complex64>,
}

impl WarpResidual {
    pub fn coeff_norm(&self, j: usize) -> Result<f64> {
        Ok(self
            .res00
            .plain_coeff(j)?
            .norm()
            .max(self.res_tan.plain_coeff(j)?.norm()))
    }
}

/// Residual of a warped jet, computed with scalar series arithmetic.
///
/// The component reduction (for `h_x = phi(x) h`, `Ric(h) = (n-1) lambda h`):
/// with `B = (x phi'/phi)/2 - 1` and `At = -x phi'/2 + phi`,
/// `x^2 (Ric+ng)_00 = -n (x B' + B^2 - 1)` and
/// `x^2 (Ric+ng)_ij / h_ij = (n-1) lambda x^2 + x At' + ((n-2)B - 2) At + n phi`.
/// This reduction is cross-checked against the grid Christoffel machinery for
/// lambda = 0 warps in the tests.
pub fn einstein_residual_warp(jet: &WarpJet, lambda: f64, order: usize) -> Result<WarpResidual> {
    let n = jet.n as f64;
    let one = PowerLogSeries::constant(Complex64::new(1.0, 0.0), order);
    let phi = jet.phi_at(order)?;
    let phi_inv = phi.inverse()?;
    let x_phi_prime = phi.diff().shift_exponent(Complex64::new(1.0, 0.0));
    let b = x_phi_prime
        .mul(&phi_inv)?
        .scale(Complex64::new(0.5, 0.0))
        .sub(&one)?;
    let xbp = b.diff().shift_exponent(Complex64::new(1.0, 0.0));
    let res00 = xbp
        .add(&b.mul(&b)?)?
        .sub(&one)?
        .scale(Complex64::new(-n, 0.0));

    let a_t = phi.sub(&x_phi_prime.scale(Complex64::new(0.5, 0.0)))?;
    let xap = a_t.diff().shift_exponent(Complex64::new(1.0, 0.0));
    let mut x2 = PowerLogSeries::constant(Complex64::new((n - 1.0) * lambda, 0.0), order)
        .shift_exponent(Complex64::new(2.0, 0.0));
    if order < 2 {
        x2 = x2.truncate(order);
    }
    let coef = b
        .scale(Complex64::new(n - 2.0, 0.0))
        .sub(&one.scale(Complex64::new(2.0, 0.0)))?;
    let res_tan = x2
        .add(&xap)?
        .add(&coef.mul(&a_t)?)?
        .add(&phi.scale(Complex64::new(n, 0.0)))?;

    // tr_g(Ric+ng) = res00 + n phi^{-1} res_tan
    let trace = res00.add(&phi_inv.mul(&res_tan)?.scale(Complex64::new(n, 0.0)))?;
    Ok(WarpResidual {
        res00,
        res_tan,
        trace,
    })
}

/// The exact Poincare jet of an Einstein boundary metric:
/// `h_x = (1 - lambda x^2 / 4)^2 h`. The residual check through `order` is
/// mandatory; the construction is rejected if it fails.
pub fn einstein_warp(model: &EinsteinModel, order: usize) -> Result<WarpJet> {
    let l = model.lambda;
    let trunc = order.max(4);
    let mut c = vec![Complex64::new(0.0, 0.0); trunc + 1];
    c[0] = Complex64::new(1.0, 0.0);
    if trunc >= 2 {
        c[2] = Complex64::new(-l / 2.0, 0.0);
    }
    if trunc >= 4 {
        c[4] = Complex64::new(l * l / 16.0, 0.0);
    }
    let jet = WarpJet::new(model.n, PowerLogSeries::from_plain(Complex64::new(0.0, 0.0), c), true)?;
    let res = einstein_residual_warp(&jet, l, order)?;
    for j in 0..=order {
        let norm = res.coeff_norm(j)?;
        if norm > 1e-10 {
            return Err(Error::ResidualTooLarge { order: j, norm });
        }
    }
    Ok(jet)
}

fn sym_basis(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i..n {
            v.push((i, j));
        }
    }
    v
}

fn constant_sym_tensor(chart: &Arc<TorusChart>, n: usize, i: usize, j: usize) -> GridMatrix {
    let mut m = GridMatrix::zeros(chart, n);
    let one = GridField::constant(chart, Complex64::new(1.0, 0.0));
    m.set_entry(i, j, one.clone());
    if i != j {
        m.set_entry(j, i, one);
    }
    m
}

/// Solve the Poincare normal form order by order.
///
/// Even orders `j < n` (all even orders for n odd) are fully determined; at
/// `j = n` (n even) only the trace of `h^{(n)}` is determined, from the trace
/// condition, and the trace-free part is set to zero.
pub fn solve_fg(h: &GridMetric, order: usize) -> Result<GridJet> {
    let n = h.dim();
    if n % 2 == 0 && order > n {
        return Err(Error::InvalidParameter(format!(
            "for even n = {n} the jet is determined only up to order n; requested {order}"
        )));
    }
    if n % 2 == 1 && order > MAX_ODD_ORDER {
        return Err(Error::InvalidParameter(format!(
            "order {order} exceeds the configured odd-dimension maximum {MAX_ODD_ORDER}"
        )));
    }
    let chart = h.chart().clone();
    let mut coeffs: Vec<GridMatrix> = vec![GridMatrix::zeros(&chart, n); order + 1];
    coeffs[0] = h.matrix().clone();

    let basis = sym_basis(n);
    let nsym = basis.len();
    let len = chart.len();

    let mut j = 2;
    while j <= order {
        if n % 2 == 0 && j == n {
            solve_trace_order(h, &mut coeffs, j)?;
        } else {
            // Residual coefficient at index j, as an affine function of the
            // pointwise value of h^{(j)}: probe with constant basis tensors.
            let base = residual_spatial_coeff(&chart, n, &coeffs, j)?;
            let mut deltas: Vec<Vec<GridField>> = Vec::with_capacity(nsym);
            for &(bi, bj) in &basis {
                coeffs[j] = constant_sym_tensor(&chart, n, bi, bj);
                let probed = residual_spatial_coeff(&chart, n, &coeffs, j)?;
                deltas.push(
                    probed
                        .iter()
                        .zip(&base)
                        .map(|(p, b)| p.sub(b))
                        .collect(),
                );
            }
            coeffs[j] = GridMatrix::zeros(&chart, n);

            // Per-point linear solve: sum_m A[.., m] u_m = -base.
            let mut sol = GridMatrix::zeros(&chart, n);
            let mut a = vec![Complex64::new(0.0, 0.0); nsym * nsym];
            let mut rhs = vec![Complex64::new(0.0, 0.0); nsym];
            for p in 0..len {
                for (row, _) in basis.iter().enumerate() {
                    for (col, d) in deltas.iter().enumerate() {
                        a[row * nsym + col] = d[row].values()[p];
                    }
                    rhs[row] = -base[row].values()[p];
                }
                let u = solve_dense(&mut a, &mut rhs, nsym).ok_or_else(|| Error::SingularProbe {
                    point: chart.multi_index(p),
                    order: j,
                })?;
                for (m, &(bi, bj)) in basis.iter().enumerate() {
                    sol.set_entry_value(bi, bj, p, u[m]);
                    if bi != bj {
                        sol.set_entry_value(bj, bi, p, u[m]);
                    }
                }
            }
            coeffs[j] = sol;
        }
        j += 2;
    }

    // Final verification pass.
    let jet_order = order;
    let mut jet = GridJet {
        h: h.clone(),
        coeffs,
        order: jet_order,
        exact: false,
        residual_norms: Vec::new(),
        trace_residual: None,
        trace_free_choice: "zero",
    };
    let res = einstein_residual(&jet, jet_order)?;
    let mut norms = Vec::with_capacity(jet_order + 1);
    for idx in 0..=jet_order {
        norms.push(res.coeff_norm(idx)?);
    }
    let solved_through = if n % 2 == 0 { n.saturating_sub(2).min(order) } else { order };
    for idx in 0..=solved_through {
        if norms[idx] > RESIDUAL_TOL {
            return Err(Error::ResidualTooLarge {
                order: idx,
                norm: norms[idx],
            });
        }
    }
    if n % 2 == 0 && order == n {
        let tr = res.trace_coeff_norm(n)?;
        if tr > RESIDUAL_TOL {
            return Err(Error::ResidualTooLarge { order: n, norm: tr });
        }
        jet.trace_residual = Some(tr);
    }
    jet.residual_norms = norms;
    // A flat boundary metric has the zero jet exactly; mark it reusable to
    // any order.
    jet.exact = jet.coeffs[0]
        .sub(&GridMatrix::identity(&chart, n))
        .norm()
        == 0.0
        && jet.coeffs[1..].iter().all(|c| c.norm() == 0.0);
    Ok(jet)
}

/// Spatial-block residual coefficient at index `j` (packed i <= j entries).
fn residual_spatial_coeff(
    chart: &Arc<TorusChart>,
    n: usize,
    coeffs: &[GridMatrix],
    j: usize,
) -> Result<Vec<GridField>> {
    let gbar = assemble_gbar(chart, &coeffs[..=j.min(coeffs.len() - 1)], j);
    let res = ricci_plus_ng(chart, n, &gbar)?;
    let m = n + 1;
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for a in 1..m {
        for b in a..m {
            out.push(res.entries[sym_idx(m, a, b)].plain_coeff(j)?.clone());
        }
    }
    Ok(out)
}

/// Solve the order-n trace condition: `h^{(n)} = (t/n) h` with `t` determined
/// pointwise from the x^n coefficient of `tr_g(Ric(g)+ng)`.
fn solve_trace_order(h: &GridMetric, coeffs: &mut [GridMatrix], j: usize) -> Result<()> {
    let chart = h.chart().clone();
    let n = h.dim();
    let trace_coeff = |coeffs: &[GridMatrix]| -> Result<GridField> {
        let gbar = assemble_gbar(&chart, &coeffs[..=j], j);
        let res = ricci_plus_ng(&chart, n, &gbar)?;
        Ok(res.trace.plain_coeff(j)?.clone())
    };
    coeffs[j] = GridMatrix::zeros(&chart, n);
    let base = trace_coeff(coeffs)?;
    let scale = 1.0 / n as f64;
    coeffs[j] = h.matrix().scale(Complex64::new(scale, 0.0));
    let probed = trace_coeff(coeffs)?;
    let slope = probed.sub(&base);
    // t per point: base + slope * t = 0
    let mut t = GridField::zeros(&chart);
    for p in 0..chart.len() {
        let s = slope.values()[p];
        if s.norm() < 1e-14 {
            return Err(Error::SingularProbe {
                point: chart.multi_index(p),
                order: j,
            });
        }
        t.values_mut()[p] = -base.values()[p] / s;
    }
    coeffs[j] = h.matrix().scale_by_field(&t.map(|z| z * scale));
    Ok(())
}

fn solve_dense(a: &mut [Complex64], rhs: &mut [Complex64], n: usize) -> Option<Vec<Complex64>> {
    // Gaussian elimination with partial pivoting; singular below 1e-10 of the
    // largest pivot scale.
    let mut max_entry: f64 = 0.0;
    for v in a.iter() {
        max_entry = max_entry.max(v.norm());
    }
    for k in 0..n {
        let mut piv = k;
        let mut best = a[k * n + k].norm();
        for r in (k + 1)..n {
            let v = a[r * n + k].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best <= 1e-10 * max_entry.max(1e-300) {
            return None;
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            rhs.swap(k, piv);
        }
        let d = a[k * n + k];
        for r in (k + 1)..n {
            let f = a[r * n + k] / d;
            if f.norm() == 0.0 {
                continue;
            }
            for c in k..n {
                let v = a[k * n + c];
                a[r * n + c] -= f * v;
            }
            let v = rhs[k];
            rhs[r] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k];
        for c in (k + 1)..n {
            acc -= a[k * n + c] * x[c];
        }
        x[k] = acc / a[k * n + k];
    }
    Some(x)
}

/// Volume expansion of a grid jet: coefficients of
/// `(det h_x / det h)^{1/2}` and, for n even with jet order >= n, the log
/// coefficient `L = int_M v^{(n)} dv_h`.
pub struct VolumeExpansionGrid {
    pub v: Vec<GridField>,
    pub l: Option<f64>,
}

pub fn volume_expansion(jet: &GridJet) -> Result<VolumeExpansionGrid> {
    let n = jet.dim();
    let trunc = if jet.exact { n.max(jet.order) } else { jet.order };
    if n % 2 == 0 && trunc < n {
        return Err(Error::JetOrderInsufficient {
            have: trunc,
            need: n,
        });
    }
    let w = det_ratio_sqrt_series(jet, trunc)?;
    let v: Vec<GridField> = w.plain_coeffs().to_vec();
    let l = if n % 2 == 0 {
        Some(integrate(&jet.h, &v[n]).re)
    } else {
        None
    };
    Ok(VolumeExpansionGrid { v, l })
}

/// `w(x) = (det h_x / det h)^{1/2}` as a field series: the v-coefficients of
/// the volume expansion, shared with the grid `D_s` backend.
pub fn det_ratio_sqrt_series(
    jet: &GridJet,
    trunc: usize,
) -> Result<PowerLogSeries<GridField>> {
    let h_series = jet.h_series(trunc)?;
    // det ratio via D' = D tr(Hinv H'), D(0) = 1 after normalising by det h.
    let hinv_series = h_series.inverse()?;
    let hprime = h_series.diff();
    let tau = hinv_series.mul(&hprime)?.map(|m| m.trace());
    // d_k = (1/k) sum_{m<k} d_m tauhat_{k-m}, where tau = sum tauhat_j x^{j-1}
    let mut d: Vec<GridField> = vec![GridField::constant(jet.chart(), Complex64::new(1.0, 0.0))];
    for k in 1..=trunc {
        let mut acc = GridField::zeros(jet.chart());
        for m in 0..k {
            acc = acc.add(&d[m].mul(tau.plain_coeff(k - m)?));
        }
        d.push(acc.scale(Complex64::new(1.0 / k as f64, 0.0)));
    }
    let dseries = PowerLogSeries::from_plain(Complex64::new(0.0, 0.0), d);
    sqrt_unit_leading(&dseries)
}

/// Volume expansion of a warped jet: `v` coefficients of `phi^{n/2}` and
/// `L = v^{(n)} * vol(M)` for n even.
pub struct VolumeExpansionWarp {
    pub v: Vec<Complex64>,
    pub l: Option<f64>,
}

pub fn volume_expansion_warp(
    jet: &WarpJet,
    model: &EinsteinModel,
    trunc: usize,
) -> Result<VolumeExpansionWarp> {
    let n = jet.n;
    if n % 2 == 0 && trunc < n {
        return Err(Error::JetOrderInsufficient {
            have: trunc,
            need: n,
        });
    }
    let phi = jet.phi_at(trunc)?;
    let w = if n % 2 == 0 {
        let mut acc = PowerLogSeries::constant(Complex64::new(1.0, 0.0), trunc);
        for _ in 0..n / 2 {
            acc = acc.mul(&phi)?;
        }
        acc
    } else {
        let root = sqrt_unit_leading(&phi)?;
        let mut acc = PowerLogSeries::constant(Complex64::new(1.0, 0.0), trunc);
        for _ in 0..n {
            acc = acc.mul(&root)?;
        }
        acc
    };
    let v: Vec<Complex64> = w.plain_coeffs().to_vec();
    let l = if n % 2 == 0 {
        Some((v[n] * model.volume).re)
    } else {
        None
    };
    Ok(VolumeExpansionWarp { v, l })
}

#[cfg(test)]
mod tests;
