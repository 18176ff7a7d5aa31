//! The boundary recursion: the operator `D_s`, the smooth-branch coefficients
//! `p_{j,s} f`, the log coefficient `g_{2k}`, the conformally invariant
//! operators `P_k`, the constants `c_{k,s}` and `c_k`, and the Q-curvature,
//! together with the explicit low-order formula oracles they are checked
//! against.
//!
//! `D_s` is defined by
//! `[Delta_g - s(n-s)] (x^{n-s} F) = x^{n-s+1} D_s F` in the normal form,
//! which gives
//! `D_s = -x d^2_x + (2s-n-1 - (x/2) tr(h^{-1} h')) d_x
//!        - ((n-s)/2) tr(h^{-1} h') + x Delta_{h_x}`.
//! The same recursion, run over different coefficient algebras, produces the
//! GJMS family on grid metrics and the Frobenius basis of the per-mode
//! scattering problems.

use num_complex::Complex64;
use num_rational::Rational64;

use crate::algebra::{Coefficient, MuPoly};
use crate::chart::{
    curvature_pack, divergence_one_form, laplace_beltrami, GridField, GridMatrix, GridMetric,
};
use crate::einstein::EinsteinModel;
use crate::error::{Error, Result};
use crate::fg::{GridJet, WarpJet};
use crate::series::PowerLogSeries;

const EXCEPTIONAL_EPS: f64 = 1e-8;

/// A backend able to apply `D_s` to series over its coefficient algebra.
pub trait DsBackend {
    type Coeff: Coefficient;
    fn dim(&self) -> usize;
    /// Largest usable series order (jet availability).
    fn series_order_limit(&self) -> usize;
    /// True when the underlying jet is exact to all orders (flat boundary,
    /// Einstein warp): the recursion stays meaningful beyond k = n/2.
    fn jet_exact(&self) -> bool {
        false
    }
    /// The trace term `h^{ij} h'_{ij}` as a series with base exponent -1.
    fn trace_term(&self) -> &PowerLogSeries<Self::Coeff>;
    /// `x * Delta_{h_x} F` (for the half-line model, `(V/x) F`).
    fn x_laplacian(&self, f: &PowerLogSeries<Self::Coeff>) -> Result<PowerLogSeries<Self::Coeff>>;

    fn apply_ds(
        &self,
        s: Complex64,
        f: &PowerLogSeries<Self::Coeff>,
    ) -> Result<PowerLogSeries<Self::Coeff>> {
        let n = self.dim() as f64;
        let one = Complex64::new(1.0, 0.0);
        let tau = self.trace_term();
        let d1 = f.diff();
        let d2 = d1.diff();
        // -x F''
        let t1 = d2.shift_exponent(one).scale(-one);
        // (2s - n - 1) F'
        let t2 = d1.scale(2.0 * s - n - 1.0);
        // -(x/2) tau F'
        let t3 = tau
            .mul(&d1)?
            .shift_exponent(one)
            .scale(Complex64::new(-0.5, 0.0));
        // -((n-s)/2) tau F
        let t4 = tau.mul(f)?.scale(-(Complex64::new(n, 0.0) - s) * 0.5);
        let t5 = self.x_laplacian(f)?;
        t1.add(&t2)?.add(&t3)?.add(&t4)?.add(&t5)
    }
}

/// What to do when the recursion hits the exceptional order `j = 2s - n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExceptionalPolicy {
    /// Reject: the caller wants the generic smooth branch.
    Error,
    /// Insert the log block and continue (the free plain coefficient at that
    /// order is set to zero).
    InsertLog,
}

/// Result of the formal recursion `F_j = F_{j-1} + f_j x^j (+ g_j x^j log x)`.
pub struct FormalSolution<A> {
    /// `F` with base exponent 0; plain coefficient `j` is `p_{j,s} f`.
    pub series: PowerLogSeries<A>,
    /// Order at which a log block was inserted, if any.
    pub log_order: Option<usize>,
}

/// Run the recursion driving `D_s F = O(x^{j_max})`.
pub fn formal_solution<B: DsBackend>(
    backend: &B,
    f0: B::Coeff,
    s: Complex64,
    j_max: usize,
    policy: ExceptionalPolicy,
) -> Result<FormalSolution<B::Coeff>> {
    if backend.series_order_limit() < j_max {
        return Err(Error::JetOrderInsufficient {
            have: backend.series_order_limit(),
            need: j_max,
        });
    }
    let n = backend.dim() as f64;
    let zero = f0.zero_like();
    let mut coeffs = vec![zero; j_max + 1];
    coeffs[0] = f0;
    let mut series = PowerLogSeries::from_plain(Complex64::new(0.0, 0.0), coeffs);
    let mut log_order = None;

    for j in 1..=j_max {
        let r = backend.apply_ds(s, &series)?;
        let p = Complex64::new((j - 1) as f64, 0.0);
        let r_plain = r.plain_at_power(p)?.clone();
        let indicial = 2.0 * s - n - j as f64;
        let denom = indicial * j as f64;
        if indicial.norm() < EXCEPTIONAL_EPS {
            match policy {
                ExceptionalPolicy::Error => {
                    return Err(Error::ExceptionalS {
                        s: format!("{s}"),
                        j,
                        dist: indicial.norm(),
                    });
                }
                ExceptionalPolicy::InsertLog => {
                    if log_order.is_some() {
                        return Err(Error::DoubleLog);
                    }
                    // D_s(g x^j log x) contributes (2s-n-2j) g = -j g to the
                    // plain coefficient at x^{j-1}; the plain coefficient f_j
                    // is free and set to zero.
                    let g = r_plain.scale(Complex64::new(1.0 / j as f64, 0.0));
                    series.set_log_coeff(j, g)?;
                    log_order = Some(j);
                    continue;
                }
            }
        }
        if log_order.is_some() {
            let off = (p - r.alpha()).re.round() as usize;
            let r_log = r.log_coeff(off)?.clone();
            let g_j = r_log.scale(-1.0 / denom);
            let f_j = r_plain
                .add(&g_j.scale(2.0 * s - n - 2.0 * j as f64))
                .scale(-1.0 / denom);
            series.set_log_coeff(j, g_j)?;
            series.set_plain_coeff(j, f_j)?;
        } else {
            let f_j = r_plain.scale(-1.0 / denom);
            series.set_plain_coeff(j, f_j)?;
        }
    }
    Ok(FormalSolution { series, log_order })
}

/// Smooth-branch recursion (errors at exceptional s, reporting the order).
pub fn formal_smooth_solve<B: DsBackend>(
    backend: &B,
    f0: B::Coeff,
    s: Complex64,
    j_max: usize,
) -> Result<FormalSolution<B::Coeff>> {
    formal_solution(backend, f0, s, j_max, ExceptionalPolicy::Error)
}

/// The log-order data at `s = n/2 + k`: returns `(F_{2k-1}, g_{2k})` where
/// the smooth part is determined below order 2k and
/// `g_{2k} = (2k)^{-1} (x^{1-2k} D_s F_{2k-1})|_{x=0}`.
pub fn log_coefficient<B: DsBackend>(
    backend: &B,
    f0: B::Coeff,
    k: usize,
) -> Result<(FormalSolution<B::Coeff>, B::Coeff)> {
    let n = backend.dim();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if n % 2 == 0 && 2 * k > n && !backend.jet_exact() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} exceeds n/2 = {} on a finite jet",
            n / 2
        )));
    }
    let s = Complex64::new(n as f64 / 2.0 + k as f64, 0.0);
    let sol = formal_solution(backend, f0, s, 2 * k, ExceptionalPolicy::InsertLog)?;
    if sol.log_order != Some(2 * k) {
        return Err(Error::InvalidParameter(format!(
            "log order {:?} does not match 2k = {}",
            sol.log_order,
            2 * k
        )));
    }
    let g = sol.series.log_coeff(2 * k)?.clone();
    Ok((sol, g))
}

/// `P_k f = -g_{2k} / (2 c_k)`.
pub fn p_k_apply<B: DsBackend>(backend: &B, f0: B::Coeff, k: usize) -> Result<B::Coeff> {
    let (_, g) = log_coefficient(backend, f0, k)?;
    let ck = c_k_f64(k);
    Ok(g.scale(Complex64::new(-1.0 / (2.0 * ck), 0.0)))
}

/// `P_{k,s} f = f_{2k} / c_{k,s}` on the smooth branch.
pub fn p_ks_apply<B: DsBackend>(
    backend: &B,
    f0: B::Coeff,
    k: usize,
    s: Complex64,
) -> Result<B::Coeff> {
    let sol = formal_smooth_solve(backend, f0, s, 2 * k)?;
    let c = c_ks(backend.dim(), k, s)?;
    Ok(sol.series.plain_coeff(2 * k)?.scale(1.0 / c))
}

/// Exact rational `c_k = (-1)^k [2^{2k} k! (k-1)!]^{-1}`.
pub fn c_k_exact(k: usize) -> Rational64 {
    assert!(k >= 1 && k <= 8, "c_k supported for 1 <= k <= 8");
    let mut denom: i64 = 1;
    for j in 1..=k as i64 {
        denom *= j;
    }
    for j in 1..k as i64 {
        denom *= j;
    }
    denom <<= 2 * k;
    let sign = if k % 2 == 0 { 1 } else { -1 };
    Rational64::new(sign, denom)
}

pub fn c_k_f64(k: usize) -> f64 {
    let r = c_k_exact(k);
    *r.numer() as f64 / *r.denom() as f64
}

/// `c_{k,s}` via the algebraically reduced Gamma ratio:
/// `(-1)^k / (2^{2k} k! prod_{j=1..k} (s - n/2 - j))`.
pub fn c_ks(n: usize, k: usize, s: Complex64) -> Result<Complex64> {
    let mut denom = Complex64::new((1..=k as i64).product::<i64>() as f64, 0.0);
    denom *= Complex64::new((1u64 << (2 * k)) as f64, 0.0);
    for j in 1..=k {
        let factor = s - n as f64 / 2.0 - j as f64;
        if factor.norm() < 1e-12 {
            return Err(Error::RationalPole(format!(
                "c_(k,s) pole at s = n/2 + {j} (k = {k})"
            )));
        }
        denom *= factor;
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Complex64::new(sign, 0.0) / denom)
}

/// Q-curvature by sampling `Q_{n/2,s} = P_{n/2,s}1 / (n-s)` near `s = n` and
/// polynomial extrapolation with escalating degree until two successive
/// interpolants agree.
pub struct QDiagnostics {
    pub degree: usize,
    pub history: Vec<f64>,
}

pub fn q_compute<B: DsBackend>(
    backend: &B,
    one: B::Coeff,
    delta: f64,
    tol: f64,
) -> Result<(B::Coeff, QDiagnostics)> {
    let n = backend.dim();
    if n % 2 != 0 {
        return Err(Error::InvalidParameter("Q needs even dimension".into()));
    }
    let k = n / 2;
    let mut prev: Option<B::Coeff> = None;
    let mut history = Vec::new();
    for degree in 2..=8usize {
        let mut nodes: Vec<f64> = Vec::new();
        let mut values: Vec<B::Coeff> = Vec::new();
        let mut m = 1usize;
        while nodes.len() < 2 * (degree + 1) {
            for sign in [1.0, -1.0] {
                let s_val = n as f64 + sign * m as f64 * delta;
                // skip near-integer s and near-exceptional 2s-n
                if (s_val - s_val.round()).abs() < 1e-8 {
                    continue;
                }
                let two_s_minus_n = 2.0 * s_val - n as f64;
                if (two_s_minus_n - two_s_minus_n.round()).abs() < EXCEPTIONAL_EPS
                    && (1.0..=(2 * k) as f64).contains(&two_s_minus_n.round())
                {
                    continue;
                }
                nodes.push(s_val);
                let s = Complex64::new(s_val, 0.0);
                let sol = formal_smooth_solve(backend, one.clone(), s, 2 * k)?;
                let c = c_ks(n, k, s)?;
                let q_s = sol
                    .series
                    .plain_coeff(2 * k)?
                    .scale(1.0 / (c * (n as f64 - s_val)));
                values.push(q_s);
            }
            m += 1;
        }
        let q = neville(&nodes, &values, n as f64);
        if let Some(p) = prev {
            let dev = q.sub(&p).norm();
            history.push(dev);
            if dev <= tol * q.norm().max(1.0) {
                return Ok((q, QDiagnostics { degree, history }));
            }
        }
        prev = Some(q);
    }
    Err(Error::InterpolationUnstable(format!(
        "interpolant history {history:?}"
    )))
}

fn neville<A: Coefficient>(nodes: &[f64], values: &[A], at: f64) -> A {
    let n = nodes.len();
    let mut p: Vec<A> = values.to_vec();
    for level in 1..n {
        for i in 0..n - level {
            let xi = nodes[i];
            let xj = nodes[i + level];
            let num = p[i + 1]
                .scale(Complex64::new((at - xi) / (xj - xi), 0.0))
                .add(&p[i].scale(Complex64::new((xj - at) / (xj - xi), 0.0)));
            p[i] = num;
        }
    }
    p[0].clone()
}

// ---------------------------------------------------------------------------
// Backends
// ---------------------------------------------------------------------------

/// Grid backend: `D_s` with the jet of a solved normal form over a torus chart.
pub struct GridDs {
    n: usize,
    limit: usize,
    exact: bool,
    tau: PowerLogSeries<GridField>,
    /// Coefficients of `w(x) sqrt(det h) h_x^{-1}` (matrix-valued, alpha 0).
    s_coeffs: Vec<GridMatrix>,
    winv: PowerLogSeries<GridField>,
    inv_sqrt_det: GridField,
}

impl GridDs {
    pub fn new(jet: &GridJet, series_order: usize) -> Result<Self> {
        if jet.available_order() < series_order {
            return Err(Error::JetOrderInsufficient {
                have: jet.order,
                need: series_order,
            });
        }
        let h_series = jet.h_series(series_order)?;
        let hinv_series = h_series.inverse()?;
        let tau = hinv_series.mul(&h_series.diff())?.map(|m| m.trace());
        let w = crate::fg::det_ratio_sqrt_series(jet, series_order)?;
        let winv = w.inverse()?;
        let sqrt_det = jet.h.det().map(|z| z.sqrt());
        let inv_sqrt_det = sqrt_det.map(|z| 1.0 / z);
        // S_m = sqrt(det h) * sum_{i+j=m} w_i Hinv_j
        let mut s_coeffs = Vec::with_capacity(series_order + 1);
        for m in 0..=series_order {
            let mut acc = GridMatrix::zeros(jet.chart(), jet.dim());
            for i in 0..=m {
                acc = acc.add(
                    &hinv_series.plain_coeffs()[m - i].scale_by_field(w.plain_coeff(i)?),
                );
            }
            s_coeffs.push(acc.scale_by_field(&sqrt_det));
        }
        Ok(GridDs {
            n: jet.dim(),
            limit: series_order,
            exact: jet.exact,
            tau,
            s_coeffs,
            winv,
            inv_sqrt_det,
        })
    }

    fn lap_block(&self, block: &[GridField]) -> Result<Vec<GridField>> {
        // Q_k = sum_{m+c=k} sum_a d_a( S_m^{ab} d_b phi_c ), then
        // result = -(1/sqrt(det h)) (winv conv Q), finally shifted by x.
        let n = self.n;
        let order = self.limit.min(block.len() - 1);
        let chart = block[0].chart().clone();
        // spatial gradients of each coefficient
        let mut grads: Vec<Vec<GridField>> = Vec::with_capacity(block.len());
        for phi in block {
            let mut g = Vec::with_capacity(n);
            for a in 0..n {
                g.push(phi.spectral_diff(a)?);
            }
            grads.push(g);
        }
        let mut q: Vec<GridField> = Vec::with_capacity(order + 1);
        for kidx in 0..=order {
            let mut acc = GridField::zeros(&chart);
            for m in 0..=kidx {
                let c = kidx - m;
                if c >= block.len() {
                    continue;
                }
                let sm = &self.s_coeffs[m];
                for a in 0..n {
                    let mut flux = GridField::zeros(&chart);
                    for b in 0..n {
                        flux = flux.add(&sm.entry(a, b).mul(&grads[c][b]));
                    }
                    acc = acc.add(&flux.spectral_diff(a)?);
                }
            }
            q.push(acc);
        }
        // winv convolution and overall factor
        let mut out = Vec::with_capacity(order + 1);
        for kidx in 0..=order {
            let mut acc = GridField::zeros(&chart);
            for m in 0..=kidx {
                acc = acc.add(&self.winv.plain_coeffs()[m].mul(&q[kidx - m]));
            }
            out.push(
                acc.mul(&self.inv_sqrt_det)
                    .scale(Complex64::new(-1.0, 0.0)),
            );
        }
        Ok(out)
    }
}

impl DsBackend for GridDs {
    type Coeff = GridField;
    fn dim(&self) -> usize {
        self.n
    }
    fn series_order_limit(&self) -> usize {
        self.limit
    }
    fn jet_exact(&self) -> bool {
        self.exact
    }
    fn trace_term(&self) -> &PowerLogSeries<GridField> {
        &self.tau
    }
    fn x_laplacian(&self, f: &PowerLogSeries<GridField>) -> Result<PowerLogSeries<GridField>> {
        let plain = self.lap_block(f.plain_coeffs())?;
        let log = self.lap_block(f.log_coeffs())?;
        Ok(PowerLogSeries::from_parts(
            f.alpha() + Complex64::new(1.0, 0.0),
            plain,
            log,
        ))
    }
}

/// Per-mode backend for warped models `h_x = phi(x) h`: the Laplacian is
/// multiplication by `mu / phi(x)` and the trace term is `n phi'/phi`.
/// Also covers the half-line Yukawa model (n = 0, potential x).
pub struct ModeDs<C: Coefficient> {
    n: usize,
    limit: usize,
    exact: bool,
    tau: PowerLogSeries<C>,
    /// `x Delta_{h_x}` as a multiplication series: `mu x phi^{-1}` (alpha 1),
    /// or the constant series 1 for the Yukawa potential (V/x = 1).
    pot: PowerLogSeries<C>,
}

impl<C: Coefficient> ModeDs<C> {
    /// Collar model with eigenvalue `mu` embedded in the algebra `C`.
    pub fn collar(jet: &WarpJet, mu: C, series_order: usize) -> Result<Self> {
        if jet.available_order() < series_order {
            return Err(Error::JetOrderInsufficient {
                have: jet.phi.order(),
                need: series_order,
            });
        }
        let proto = mu.one_like();
        let phi_c = jet.phi_at(series_order)?;
        let lift = |s: &PowerLogSeries<Complex64>| -> PowerLogSeries<C> {
            s.map(|c| proto.scale(*c))
        };
        let phi = lift(&phi_c);
        let phi_inv = phi.inverse()?;
        let tau = phi
            .diff()
            .mul(&phi_inv)?
            .scale(Complex64::new(jet.n as f64, 0.0));
        let pot = phi_inv
            .shift_exponent(Complex64::new(1.0, 0.0))
            .scale_coeff(&mu);
        Ok(ModeDs {
            n: jet.n,
            limit: series_order,
            exact: jet.exact,
            tau,
            pot,
        })
    }
}

impl ModeDs<Complex64> {
    /// The half-line model `-(x d_x)^2 + x + s^2` (n = 0, Dirichlet at x=1):
    /// `V/x = 1`.
    pub fn yukawa(series_order: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let tau = PowerLogSeries::from_plain(
            Complex64::new(-1.0, 0.0),
            vec![zero; series_order + 1],
        );
        let pot = PowerLogSeries::constant(Complex64::new(1.0, 0.0), series_order);
        ModeDs {
            n: 0,
            limit: series_order,
            exact: true,
            tau,
            pot,
        }
    }
}

impl<C: Coefficient> DsBackend for ModeDs<C> {
    type Coeff = C;
    fn dim(&self) -> usize {
        self.n
    }
    fn series_order_limit(&self) -> usize {
        self.limit
    }
    fn jet_exact(&self) -> bool {
        self.exact
    }
    fn trace_term(&self) -> &PowerLogSeries<C> {
        &self.tau
    }
    fn x_laplacian(&self, f: &PowerLogSeries<C>) -> Result<PowerLogSeries<C>> {
        self.pot.mul(f)
    }
}

/// Symbolic per-eigenvalue backend over an Einstein model: coefficients are
/// polynomials in mu.
pub fn einstein_mode_symbolic(jet: &WarpJet, series_order: usize) -> Result<ModeDs<MuPoly>> {
    ModeDs::collar(jet, MuPoly::mu(), series_order)
}

// ---------------------------------------------------------------------------
// Explicit-formula oracles
// ---------------------------------------------------------------------------

/// Conformal Laplacian: `P_1 f = Delta f + (n-2) R f / (4(n-1))`.
pub fn oracle_yamabe(h: &GridMetric, f: &GridField) -> Result<GridField> {
    let n = h.dim() as f64;
    let pack = curvature_pack(h)?;
    let lap = laplace_beltrami(h, f)?;
    Ok(lap.add(&pack.scalar.mul(f).scale(Complex64::new(
        (n - 2.0) / (4.0 * (n - 1.0)),
        0.0,
    ))))
}

/// Paneitz operator:
/// `P_2 f = Delta^2 f + delta(T df) + (n-4)(Delta J + (n/2) J^2 - 2|P|^2) f / 2`.
pub fn oracle_paneitz(h: &GridMetric, f: &GridField) -> Result<GridField> {
    let n = h.dim();
    if n < 3 {
        return Err(Error::InvalidParameter(
            "Paneitz oracle needs n >= 3".into(),
        ));
    }
    let nf = n as f64;
    let pack = curvature_pack(h)?;
    let lap = laplace_beltrami(h, f)?;
    let lap2 = laplace_beltrami(h, &lap)?;
    // (T df)_i = T_i^j d_j f
    let t = pack.t_endo.as_ref().unwrap();
    let mut tdf = Vec::with_capacity(n);
    let mut df = Vec::with_capacity(n);
    for b in 0..n {
        df.push(f.spectral_diff(b)?);
    }
    for a in 0..n {
        let mut acc = GridField::zeros(f.chart());
        for b in 0..n {
            acc = acc.add(&t.entry(a, b).mul(&df[b]));
        }
        tdf.push(acc);
    }
    let delta_tdf = divergence_one_form(h, &tdf)?;
    let lap_j = laplace_beltrami(h, &pack.j_scalar)?;
    let j2 = pack.j_scalar.mul(&pack.j_scalar);
    let zeroth = lap_j
        .add(&j2.scale(Complex64::new(nf / 2.0, 0.0)))
        .sub(&pack.p_norm2.as_ref().unwrap().scale(Complex64::new(2.0, 0.0)))
        .scale(Complex64::new((nf - 4.0) / 2.0, 0.0));
    Ok(lap2.add(&delta_tdf).add(&zeroth.mul(f)))
}

/// Dimension-4 Q-curvature: `6 Q = Delta R + R^2 - 3 |Ric|^2`.
pub fn oracle_q4(h: &GridMetric) -> Result<GridField> {
    if h.dim() != 4 {
        return Err(Error::InvalidParameter("Q4 oracle needs n = 4".into()));
    }
    let pack = curvature_pack(h)?;
    let lap_r = laplace_beltrami(h, &pack.scalar)?;
    let r2 = pack.scalar.mul(&pack.scalar);
    Ok(lap_r
        .add(&r2)
        .sub(&pack.ricci_norm2.scale(Complex64::new(3.0, 0.0)))
        .scale(Complex64::new(1.0 / 6.0, 0.0)))
}

/// Dimension-2 Q-curvature: `Q = R/2`.
pub fn oracle_q2(h: &GridMetric) -> Result<GridField> {
    if h.dim() != 2 {
        return Err(Error::InvalidParameter("Q2 oracle needs n = 2".into()));
    }
    let pack = curvature_pack(h)?;
    Ok(pack.scalar.scale(Complex64::new(0.5, 0.0)))
}

/// Einstein-model P_1 eigenvalue polynomial: `mu + (n-2) R / (4(n-1))`.
pub fn einstein_yamabe_poly(model: &EinsteinModel) -> MuPoly {
    let n = model.n as f64;
    MuPoly::mu().add(&MuPoly::constant(Complex64::new(
        (n - 2.0) * model.scalar_curvature() / (4.0 * (n - 1.0)),
        0.0,
    )))
}

/// Einstein-model Paneitz eigenvalue polynomial:
/// `mu^2 + ((n-2)J - 2 lambda) mu + (n-4)((n/2) J^2 - 2 |P|^2)/2`.
pub fn einstein_paneitz_poly(model: &EinsteinModel) -> MuPoly {
    let n = model.n as f64;
    let j = model.j_scalar();
    let tc = (n - 2.0) * j - 2.0 * model.lambda;
    let zeroth = (n - 4.0) * (n / 2.0 * j * j - 2.0 * model.p_norm2()) / 2.0;
    MuPoly::new(vec![
        Complex64::new(zeroth, 0.0),
        Complex64::new(tc, 0.0),
        Complex64::new(1.0, 0.0),
    ])
}

/// Einstein-model Q scalar: `(Delta R + R^2 - 3|Ric|^2)/6` with constant R.
pub fn einstein_q4_value(model: &EinsteinModel) -> f64 {
    let r = model.scalar_curvature();
    (r * r - 3.0 * model.ricci_norm2()) / 6.0
}

#[cfg(test)]
mod tests;
