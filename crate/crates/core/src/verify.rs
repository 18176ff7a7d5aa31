//! The cross-check suite: every headline identity the library exists to
//! verify, runnable as `confscat verify` and as the `acceptance` integration
//! test target. Each criterion pins its tolerance in code and reports the
//! measured defect.
//!
//! Heavy fixtures (the 16^4 normal-form solves and curvature packs) are
//! computed once and shared across criteria.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::chart::{
    curvature_pack, inner_product, integrate, CurvaturePack, GridField,
    GridMetric, TorusChart,
};
use crate::einstein::EinsteinModel;
use crate::error::Result;
use crate::fg::{einstein_warp, solve_fg, volume_expansion, volume_expansion_warp, GridJet};
use crate::gjms::{
    c_k_exact, c_k_f64, oracle_paneitz, oracle_q2, oracle_q4, oracle_yamabe,
    p_k_apply, q_compute, GridDs, ModeDs,
};
use crate::records::Record;
use crate::scatter::{
    contour_residue, energy_identity, pairing_residual, pf_energy_complete, residue_extract,
    scattering_value, yukawa_problem, yukawa_s, CollarModel, CompleteEinsteinModel, Mode,
};

pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} [{}]: measured {:.3e} (tol {:.1e}) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.measured,
            self.tolerance,
            self.detail
        )
    }

    pub fn to_record(&self) -> Record {
        use crate::records::Value;
        Record::new(
            "acceptance_criterion",
            Value::Bool(self.passed),
            "verification suite",
        )
        .param("id", Value::Int(self.id as i64))
        .param("name", Value::Text(self.name.into()))
        .param("measured", Value::Real(self.measured))
        .param("tolerance", Value::Real(self.tolerance))
        .error(self.measured)
    }
}

fn result(
    id: usize,
    name: &'static str,
    measured: f64,
    tolerance: f64,
    detail: String,
) -> CriterionResult {
    CriterionResult {
        id,
        name,
        passed: measured.is_finite() && measured <= tolerance,
        measured,
        tolerance,
        detail,
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

// ---------------------------------------------------------------------------
// Shared fixtures
// ---------------------------------------------------------------------------

pub struct GridFixture {
    pub h: GridMetric,
    pub jet: GridJet,
    pub pack: CurvaturePack,
}

fn upsilon_t4(chart: &Arc<TorusChart>) -> GridField {
    GridField::from_fn(chart, |y| 0.05 * y[0].sin())
}

fn upsilon_t2(chart: &Arc<TorusChart>) -> GridField {
    GridField::from_fn(chart, |y| 0.05 * y[0].sin())
}

/// Generic band-limited non-conformally-flat metric on T^4 at the default
/// 16^4 resolution: per-axis Fourier support {0, 1}, well inside Nyquist.
fn t4_metric() -> GridMetric {
    let chart = TorusChart::square(4, 16).unwrap();
    GridMetric::from_components(&chart, |i, j, y| {
        let base = if i == j { 1.0 } else { 0.0 };
        let q = match (i, j) {
            (0, 0) => (y[1]).sin(),
            (0, 1) => 0.50 * (y[2]).cos(),
            (0, 2) => 0.40 * (y[0] + y[3]).sin(),
            (0, 3) => 0.30 * (y[1] + y[2]).cos(),
            (1, 1) => (y[0] + y[2]).cos(),
            (1, 2) => 0.35 * (y[3]).sin(),
            (1, 3) => 0.45 * (y[0]).cos(),
            (2, 2) => (y[2] + y[3]).sin().cos() * 0.0 + (y[0] - y[1]).cos(),
            (2, 3) => 0.25 * (y[1] - y[3]).sin(),
            (3, 3) => (y[1] - y[2]).cos(),
            _ => 0.0,
        };
        base + 0.05 * q
    })
    .unwrap()
}

fn t2_metric() -> GridMetric {
    let chart = TorusChart::square(2, 64).unwrap();
    let ups = GridField::from_fn(&chart, |y| 0.1 * y[0].sin());
    GridMetric::flat(&chart).conformal_rescale(&ups)
}

static T4: Lazy<GridFixture> = Lazy::new(|| {
    let h = t4_metric();
    let jet = solve_fg(&h, 4).expect("T4 normal-form solve");
    let pack = curvature_pack(&h).expect("T4 curvature");
    GridFixture { h, jet, pack }
});

static T4_HAT: Lazy<GridFixture> = Lazy::new(|| {
    let ups = upsilon_t4(T4.h.chart());
    let h = T4.h.conformal_rescale(&ups);
    let jet = solve_fg(&h, 4).expect("T4-hat normal-form solve");
    let pack = curvature_pack(&h).expect("T4-hat curvature");
    GridFixture { h, jet, pack }
});

static T2: Lazy<GridFixture> = Lazy::new(|| {
    let h = t2_metric();
    let jet = solve_fg(&h, 2).expect("T2 normal-form solve");
    let pack = curvature_pack(&h).expect("T2 curvature");
    GridFixture { h, jet, pack }
});

static T2_HAT: Lazy<GridFixture> = Lazy::new(|| {
    let ups = upsilon_t2(T2.h.chart());
    let h = T2.h.conformal_rescale(&ups);
    let jet = solve_fg(&h, 2).expect("T2-hat normal-form solve");
    let pack = curvature_pack(&h).expect("T2-hat curvature");
    GridFixture { h, jet, pack }
});

fn band_limited_field(chart: &Arc<TorusChart>, rng: &mut StdRng) -> GridField {
    let n = chart.dim();
    let mut modes: Vec<(Vec<f64>, f64, f64)> = Vec::new();
    for a in 0..n {
        let mut xi = vec![0.0; n];
        xi[a] = 1.0;
        modes.push((xi.clone(), rng.gen_range(-1.0..1.0), rng.gen_range(0.0..6.28)));
        if a + 1 < n {
            let mut xi2 = vec![0.0; n];
            xi2[a] = 1.0;
            xi2[a + 1] = 1.0;
            modes.push((xi2, rng.gen_range(-1.0..1.0), rng.gen_range(0.0..6.28)));
        }
    }
    GridField::from_fn(chart, move |y| {
        modes
            .iter()
            .map(|(xi, amp, phase)| {
                let arg: f64 = xi.iter().zip(y).map(|(a, b)| a * b).sum();
                amp * (arg + phase).cos()
            })
            .sum()
    })
}

fn sup_rel(a: &GridField, b: &GridField) -> f64 {
    use crate::algebra::Coefficient;
    a.sub(b).norm() / b.norm().max(1e-30)
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

pub fn criterion_1() -> Result<CriterionResult> {
    use num_rational::Rational64;
    let ok = c_k_exact(1) == Rational64::new(-1, 4)
        && c_k_exact(2) == Rational64::new(1, 32)
        && c_k_exact(3) == Rational64::new(-1, 768);
    Ok(result(
        1,
        "constants c_k exact",
        if ok { 0.0 } else { 1.0 },
        0.5,
        "c_1 = -1/4, c_2 = 1/32, c_3 = -1/768 (rational arithmetic)".into(),
    ))
}

pub fn criterion_2() -> Result<CriterionResult> {
    // flat collar, n = 2: Res_{s = n/2+k} S = -c_k |xi|^{2k}, k = 1,2, |xi| = 1..3
    let n = 2usize;
    let model = CollarModel::flat(n, 1.0)?;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for k in 1..=2usize {
        for xi in 1..=3i64 {
            let mode = Mode::Fourier(vec![xi, 0]);
            let s0 = c(n as f64 / 2.0 + k as f64);
            let rec = residue_extract(&model, &mode, s0, 0.05, 32, false)?;
            let want = -c_k_f64(k) * mode.mu().powi(k as i32);
            let rel = (rec.residue - c(want)).norm() / want.abs();
            worst = worst.max(rel);
            detail = format!("last: k={k} xi={xi} residue {:.6e}", rec.residue.re);
        }
    }
    Ok(result(2, "Theorem 1 flat cross-check", worst, 1e-5, detail))
}

pub fn criterion_3() -> Result<CriterionResult> {
    // Einstein warp lambda=1, n=4, k=1: residue + c_1 * (P_1 eigenvalue) = 0
    let s4 = EinsteinModel::round_sphere(4)?;
    let model = CollarModel::einstein_capped(&s4, 1.0)?;
    let jet = einstein_warp(&s4, 8)?;
    let s0 = c(3.0);
    let mut worst: f64 = 0.0;
    for k_mode in 0..=2usize {
        let mu = s4.sphere_eigenvalue(k_mode);
        let mode = Mode::Eigen(mu);
        let rec = residue_extract(&model, &mode, s0, 0.05, 32, true)?;
        let backend = ModeDs::collar(&jet, c(mu), 4)?;
        let p1 = p_k_apply(&backend, c(1.0), 1)?;
        let combo = (rec.residue + c_k_f64(1) * p1).norm();
        let scale = (c_k_f64(1) * p1).norm().max(1e-12);
        worst = worst.max(combo / scale);
    }
    Ok(result(
        3,
        "Theorem 1 curved cross-check",
        worst,
        1e-5,
        "contour residue vs -c_1 P_1 eigenvalue, mu in {0,4,10}".into(),
    ))
}

pub fn criterion_4() -> Result<CriterionResult> {
    let fx = &*T4;
    let chart = fx.h.chart().clone();
    let mut rng = StdRng::seed_from_u64(41);
    let f = band_limited_field(&chart, &mut rng);
    let ds = GridDs::new(&fx.jet, 4)?;
    let p1 = p_k_apply(&ds, f.clone(), 1)?;
    let p1_oracle = oracle_yamabe(&fx.h, &f)?;
    let e1 = sup_rel(&p1, &p1_oracle);
    let p2 = p_k_apply(&ds, f.clone(), 2)?;
    let p2_oracle = oracle_paneitz(&fx.h, &f)?;
    let e2 = sup_rel(&p2, &p2_oracle);
    let measured = e1.max(e2 * 0.1); // report against the tighter of the two gates
    let passed = e1 <= 1e-7 && e2 <= 1e-6;
    Ok(CriterionResult {
        id: 4,
        name: "GJMS oracles P_1/P_2",
        passed,
        measured,
        tolerance: 1e-7,
        detail: format!("P_1 rel {e1:.3e} (tol 1e-7), P_2 rel {e2:.3e} (tol 1e-6)"),
    })
}

pub fn criterion_5() -> Result<CriterionResult> {
    // n = 2: Q = R/2; n = 4: 6Q = Delta R + R^2 - 3|Ric|^2
    let t2 = &*T2;
    let ds2 = GridDs::new(&t2.jet, 2)?;
    let one2 = GridField::constant(t2.h.chart(), c(1.0));
    let (q2, _) = q_compute(&ds2, one2, 1e-2, 1e-8)?;
    let q2_oracle = oracle_q2(&t2.h)?;
    let e2 = sup_rel(&q2, &q2_oracle);

    let t4 = &*T4;
    let ds4 = GridDs::new(&t4.jet, 4)?;
    let one4 = GridField::constant(t4.h.chart(), c(1.0));
    let (q4, _) = q_compute(&ds4, one4, 1e-2, 1e-8)?;
    let q4_oracle = oracle_q4(&t4.h)?;
    let e4 = sup_rel(&q4, &q4_oracle);

    let passed = e2 <= 1e-7 && e4 <= 1e-6;
    Ok(CriterionResult {
        id: 5,
        name: "Q-curvature oracles",
        passed,
        measured: e2.max(e4),
        tolerance: 1e-6,
        detail: format!("n=2 rel {e2:.3e} (tol 1e-7), n=4 rel {e4:.3e} (tol 1e-6)"),
    })
}

/// Covariance residual of P_k under h -> e^{2 ups} h for one test function.
fn covariance_residual(
    base: &GridFixture,
    hat: &GridFixture,
    ups: &GridField,
    k: usize,
    f_hat: &GridField,
) -> Result<f64> {
    use crate::algebra::Coefficient;
    let n = base.h.dim() as f64;
    let ds = GridDs::new(&base.jet, 2 * k)?;
    let ds_hat = GridDs::new(&hat.jet, 2 * k)?;
    let w_in = ups.map(|z| ((n / 2.0 - k as f64) * z).exp());
    let w_out = ups.map(|z| ((-n / 2.0 - k as f64) * z).exp());
    let lhs = p_k_apply(&ds_hat, f_hat.clone(), k)?;
    let rhs = w_out.mul(&p_k_apply(&ds, w_in.mul(f_hat), k)?);
    Ok(lhs.sub(&rhs).norm() / rhs.norm().max(1e-30))
}

pub fn criterion_6() -> Result<CriterionResult> {
    use crate::algebra::Coefficient;
    let mut worst_inv: f64 = 0.0;
    // (1.inv) on n = 2 (k = 1) and n = 4 (k = 1, 2)
    {
        let ups = upsilon_t2(T2.h.chart());
        let mut rng = StdRng::seed_from_u64(61);
        let f_hat = band_limited_field(T2.h.chart(), &mut rng);
        worst_inv = worst_inv.max(covariance_residual(&T2, &T2_HAT, &ups, 1, &f_hat)?);
    }
    {
        let ups = upsilon_t4(T4.h.chart());
        let mut rng = StdRng::seed_from_u64(62);
        let f_hat = band_limited_field(T4.h.chart(), &mut rng);
        for k in 1..=2usize {
            worst_inv = worst_inv.max(covariance_residual(&T4, &T4_HAT, &ups, k, &f_hat)?);
        }
    }
    // (1.q): e^{n ups} Qhat = Q + P_{n/2} ups, n = 2 and 4
    let mut worst_q: f64 = 0.0;
    for (base, hat) in [(&*T2, &*T2_HAT), (&*T4, &*T4_HAT)] {
        let n = base.h.dim();
        let ups = if n == 2 {
            upsilon_t2(base.h.chart())
        } else {
            upsilon_t4(base.h.chart())
        };
        let ds = GridDs::new(&base.jet, n)?;
        let ds_hat = GridDs::new(&hat.jet, n)?;
        let one = GridField::constant(base.h.chart(), c(1.0));
        let (q, _) = q_compute(&ds, one.clone(), 1e-2, 1e-8)?;
        let (q_hat, _) = q_compute(&ds_hat, one, 1e-2, 1e-8)?;
        let p_ups = p_k_apply(&ds, ups.clone(), n / 2)?;
        let lhs = ups.map(|z| (n as f64 * z).exp()).mul(&q_hat);
        let rhs = q.add(&p_ups);
        let dev = lhs.sub(&rhs).norm();
        worst_q = worst_q.max(dev / rhs.norm().max(1.0));
    }
    let measured = worst_inv.max(worst_q);
    Ok(result(
        6,
        "transformation laws (1.inv), (1.q)",
        measured,
        1e-6,
        format!("covariance {worst_inv:.3e}, Q-law {worst_q:.3e}"),
    ))
}

pub fn criterion_7() -> Result<CriterionResult> {
    // self-adjointness over 20 random band-limited pairs, k <= 2, n = 4
    let fx = &*T4;
    let chart = fx.h.chart().clone();
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for k in 1..=2usize {
        let ds = GridDs::new(&fx.jet, 2 * k)?;
        for _ in 0..10 {
            let f = band_limited_field(&chart, &mut rng);
            let g = band_limited_field(&chart, &mut rng);
            let pf = p_k_apply(&ds, f.clone(), k)?;
            let pg = p_k_apply(&ds, g.clone(), k)?;
            let a = inner_product(&fx.h, &pf, &g);
            let b = inner_product(&fx.h, &f, &pg);
            let fn_ = inner_product(&fx.h, &f, &f).norm().sqrt();
            let gn = inner_product(&fx.h, &g, &g).norm().sqrt();
            worst = worst.max((a - b).norm() / (fn_ * gn));
        }
    }
    Ok(result(
        7,
        "self-adjointness of P_k",
        worst,
        1e-8,
        "20 random band-limited pairs, k = 1, 2".into(),
    ))
}

pub fn criterion_8() -> Result<CriterionResult> {
    let fx = &*T4;
    let mut worst: f64 = 0.0;
    for idx in 0..=2usize {
        worst = worst.max(fx.jet.residual_norms[idx]);
    }
    let trace = fx.jet.trace_residual.unwrap_or(f64::INFINITY);
    Ok(result(
        8,
        "normal-form residual property",
        worst.max(trace),
        1e-8,
        format!(
            "Ric(g)+ng coefficients {:?}, order-4 trace residual {trace:.3e}",
            &fx.jet.residual_norms[..=2]
        ),
    ))
}

pub fn criterion_9() -> Result<CriterionResult> {
    // Round S^4: v4 = 3/8, L = pi^2 = 2 c_2 int Q. Round S^2: L = -2pi = 2 c_1 int Q.
    let s4 = EinsteinModel::round_sphere(4)?;
    let jet4 = einstein_warp(&s4, 4)?;
    let vol4 = volume_expansion_warp(&jet4, &s4, 4)?;
    let backend4 = ModeDs::collar(&einstein_warp(&s4, 6)?, c(0.0), 4)?;
    let (q4, _) = q_compute(&backend4, c(1.0), 1e-2, 1e-8)?;
    let l4 = vol4.l.unwrap();
    let two_c2_int_q = 2.0 * c_k_f64(2) * (q4.re * s4.volume);
    let d1 = (vol4.v[4] - c(0.375)).norm();
    let d2 = (l4 - PI * PI).abs();
    let d3 = (l4 - two_c2_int_q).abs();

    let s2 = EinsteinModel::round_sphere(2)?;
    let jet2 = einstein_warp(&s2, 2)?;
    let vol2 = volume_expansion_warp(&jet2, &s2, 2)?;
    let backend2 = ModeDs::collar(&einstein_warp(&s2, 4)?, c(0.0), 2)?;
    let (q2, _) = q_compute(&backend2, c(1.0), 1e-2, 1e-8)?;
    let l2 = vol2.l.unwrap();
    let d4 = (l2 + 2.0 * PI).abs();
    let d5 = (l2 - 2.0 * c_k_f64(1) * (q2.re * s2.volume)).abs();

    let measured = d1.max(d2).max(d3).max(d4).max(d5);
    Ok(result(
        9,
        "Theorem 3 closed form (spheres)",
        measured,
        1e-8,
        format!("S4: v4 dev {d1:.1e}, L dev {d2:.1e}, L-2c2intQ {d3:.1e}; S2: {d4:.1e}, {d5:.1e}"),
    ))
}

pub fn criterion_10() -> Result<CriterionResult> {
    // |L - 2 c_2 int Q dv| <= 1e-6 (1 + |L|) on the generic T^4 metric.
    let fx = &*T4;
    let vol = volume_expansion(&fx.jet)?;
    let l = vol.l.unwrap();
    let ds = GridDs::new(&fx.jet, 4)?;
    let one = GridField::constant(fx.h.chart(), c(1.0));
    let (q, _) = q_compute(&ds, one, 1e-2, 1e-8)?;
    let int_q = integrate(&fx.h, &q).re;
    let dev = (l - 2.0 * c_k_f64(2) * int_q).abs() / (1.0 + l.abs());
    Ok(result(
        10,
        "Theorem 3 on the grid",
        dev,
        1e-6,
        format!("L = {l:.8e}, 2 c_2 int Q = {:.8e}", 2.0 * c_k_f64(2) * int_q),
    ))
}

pub fn criterion_11() -> Result<CriterionResult> {
    // |S(it)| = 1; residue at 1/2 equals +1/2; series vs ODE at 50 random s.
    let mut worst_unit: f64 = 0.0;
    for t in [0.5, 1.0, 2.0] {
        let sv = yukawa_s(Complex64::new(0.0, t))?;
        worst_unit = worst_unit.max((sv.norm() - 1.0).abs());
    }
    let rec = contour_residue(&|z| yukawa_s(z), c(0.5), 0.05, 32)?;
    let res_dev = (rec.residue - c(0.5)).norm();

    let prob = yukawa_problem();
    let mut rng = StdRng::seed_from_u64(11);
    let mut worst_agree: f64 = 0.0;
    let mut count = 0;
    while count < 50 {
        let re: f64 = rng.gen_range(0.15..2.35);
        let im: f64 = rng.gen_range(-1.5..1.5);
        // keep clear of the exceptional set (half-integers on the real axis)
        if (2.0 * re - (2.0 * re).round()).abs() < 0.1 {
            continue;
        }
        let s = Complex64::new(re, im);
        let ode_val = scattering_value(&prob, s)?.s_value;
        let series_val = yukawa_s(s)?;
        worst_agree = worst_agree.max((ode_val - series_val).norm() / series_val.norm().max(1.0));
        count += 1;
    }
    let passed = worst_unit <= 1e-10 && res_dev <= 1e-8 && worst_agree <= 1e-10;
    Ok(CriterionResult {
        id: 11,
        name: "half-line model",
        passed,
        measured: worst_unit.max(worst_agree),
        tolerance: 1e-10,
        detail: format!(
            "unitarity {worst_unit:.3e}, residue dev {res_dev:.3e} (tol 1e-8), series-vs-ode {worst_agree:.3e}"
        ),
    })
}

pub fn criterion_12() -> Result<CriterionResult> {
    // pairing and energy identities per mode on flat and warped collars.
    let n = 2usize;
    let a_expr = crate::expr::parse_expression("1+0.05*x^2").unwrap();
    let models = [
        CollarModel::flat(n, 1.0)?,
        CollarModel::from_warp_expr(n, &a_expr, 1.0, 8)?,
    ];
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for model in &models {
        for xi in [1i64, 2] {
            let mode = Mode::Fourier(vec![xi, 0]);
            let prob = model.capped_problem(&mode);
            let pr = pairing_residual(&prob, Complex64::new(n as f64 / 2.0, 0.7))?;
            worst = worst.max(pr);
            for s_re in [1.7, 2.3] {
                let rep = energy_identity(&prob, c(s_re))?;
                worst = worst
                    .max(rep.energy_residual)
                    .max(rep.symmetry_residual);
                detail = format!(
                    "last: xi={xi} s={s_re}: energy {:.2e}, sym {:.2e}",
                    rep.energy_residual, rep.symmetry_residual
                );
            }
        }
    }
    Ok(result(12, "pairing and energy identities", worst, 1e-6, detail))
}

pub fn criterion_13() -> Result<CriterionResult> {
    // pf-energy limit on the complete Einstein S^4: -> -nL/2 = -2 pi^2,
    // linearly in (n - s).
    let s4 = EinsteinModel::round_sphere(4)?;
    let model = CompleteEinsteinModel::new(&s4)?;
    let jet = einstein_warp(&s4, 4)?;
    let l = volume_expansion_warp(&jet, &s4, 4)?.l.unwrap();
    let n = 4.0;
    let mut eps = Vec::new();
    let mut energies = Vec::new();
    for m in 0..=5 {
        let e_m = 0.1 * 0.5f64.powi(m);
        let s = c(n - e_m);
        let (e_rad, _s0) = pf_energy_complete(&model, s)?;
        eps.push(e_m);
        energies.push(e_rad * s4.volume);
    }
    // linear convergence: successive differences halve
    let mut ratio_dev: f64 = 0.0;
    for w in energies.windows(3) {
        let r = (w[0] - w[1]) / (w[1] - w[2]);
        ratio_dev = ratio_dev.max((r - 2.0).abs());
    }
    // polynomial extrapolation in (n - s) to 0 (Neville over the samples)
    let mut p = energies.clone();
    let m = p.len();
    for level in 1..m {
        for i in 0..m - level {
            let (xi, xj) = (eps[i], eps[i + level]);
            p[i] = ((0.0 - xi) * p[i + 1] - (0.0 - xj) * p[i]) / (xj - xi);
        }
    }
    let extrap = p[0];
    let target = -n * l / 2.0;
    let dev = (extrap - target).abs();
    let passed = dev <= 1e-4 && ratio_dev <= 0.4;
    Ok(CriterionResult {
        id: 13,
        name: "renormalized-energy limit",
        passed,
        measured: dev,
        tolerance: 1e-4,
        detail: format!(
            "extrapolated {extrap:.8e} vs -nL/2 = {target:.8e}; convergence-ratio dev {ratio_dev:.2}"
        ),
    })
}

pub fn criterion_14() -> Result<CriterionResult> {
    let n = 2usize;
    // even warp: residues at s = n/2 + l/2, l odd, vanish
    let even_expr = crate::expr::parse_expression("1+0.1*x^2").unwrap();
    let even = CollarModel::from_warp_expr(n, &even_expr, 1.0, 8)?;
    let mode = Mode::Fourier(vec![1, 0]);
    let mut worst_even: f64 = 0.0;
    for l in [1usize, 3] {
        let s0 = c(n as f64 / 2.0 + l as f64 / 2.0);
        let rec = residue_extract(&even, &mode, s0, 0.05, 32, false)?;
        worst_even = worst_even.max(rec.residue.norm());
    }
    // odd warp a = 1 + b x: residue at n/2 + 1/2 equals -n(n-1)b/4
    let b = 0.1;
    let odd_expr = crate::expr::parse_expression("1+0.1*x").unwrap();
    let odd = CollarModel::from_warp_expr(n, &odd_expr, 1.0, 8)?;
    let rec = residue_extract(&odd, &mode, c(n as f64 / 2.0 + 0.5), 0.05, 32, false)?;
    let want = -(n as f64) * (n as f64 - 1.0) * b / 4.0;
    let odd_dev = (rec.residue - c(want)).norm();
    let passed = worst_even <= 1e-8 && odd_dev <= 1e-6;
    Ok(CriterionResult {
        id: 14,
        name: "parity of residues",
        passed,
        measured: worst_even.max(odd_dev),
        tolerance: 1e-6,
        detail: format!("even-warp sup {worst_even:.3e} (tol 1e-8), odd-warp dev {odd_dev:.3e}"),
    })
}

/// Criteria runnable in-process (15, determinism of the CLI, is exercised by
/// the acceptance test target against the built binary).
pub const IN_PROCESS_CRITERIA: [usize; 14] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14];

pub fn run_criterion(id: usize) -> CriterionResult {
    let out = match id {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(),
        10 => criterion_10(),
        11 => criterion_11(),
        12 => criterion_12(),
        13 => criterion_13(),
        14 => criterion_14(),
        _ => {
            return CriterionResult {
                id,
                name: "unknown",
                passed: false,
                measured: f64::INFINITY,
                tolerance: 0.0,
                detail: "no such criterion".into(),
            }
        }
    };
    match out {
        Ok(r) => r,
        Err(e) => CriterionResult {
            id,
            name: "errored",
            passed: false,
            measured: f64::INFINITY,
            tolerance: 0.0,
            detail: format!("{e}"),
        },
    }
}

pub fn run_suite(ids: &[usize]) -> Vec<CriterionResult> {
    ids.iter().map(|&id| run_criterion(id)).collect()
}
