//! Per-mode scattering on separable models: the half-line Yukawa problem and
//! warped collars `x^{-2}(a(x)^2 h + dx^2)` with an inner Dirichlet cap (or,
//! for the positively curved Einstein warp, the complete smooth interior).
//!
//! For each mode the generalized eigenfunction is integrated in `t = log x`
//! and matched against the Frobenius basis produced by the `D_s` recursion;
//! `S(s)` is the coefficient ratio. Residues come from contour integration,
//! and the pairing/energy identities are checked with analytic finite parts.

pub mod gamma;
pub mod ode;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fg::WarpJet;
use crate::gjms::{formal_smooth_solve, ModeDs};
use crate::series::{sqrt_unit_leading, PowerLogSeries};

type CSeries = PowerLogSeries<Complex64>;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Boundary mode label: a flat-torus Fourier mode or a model eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    Fourier(Vec<i64>),
    Eigen(f64),
}

impl Mode {
    pub fn mu(&self) -> f64 {
        match self {
            Mode::Fourier(xi) => xi.iter().map(|&k| (k * k) as f64).sum(),
            Mode::Eigen(mu) => *mu,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Mode::Fourier(xi) => {
                let parts: Vec<String> = xi.iter().map(|k| k.to_string()).collect();
                format!("xi_{}", parts.join("_"))
            }
            Mode::Eigen(mu) => format!("mu_{mu}"),
        }
    }
}

/// The radial potential of the separated problem.
#[derive(Debug, Clone, Copy)]
enum Potential {
    /// `V = mu x^2 / phi(x)` (collar mode with eigenvalue mu).
    Harmonic(f64),
    /// `V = x` (the half-line model).
    Linear,
}

/// A separable radial scattering problem on `(0, x_inner]`.
pub struct RadialProblem {
    pub n: usize,
    phi: CSeries,
    potential: Potential,
    /// Dirichlet cap location, or the smooth-center coordinate for complete
    /// interiors.
    inner_x: f64,
    inner: InnerCondition,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum InnerCondition {
    Dirichlet,
    /// Regular solution at a smooth center where the warp closes up
    /// (`integration starts just outside, with the s-wave expansion`).
    RegularCenter,
}

/// Warped collar `x^{-2}(a(x)^2 h + dx^2)` over an n-dimensional boundary.
pub struct CollarModel {
    pub n: usize,
    pub jet: WarpJet,
    pub cap: f64,
}

impl CollarModel {
    /// Warp given as `phi = a(x)^2`, a polynomial series with `phi(0) = 1`.
    pub fn from_phi(n: usize, phi: CSeries, cap: f64) -> Result<Self> {
        if !(cap > 0.0) {
            return Err(Error::InvalidParameter("cap must be positive".into()));
        }
        let jet = WarpJet::new(n, phi.clone(), true)?;
        // positivity of the warp on (0, cap]
        for k in 1..=64 {
            let x = cap * k as f64 / 64.0;
            if eval_poly(&phi, x).re <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "warp not positive at x = {x}"
                )));
            }
        }
        Ok(CollarModel { n, jet, cap })
    }

    pub fn flat(n: usize, cap: f64) -> Result<Self> {
        Self::from_phi(n, PowerLogSeries::constant(c(1.0), 8), cap)
    }

    /// `a(x)` as an expression in x; the model is its series truncation.
    pub fn from_warp_expr(n: usize, a: &crate::expr::Expr, cap: f64, order: usize) -> Result<Self> {
        if !a.is_x_only() {
            return Err(Error::InvalidParameter("warp must depend only on x".into()));
        }
        let a_series = a.eval_series(order)?;
        let phi = a_series.mul(&a_series)?;
        Self::from_phi(n, phi, cap)
    }

    /// Capped Einstein warp `(1 - lambda x^2/4)^2`.
    pub fn einstein_capped(model: &crate::einstein::EinsteinModel, cap: f64) -> Result<Self> {
        let jet = crate::fg::einstein_warp(model, 8)?;
        Self::from_phi(model.n, jet.phi.clone(), cap)
    }

    fn problem(&self, mode: &Mode, inner: InnerCondition, inner_x: f64) -> RadialProblem {
        RadialProblem {
            n: self.n,
            phi: self.jet.phi.clone(),
            potential: Potential::Harmonic(mode.mu()),
            inner_x,
            inner,
        }
    }

    pub fn capped_problem(&self, mode: &Mode) -> RadialProblem {
        self.problem(mode, InnerCondition::Dirichlet, self.cap)
    }
}

/// The complete positively curved Einstein warp: `phi = (1 - lambda x^2/4)^2`
/// closes smoothly at `x = 2/sqrt(lambda)`; solutions are selected by
/// regularity at the center instead of a Dirichlet cap. Used for the
/// `S(n)1`/renormalized-energy checks, which unlike residues are sensitive to
/// the interior.
pub struct CompleteEinsteinModel {
    pub n: usize,
    pub lambda: f64,
    collar: CollarModel,
    center_x: f64,
}

impl CompleteEinsteinModel {
    pub fn new(model: &crate::einstein::EinsteinModel) -> Result<Self> {
        if model.lambda <= 0.0 {
            return Err(Error::InvalidParameter(
                "complete interior needs lambda > 0".into(),
            ));
        }
        let center_x = 2.0 / model.lambda.sqrt();
        let jet = crate::fg::einstein_warp(model, 8)?;
        // cap value irrelevant; positivity is checked on (0, cap] only.
        let collar = CollarModel::from_phi(model.n, jet.phi.clone(), 1.0)?;
        Ok(CompleteEinsteinModel {
            n: model.n,
            lambda: model.lambda,
            collar,
            center_x,
        })
    }

    pub fn problem(&self, mode: &Mode) -> RadialProblem {
        // start integration just outside the center
        let delta = 1e-3;
        self.collar.problem(
            mode,
            InnerCondition::RegularCenter,
            self.center_x * (1.0 - delta),
        )
    }
}

fn eval_poly(series: &CSeries, x: f64) -> Complex64 {
    let mut acc = c(0.0);
    for &coef in series.plain_coeffs().iter().rev() {
        acc = acc * x + coef;
    }
    acc
}

fn eval_poly_deriv(series: &CSeries, x: f64) -> Complex64 {
    let n = series.order();
    let mut acc = c(0.0);
    for j in (1..=n).rev() {
        acc = acc * x + *series.plain_coeffs().get(j).unwrap() * j as f64;
    }
    acc
}

impl RadialProblem {
    fn v_at(&self, x: f64) -> Complex64 {
        match self.potential {
            Potential::Harmonic(mu) => c(mu * x * x) / eval_poly(&self.phi, x),
            Potential::Linear => c(x),
        }
    }

    /// `n * x a'(x)/a(x) = n x phi'/(2 phi)`.
    fn drift_at(&self, x: f64) -> Complex64 {
        let n = self.n as f64;
        if self.phi.order() == 0 {
            return c(0.0);
        }
        c(n) * c(x) * eval_poly_deriv(&self.phi, x) / (2.0 * eval_poly(&self.phi, x))
    }

    fn s_n_s(&self, s: Complex64) -> Complex64 {
        s * (c(self.n as f64) - s)
    }

    /// Frobenius basis: the `x^{n-s}(1 + ...)` and `x^s(1 + ...)` solutions,
    /// with coefficients from the `D_s` recursion. Errors at exceptional s.
    pub fn frobenius_basis(&self, s: Complex64, j_max: usize) -> Result<(CSeries, CSeries)> {
        let (tau_backend, pot_is_linear) = match self.potential {
            Potential::Harmonic(_) => (false, false),
            Potential::Linear => (false, true),
        };
        let _ = tau_backend;
        let n_c = c(self.n as f64);
        let build = |sv: Complex64| -> Result<CSeries> {
            let sol = if pot_is_linear {
                let backend = ModeDs::yukawa(j_max);
                formal_smooth_solve(&backend, c(1.0), sv, j_max)?
            } else {
                let mu = match self.potential {
                    Potential::Harmonic(m) => c(m),
                    Potential::Linear => unreachable!(),
                };
                let jet = WarpJet::new(self.n, self.phi.clone(), true)?;
                let backend = ModeDs::collar(&jet, mu, j_max)?;
                formal_smooth_solve(&backend, c(1.0), sv, j_max)?
            };
            Ok(sol.series.shift_exponent(n_c - sv))
        };
        let f_branch = build(s)?; // exponent n - s
        let g_branch = build(n_c - s)?; // exponent s
        Ok((f_branch, g_branch))
    }

    /// Numeric residual of a truncated basis solution under the radial
    /// operator at `x`, relative to its own scale.
    fn basis_residual(&self, u: &CSeries, s: Complex64, x: f64) -> f64 {
        let up = u.diff();
        let upp = up.diff();
        let uv = u.eval(x);
        let upv = up.eval(x);
        let uppv = upp.eval(x);
        let lx = -c(x * x) * uppv + c((self.n as f64 - 1.0) * x) * upv
            - self.drift_at(x) * c(x) * upv
            + (self.v_at(x) - self.s_n_s(s)) * uv;
        lx.norm() / uv.norm().max(1e-30)
    }

    fn ode_rhs(&self, s: Complex64) -> impl Fn(f64, &[Complex64; 2]) -> [Complex64; 2] + '_ {
        let sns = self.s_n_s(s);
        let n = self.n as f64;
        move |t: f64, y: &[Complex64; 2]| {
            let x = t.exp();
            let u = y[0];
            let v = y[1];
            let vp = (c(n) - self.drift_at(x)) * v + (self.v_at(x) - sns) * u;
            [v, vp]
        }
    }

    fn inner_state(&self, s: Complex64) -> [Complex64; 2] {
        match self.inner {
            InnerCondition::Dirichlet => [c(0.0), c(1.0)],
            InnerCondition::RegularCenter => {
                // s-wave expansion at a smooth center: u = 1 + a rho^2 + O(rho^4),
                // a = -s(n-s)/(2(n+1)), rho = geodesic distance, d rho/dt = -1.
                let x0 = self.inner_x;
                let x_center = x0 / (1.0 - 1e-3);
                let rho = (x_center / x0).ln();
                let a = -self.s_n_s(s) / (2.0 * (self.n as f64 + 1.0));
                [c(1.0) + a * rho * rho, -2.0 * a * rho]
            }
        }
    }
}

/// Scattering data of one mode at one s.
#[derive(Debug, Clone)]
pub struct Scattered {
    pub s_value: Complex64,
    /// Raw matching coefficients of the inner solution against
    /// `x^{n-s}(1+..)` and `x^s(1+..)`.
    pub a_raw: Complex64,
    pub b_raw: Complex64,
    pub x_match: f64,
    pub series_order: usize,
    pub cond: f64,
}

const MATCH_RTOL: f64 = 1e-12;
const MATCH_ATOL: f64 = 1e-14;

/// Integrate the mode ODE inward and match against the Frobenius basis.
pub fn scattering_value(prob: &RadialProblem, s: Complex64) -> Result<Scattered> {
    let mut j_max = 24usize;
    let mut x_match = (0.4 * prob.inner_x).min(0.4);
    loop {
        let (u1, u2) = prob.frobenius_basis(s, j_max)?;
        let r1 = prob.basis_residual(&u1, s, x_match);
        let r2 = prob.basis_residual(&u2, s, x_match);
        if r1.max(r2) > 1e-12 {
            if j_max < 60 {
                j_max += 12;
                continue;
            }
            if x_match > 2e-3 {
                x_match *= 0.5;
                continue;
            }
            return Err(Error::Tolerance(format!(
                "Frobenius tail not below target: {:.3e}",
                r1.max(r2)
            )));
        }
        // inner solve to the matching radius
        let y = ode::integrate(
            &prob.ode_rhs(s),
            prob.inner_x.ln(),
            x_match.ln(),
            prob.inner_state(s),
            MATCH_RTOL,
            MATCH_ATOL,
        )?;
        // basis values and t-derivatives at x_match
        let t_deriv = |w: &CSeries| w.diff().shift_exponent(c(1.0));
        let m11 = u1.eval(x_match);
        let m12 = u2.eval(x_match);
        let m21 = t_deriv(&u1).eval(x_match);
        let m22 = t_deriv(&u2).eval(x_match);
        let det = m11 * m22 - m12 * m21;
        let n1 = (m11.norm().powi(2) + m21.norm().powi(2)).sqrt();
        let n2 = (m12.norm().powi(2) + m22.norm().powi(2)).sqrt();
        let cond = n1 * n2 / det.norm().max(1e-300);
        if cond > 1e10 {
            return Err(Error::EigenvalueCollision { cond });
        }
        let a = (y[0] * m22 - y[1] * m12) / det;
        let b = (m11 * y[1] - m21 * y[0]) / det;
        if a.norm() < 1e-280 {
            return Err(Error::Tolerance("vanishing incoming coefficient".into()));
        }
        return Ok(Scattered {
            s_value: b / a,
            a_raw: a,
            b_raw: b,
            x_match,
            series_order: j_max,
            cond,
        });
    }
}

// ---------------------------------------------------------------------------
// Yukawa model
// ---------------------------------------------------------------------------

/// `b_j^{+-}(s) = [j! Gamma(+-2s + j + 1)]^{-1}`.
pub fn yukawa_b(sign: f64, s: Complex64, j: usize) -> Complex64 {
    let mut fact = 1.0f64;
    for k in 1..=j {
        fact *= k as f64;
    }
    gamma::recip_gamma(2.0 * sign * s + j as f64 + 1.0) / fact
}

/// `G_{+-}(x, s) = x^{+-s} sum_j b_j^{+-} x^j`, truncated when terms fall
/// below 1e-16 relative.
pub fn yukawa_series(sign: f64, s: Complex64, x: f64) -> Complex64 {
    let mut sum = c(0.0);
    let mut scale: f64 = 0.0;
    for j in 0..200 {
        let term = yukawa_b(sign, s, j) * c(x.powi(j as i32));
        sum += term;
        scale = scale.max(sum.norm());
        if j > 3 && term.norm() < 1e-16 * scale.max(1e-300) {
            break;
        }
    }
    (sign * s * x.ln()).exp() * sum
}

/// Closed-form scattering value of the half-line model:
/// `S(s) = -G_-(1,s) b_0^+(s) / (G_+(1,s) b_0^-(s))`.
pub fn yukawa_s(s: Complex64) -> Result<Complex64> {
    let two_s = 2.0 * s;
    if (two_s.re - two_s.re.round()).abs() < 2e-6 && two_s.im.abs() < 2e-6 {
        return Err(Error::NearHalfInteger(format!("{s}")));
    }
    let num = yukawa_series(-1.0, s, 1.0) * yukawa_b(1.0, s, 0);
    let den = yukawa_series(1.0, s, 1.0) * yukawa_b(-1.0, s, 0);
    Ok(-num / den)
}

/// The half-line model as a radial problem (n = 0, V = x, Dirichlet at x=1).
pub fn yukawa_problem() -> RadialProblem {
    RadialProblem {
        n: 0,
        phi: PowerLogSeries::constant(c(1.0), 8),
        potential: Potential::Linear,
        inner_x: 1.0,
        inner: InnerCondition::Dirichlet,
    }
}

// ---------------------------------------------------------------------------
// Residues
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ResidueRecord {
    pub s0: Complex64,
    pub residue: Complex64,
    pub radius: f64,
    pub nodes: usize,
    pub stable: Option<bool>,
}

/// Contour residue of a scalar function by the trapezoidal rule on a circle,
/// with node doubling until two estimates agree.
pub fn contour_residue(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    s0: Complex64,
    radius: f64,
    start_nodes: usize,
) -> Result<ResidueRecord> {
    let mut nodes = start_nodes.max(8);
    let mut prev: Option<Complex64> = None;
    while nodes <= 1024 {
        let mut acc = c(0.0);
        for k in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / nodes as f64;
            let e = Complex64::new(0.0, theta).exp();
            let z = s0 + radius * e;
            acc += f(z)? * e;
        }
        let estimate = acc * radius / nodes as f64;
        if let Some(p) = prev {
            let tol = 1e-12 + 1e-8 * estimate.norm();
            if (estimate - p).norm() <= tol {
                return Ok(ResidueRecord {
                    s0,
                    residue: estimate,
                    radius,
                    nodes,
                    stable: None,
                });
            }
        }
        prev = Some(estimate);
        nodes *= 2;
    }
    Err(Error::ContourNotConverged(format!(
        "at s0 = {s0}, last estimate {:?}",
        prev
    )))
}

/// Residue of the per-mode scattering value of a capped collar, with a cap
/// stability probe (residues are boundary-local; instability flags an
/// eigenvalue-pole contamination).
pub fn residue_extract(
    model: &CollarModel,
    mode: &Mode,
    s0: Complex64,
    radius: f64,
    start_nodes: usize,
    probe_cap_stability: bool,
) -> Result<ResidueRecord> {
    let prob = model.capped_problem(mode);
    let f = |z: Complex64| scattering_value(&prob, z).map(|sc| sc.s_value);
    let mut rec = contour_residue(&f, s0, radius, start_nodes)?;
    if probe_cap_stability {
        let shifted = CollarModel::from_phi(model.n, model.jet.phi.clone(), model.cap * 0.9)?;
        let prob2 = shifted.capped_problem(mode);
        let f2 = |z: Complex64| scattering_value(&prob2, z).map(|sc| sc.s_value);
        let rec2 = contour_residue(&f2, s0, radius, start_nodes)?;
        let dev = (rec.residue - rec2.residue).norm();
        rec.stable = Some(dev <= 1e-6 * rec.residue.norm().max(1e-8));
    }
    Ok(rec)
}

// ---------------------------------------------------------------------------
// Pairing / energy identities
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct EnergyReport {
    /// pf of the radial energy integral (per unit mode normalisation).
    pub pf_energy: f64,
    /// `-n F_1 G_2` and `-n G_1 F_2` from the two independent matchings.
    pub rhs_fg: f64,
    pub rhs_gf: f64,
    pub energy_residual: f64,
    pub symmetry_residual: f64,
}

/// Pairing-formula residual on the critical line: for a capped solution the
/// identity reduces to `|f|^2 = |g|^2` per mode (unitarity).
pub fn pairing_residual(prob: &RadialProblem, s: Complex64) -> Result<f64> {
    let sc = scattering_value(prob, s)?;
    let fa = sc.a_raw.norm_sqr();
    let gb = sc.b_raw.norm_sqr();
    Ok((fa - gb).abs() / (fa + gb))
}

/// Finite part of `int_0^{x_inner} [x^2 u1' u2' + (V - s(n-s)) u1 u2] w x^{-n-1} dx`
/// for two normalised solutions, split into an analytic series part on
/// `[0, x_match]` and numerical quadrature beyond.
pub fn energy_identity(prob: &RadialProblem, s: Complex64) -> Result<EnergyReport> {
    if s.im.abs() > 1e-12 || s.re <= prob.n as f64 / 2.0 {
        return Err(Error::InvalidParameter(
            "energy identity needs real s > n/2".into(),
        ));
    }
    let two_s_n = 2.0 * s.re - prob.n as f64;
    if (two_s_n - two_s_n.round()).abs() < 1e-6 && two_s_n.round() >= 1.0 {
        return Err(Error::ExceptionalS {
            s: format!("{s}"),
            j: two_s_n.round() as usize,
            dist: (two_s_n - two_s_n.round()).abs(),
        });
    }
    // Two independent matchings of the same inner problem.
    let sc1 = scattering_value(prob, s)?;
    let x_alt = 0.66 * sc1.x_match;
    let sc2 = scattering_alt_match(prob, s, x_alt, sc1.series_order + 12)?;

    let s1 = sc1.s_value;
    let s2 = sc2.s_value;
    let x_m = sc1.x_match;

    // Series part on [0, x_m] with divergent powers handled analytically.
    let j_max = (sc1.series_order + 12).min(72);
    let (u1, u2) = prob.frobenius_basis(s, j_max)?;
    let e_aa = pf_branch_energy(prob, s, &u1, &u1, x_m)?;
    let e_ab = pf_branch_energy(prob, s, &u1, &u2, x_m)?;
    let e_bb = pf_branch_energy(prob, s, &u2, &u2, x_m)?;
    let e_series = e_aa + (s1 + s2) * e_ab + s1 * s2 * e_bb;

    // Numeric part on [x_m, x_inner] along the raw trajectory.
    let e_num_raw = energy_quadrature(prob, s, x_m)?;
    let e_num = e_num_raw / (sc1.a_raw * sc2.a_raw);

    let e_total = (e_series + e_num).re;
    let n = prob.n as f64;
    let rhs_fg = -(n * s2).re;
    let rhs_gf = -(n * s1).re;
    let scale = e_total.abs().max(1.0);
    Ok(EnergyReport {
        pf_energy: e_total,
        rhs_fg,
        rhs_gf,
        energy_residual: (e_total - rhs_fg).abs().max((e_total - rhs_gf).abs()) / scale,
        symmetry_residual: (rhs_fg - rhs_gf).abs() / scale,
    })
}

/// Second matching at a prescribed radius/order (for identity checks).
fn scattering_alt_match(
    prob: &RadialProblem,
    s: Complex64,
    x_match: f64,
    j_max: usize,
) -> Result<Scattered> {
    let (u1, u2) = prob.frobenius_basis(s, j_max)?;
    let y = ode::integrate(
        &prob.ode_rhs(s),
        prob.inner_x.ln(),
        x_match.ln(),
        prob.inner_state(s),
        MATCH_RTOL,
        MATCH_ATOL,
    )?;
    let t_deriv = |w: &CSeries| w.diff().shift_exponent(c(1.0));
    let m11 = u1.eval(x_match);
    let m12 = u2.eval(x_match);
    let m21 = t_deriv(&u1).eval(x_match);
    let m22 = t_deriv(&u2).eval(x_match);
    let det = m11 * m22 - m12 * m21;
    let a = (y[0] * m22 - y[1] * m12) / det;
    let b = (m11 * y[1] - m21 * y[0]) / det;
    Ok(Scattered {
        s_value: b / a,
        a_raw: a,
        b_raw: b,
        x_match,
        series_order: j_max,
        cond: 0.0,
    })
}

/// pf of the energy integrand over `[0, x_m]` for one pair of basis branches:
/// every power integrates to `c x_m^{p+1}/(p+1)` with the divergent lower
/// limit discarded; an exact `x^{-1}` power must carry a vanishing
/// coefficient or the exponents are wrong.
fn pf_branch_energy(
    prob: &RadialProblem,
    s: Complex64,
    wx: &CSeries,
    wy: &CSeries,
    x_m: f64,
) -> Result<Complex64> {
    let n = prob.n as f64;
    let order = wx.order().min(wy.order());
    let phi = prob.phi_at_order(order)?;
    let phi_inv = phi.inverse()?;
    // weight w = phi^{n/2}
    let w = phi_pow_half(&phi, prob.n)?;
    // mass coefficient: V - s(n-s), with V = mu x^2/phi or x
    let mass: CSeries = match prob.potential {
        Potential::Harmonic(mu) => phi_inv
            .shift_exponent(c(2.0))
            .scale(c(mu))
            .sub(&PowerLogSeries::constant(prob.s_n_s(s), order))?,
        Potential::Linear => {
            let mut xc = vec![c(0.0); order + 1];
            if order >= 1 {
                xc[1] = c(1.0);
            }
            PowerLogSeries::from_plain(c(0.0), xc)
                .sub(&PowerLogSeries::constant(prob.s_n_s(s), order))?
        }
    };
    let deriv = wx
        .diff()
        .mul(&wy.diff())?
        .shift_exponent(c(2.0));
    let integrand = deriv
        .add(&mass.mul(&wx.mul(wy)?)?)?
        .mul(&w)?
        .shift_exponent(c(-(n + 1.0)));
    // term-wise finite-part integration
    let mut acc = c(0.0);
    let scale = integrand.max_coeff_norm().max(1e-300);
    for j in 0..=integrand.order() {
        let coef = *integrand.plain_coeff(j)?;
        let p1 = integrand.alpha() + j as f64 + 1.0;
        if p1.norm() < 1e-9 {
            if coef.norm() > 1e-9 * scale {
                return Err(Error::NonIntegrableRemainder(coef.norm()));
            }
            continue;
        }
        acc += coef * (p1 * x_m.ln()).exp() / p1;
    }
    Ok(acc)
}

impl RadialProblem {
    fn phi_at_order(&self, order: usize) -> Result<CSeries> {
        let mut cvec = vec![c(0.0); order + 1];
        for j in 0..=order.min(self.phi.order()) {
            cvec[j] = *self.phi.plain_coeff(j)?;
        }
        Ok(PowerLogSeries::from_plain(c(0.0), cvec))
    }
}

fn phi_pow_half(phi: &CSeries, n: usize) -> Result<CSeries> {
    let order = phi.order();
    if n % 2 == 0 {
        let mut acc = PowerLogSeries::constant(c(1.0), order);
        for _ in 0..n / 2 {
            acc = acc.mul(phi)?;
        }
        Ok(acc)
    } else {
        let root = sqrt_unit_leading(phi)?;
        let mut acc = PowerLogSeries::constant(c(1.0), order);
        for _ in 0..n {
            acc = acc.mul(&root)?;
        }
        Ok(acc)
    }
}

/// Quadrature of the raw-trajectory energy integrand on `[x_m, x_inner]`,
/// carried as a third component of the radial ODE.
fn energy_quadrature(prob: &RadialProblem, s: Complex64, x_m: f64) -> Result<Complex64> {
    let sns = prob.s_n_s(s);
    let n = prob.n as f64;
    let rhs = |t: f64, y: &[Complex64; 3]| {
        let x = t.exp();
        let u = y[0];
        let v = y[1];
        let vp = (c(n) - prob.drift_at(x)) * v + (prob.v_at(x) - sns) * u;
        let w = eval_poly(&prob.phi, x).powf(n / 2.0);
        let integrand = (v * v + (prob.v_at(x) - sns) * u * u) * w * (-n * t).exp();
        [v, vp, integrand]
    };
    let mut y0 = [c(0.0); 3];
    let inner = prob.inner_state(s);
    y0[0] = inner[0];
    y0[1] = inner[1];
    let y = ode::integrate(&rhs, prob.inner_x.ln(), x_m.ln(), y0, MATCH_RTOL, MATCH_ATOL)?;
    // integrated from inner down to x_m: flip sign for int_{x_m}^{inner}
    Ok(-y[2])
}

/// pf-energy of the normalised solution `u_s` on a complete Einstein model
/// (zero mode), together with the scattering value: the renormalized-volume
/// limit check. Returns `(pf_energy_radial, S_0(s))`.
pub fn pf_energy_complete(
    model: &CompleteEinsteinModel,
    s: Complex64,
) -> Result<(f64, Complex64)> {
    let mode = Mode::Eigen(0.0);
    let prob = model.problem(&mode);
    let sc = scattering_value(&prob, s)?;
    let x_m = sc.x_match;
    let j_max = (sc.series_order + 12).min(72);
    let (u1, u2) = prob.frobenius_basis(s, j_max)?;
    let s0 = sc.s_value;
    let e_aa = pf_branch_energy(&prob, s, &u1, &u1, x_m)?;
    let e_ab = pf_branch_energy(&prob, s, &u1, &u2, x_m)?;
    let e_bb = pf_branch_energy(&prob, s, &u2, &u2, x_m)?;
    let e_series = e_aa + 2.0 * s0 * e_ab + s0 * s0 * e_bb;
    let e_num = energy_quadrature(&prob, s, x_m)? / (sc.a_raw * sc.a_raw);
    Ok(((e_series + e_num).re, s0))
}

/// One row of an s-sweep export.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub mode: String,
    pub s: Complex64,
    pub value: Complex64,
}

pub fn sweep(
    model: &CollarModel,
    mode: &Mode,
    s_values: &[Complex64],
) -> Result<Vec<SweepRow>> {
    let prob = model.capped_problem(mode);
    let mut out = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let sc = scattering_value(&prob, s)?;
        out.push(SweepRow {
            mode: mode.label(),
            s,
            value: sc.s_value,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
