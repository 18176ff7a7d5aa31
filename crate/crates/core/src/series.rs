//! Truncated power series in the boundary variable `x`, with an `x^alpha`
//! prefactor and optional `log x` blocks, over a generic coefficient algebra.
//!
//! A series is `x^alpha * sum_j (plain[j] + log[j] * log x) * x^j`, truncated
//! at `j = order`. At most one `log x` power is ever carried: the expansions
//! this library manipulates contain a single log, and an operation that would
//! produce `log^2` is rejected rather than silently truncated.

use num_complex::Complex64;

use crate::algebra::{Coefficient, ZERO_TOL};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PowerLogSeries<A> {
    alpha: Complex64,
    plain: Vec<A>,
    log: Vec<A>,
}

fn int_offset(d: Complex64) -> Option<i64> {
    let m = d.re.round();
    if (d - Complex64::new(m, 0.0)).norm() < 1e-9 {
        Some(m as i64)
    } else {
        None
    }
}

impl<A: Coefficient> PowerLogSeries<A> {
    /// Series `x^alpha * (c_0 + c_1 x + ...)` with no log blocks.
    pub fn from_plain(alpha: Complex64, plain: Vec<A>) -> Self {
        assert!(!plain.is_empty(), "series needs at least one coefficient");
        let log = plain.iter().map(|c| c.zero_like()).collect();
        PowerLogSeries { alpha, plain, log }
    }

    pub fn from_parts(alpha: Complex64, plain: Vec<A>, log: Vec<A>) -> Self {
        assert!(!plain.is_empty() && plain.len() == log.len());
        PowerLogSeries { alpha, plain, log }
    }

    /// `x^alpha * c`, truncated at `order`.
    pub fn monomial(alpha: Complex64, c: A, order: usize) -> Self {
        let mut plain = vec![c.zero_like(); order + 1];
        plain[0] = c;
        Self::from_plain(alpha, plain)
    }

    /// The constant series `c + 0*x + ...` (alpha = 0).
    pub fn constant(c: A, order: usize) -> Self {
        Self::monomial(Complex64::new(0.0, 0.0), c, order)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.plain.len() - 1
    }

    pub fn plain_coeff(&self, j: usize) -> Result<&A> {
        self.plain.get(j).ok_or(Error::OrderExceeded {
            index: j,
            order: self.order(),
        })
    }

    pub fn log_coeff(&self, j: usize) -> Result<&A> {
        self.log.get(j).ok_or(Error::OrderExceeded {
            index: j,
            order: self.order(),
        })
    }

    pub fn plain_coeffs(&self) -> &[A] {
        &self.plain
    }

    pub fn log_coeffs(&self) -> &[A] {
        &self.log
    }

    pub fn set_plain_coeff(&mut self, j: usize, c: A) -> Result<()> {
        let n = self.order();
        match self.plain.get_mut(j) {
            Some(slot) => {
                *slot = c;
                Ok(())
            }
            None => Err(Error::OrderExceeded { index: j, order: n }),
        }
    }

    pub fn set_log_coeff(&mut self, j: usize, c: A) -> Result<()> {
        let n = self.order();
        match self.log.get_mut(j) {
            Some(slot) => {
                *slot = c;
                Ok(())
            }
            None => Err(Error::OrderExceeded { index: j, order: n }),
        }
    }

    /// Coefficient of the exact power `x^p` in the plain block, if the offset
    /// `p - alpha` is a non-negative integer within the truncation order.
    pub fn plain_at_power(&self, p: Complex64) -> Result<&A> {
        match int_offset(p - self.alpha) {
            Some(m) if m >= 0 => self.plain_coeff(m as usize),
            _ => Err(Error::ExponentMismatch(format!(
                "power {p} not of the form alpha + j for alpha = {}",
                self.alpha
            ))),
        }
    }

    pub fn is_log_free(&self) -> bool {
        self.log.iter().all(|c| c.norm() == 0.0)
    }

    /// Largest coefficient magnitude over both blocks.
    pub fn max_coeff_norm(&self) -> f64 {
        self.plain
            .iter()
            .chain(self.log.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Zero test at the shared tolerance, normalised by the largest
    /// coefficient magnitude in the series.
    pub fn coeff_is_zero(&self, c: &A) -> bool {
        let scale = self.max_coeff_norm().max(1.0);
        c.norm() <= ZERO_TOL * scale
    }

    pub fn algebra_tag(&self) -> String {
        self.plain[0].algebra_tag()
    }

    fn check_same_algebra(&self, other: &Self) -> Result<()> {
        let (a, b) = (self.algebra_tag(), other.algebra_tag());
        if a != b {
            return Err(Error::AlgebraMismatch(format!("{a} vs {b}")));
        }
        Ok(())
    }

    /// Multiply by `x^beta`.
    pub fn shift_exponent(mut self, beta: Complex64) -> Self {
        self.alpha += beta;
        self
    }

    /// Drop coefficients beyond `order`.
    pub fn truncate(mut self, order: usize) -> Self {
        if order < self.order() {
            self.plain.truncate(order + 1);
            self.log.truncate(order + 1);
        }
        self
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PowerLogSeries {
            alpha: self.alpha,
            plain: self.plain.iter().map(|a| a.scale(c)).collect(),
            log: self.log.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Scale every coefficient by a fixed algebra element.
    pub fn scale_coeff(&self, c: &A) -> Self {
        PowerLogSeries {
            alpha: self.alpha,
            plain: self.plain.iter().map(|a| a.mul(c)).collect(),
            log: self.log.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Sum after exponent alignment. The result's truncation order is the
    /// minimum of the aligned operand orders.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_algebra(other)?;
        let d = int_offset(self.alpha - other.alpha).ok_or_else(|| {
            Error::ExponentMismatch(format!("{} vs {}", self.alpha, other.alpha))
        })?;
        // lo: the operand with the smaller exponent, shifted by m >= 0.
        let (lo, hi, m) = if d >= 0 {
            (other, self, d as usize)
        } else {
            (self, other, (-d) as usize)
        };
        let n_res = lo.order().min(m + hi.order());
        let zero = lo.plain[0].zero_like();
        let mut plain = Vec::with_capacity(n_res + 1);
        let mut log = Vec::with_capacity(n_res + 1);
        for j in 0..=n_res {
            let (mut p, mut l) = (lo.plain[j].clone(), lo.log[j].clone());
            if j >= m {
                p = p.add(&hi.plain[j - m]);
                l = l.add(&hi.log[j - m]);
            }
            plain.push(p);
            log.push(l);
        }
        let _ = zero;
        Ok(PowerLogSeries {
            alpha: lo.alpha,
            plain,
            log,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Cauchy product; base exponents add; truncation order is the minimum of
    /// the operands'. At most one operand may carry log blocks.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_algebra(other)?;
        let self_log = !self.is_log_free();
        let other_log = !other.is_log_free();
        if self_log && other_log {
            return Err(Error::DoubleLog);
        }
        let n = self.order().min(other.order());
        let zero = self.plain[0].zero_like();
        let mut plain = vec![zero.clone(); n + 1];
        let mut log = vec![zero; n + 1];
        for k in 0..=n {
            for i in 0..=k {
                let j = k - i;
                plain[k] = plain[k].add(&self.plain[i].mul(&other.plain[j]));
                if self_log {
                    log[k] = log[k].add(&self.log[i].mul(&other.plain[j]));
                } else if other_log {
                    log[k] = log[k].add(&self.plain[i].mul(&other.log[j]));
                }
            }
        }
        Ok(PowerLogSeries {
            alpha: self.alpha + other.alpha,
            plain,
            log,
        })
    }

    /// Multiplicative inverse: requires a log-free series whose leading plain
    /// coefficient is invertible in the algebra.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_log_free() {
            return Err(Error::UnexpectedLog("series_inverse".into()));
        }
        let a0inv = self.plain[0].try_inverse().ok_or_else(|| {
            Error::NonInvertibleLeading(format!(
                "algebra {} leading coefficient norm {:.3e}",
                self.algebra_tag(),
                self.plain[0].norm()
            ))
        })?;
        let n = self.order();
        let mut inv: Vec<A> = Vec::with_capacity(n + 1);
        inv.push(a0inv.clone());
        for k in 1..=n {
            let mut acc = self.plain[0].zero_like();
            for j in 1..=k {
                acc = acc.add(&self.plain[j].mul(&inv[k - j]));
            }
            // a_0^{-1} * (-(sum a_j b_{k-j}))
            inv.push(a0inv.mul(&acc.scale(Complex64::new(-1.0, 0.0))));
        }
        Ok(PowerLogSeries::from_plain(-self.alpha, inv))
    }

    /// Term-wise derivative. `d/dx (x^(a+j) log x) = x^(a+j-1) ((a+j) log x + 1)`,
    /// so log blocks feed plain blocks.
    pub fn diff(&self) -> Self {
        let mut plain = Vec::with_capacity(self.plain.len());
        let mut log = Vec::with_capacity(self.log.len());
        for j in 0..self.plain.len() {
            let aj = self.alpha + j as f64;
            plain.push(self.plain[j].scale(aj).add(&self.log[j]));
            log.push(self.log[j].scale(aj));
        }
        PowerLogSeries {
            alpha: self.alpha - 1.0,
            plain,
            log,
        }
    }

    /// Evaluate the truncated series at `x > 0` (complex exponent allowed).
    pub fn eval(&self, x: f64) -> A {
        let lx = x.ln();
        let xa = (self.alpha * lx).exp();
        let mut acc = self.plain[0].zero_like();
        let mut xp = xa;
        for j in 0..self.plain.len() {
            acc = acc.add(&self.plain[j].scale(xp));
            acc = acc.add(&self.log[j].scale(xp * lx));
            xp *= Complex64::new(x, 0.0);
        }
        acc
    }

    /// Magnitude of the last retained term at `x`, a tail-size proxy.
    pub fn tail_estimate(&self, x: f64) -> f64 {
        let n = self.order();
        let xa = ((self.alpha + n as f64) * x.ln()).exp().norm();
        (self.plain[n].norm() + self.log[n].norm() * x.ln().abs()) * xa
    }

    pub fn map<B: Coefficient>(&self, f: impl Fn(&A) -> B) -> PowerLogSeries<B> {
        PowerLogSeries {
            alpha: self.alpha,
            plain: self.plain.iter().map(&f).collect(),
            log: self.log.iter().map(&f).collect(),
        }
    }
}

/// Square root of a log-free series with leading coefficient `1`, used for
/// determinant-root factors of metric jets.
pub fn sqrt_unit_leading<A: Coefficient>(a: &PowerLogSeries<A>) -> Result<PowerLogSeries<A>> {
    if !a.is_log_free() {
        return Err(Error::UnexpectedLog("series sqrt".into()));
    }
    let one = a.plain_coeffs()[0].one_like();
    let lead_dev = a.plain_coeffs()[0].sub(&one).norm();
    if lead_dev > 1e-9 * a.max_coeff_norm().max(1.0) {
        return Err(Error::NonInvertibleLeading(format!(
            "sqrt needs unit leading coefficient, deviation {lead_dev:.3e}"
        )));
    }
    let n = a.order();
    let mut w: Vec<A> = Vec::with_capacity(n + 1);
    w.push(one);
    let half = Complex64::new(0.5, 0.0);
    for k in 1..=n {
        let mut acc = a.plain_coeffs()[k].clone();
        for j in 1..k {
            acc = acc.sub(&w[j].mul(&w[k - j]));
        }
        w.push(acc.scale(half));
    }
    Ok(PowerLogSeries::from_plain(a.alpha() * 0.5, w))
}

/// exp of a log-free series (alpha must be 0).
pub fn exp_series<A: Coefficient>(u: &PowerLogSeries<A>) -> Result<PowerLogSeries<A>> {
    composed_series(u, |c0| scalar_exp_like(c0))
}

/// sin and cos of a log-free series (alpha must be 0), returned as a pair.
pub fn sin_cos_series<A: Coefficient>(
    u: &PowerLogSeries<A>,
) -> Result<(PowerLogSeries<A>, PowerLogSeries<A>)> {
    check_composable(u)?;
    let n = u.order();
    let (s0, c0) = scalar_sin_cos_like(&u.plain_coeffs()[0]);
    let mut s: Vec<A> = vec![s0];
    let mut c: Vec<A> = vec![c0];
    // s' = c u', c' = -s u'  =>  k s_k = sum_{j=1..k} j u_j c_{k-j}, etc.
    for k in 1..=n {
        let mut sk = u.plain_coeffs()[0].zero_like();
        let mut ck = sk.clone();
        for j in 1..=k {
            let ju = u.plain_coeffs()[j].scale(Complex64::new(j as f64, 0.0));
            sk = sk.add(&ju.mul(&c[k - j]));
            ck = ck.sub(&ju.mul(&s[k - j]));
        }
        let inv_k = Complex64::new(1.0 / k as f64, 0.0);
        s.push(sk.scale(inv_k));
        c.push(ck.scale(inv_k));
    }
    Ok((
        PowerLogSeries::from_plain(u.alpha(), s),
        PowerLogSeries::from_plain(u.alpha(), c),
    ))
}

/// log of a log-free series with invertible leading coefficient (alpha = 0).
pub fn log_series<A: Coefficient>(u: &PowerLogSeries<A>) -> Result<PowerLogSeries<A>> {
    check_composable(u)?;
    let n = u.order();
    let uinv = u.inverse()?;
    // L' = u'/u, integrate term-wise; constant term from the scalar log.
    let lprime = u.diff().mul(&uinv)?;
    let mut l: Vec<A> = vec![scalar_log_like(&u.plain_coeffs()[0])?];
    for k in 1..=n {
        // coefficient of x^{k-1} in L' is k * L_k
        let c = lprime
            .plain_at_power(Complex64::new(k as f64 - 1.0, 0.0))?
            .scale(Complex64::new(1.0 / k as f64, 0.0));
        l.push(c);
    }
    Ok(PowerLogSeries::from_plain(u.alpha(), l))
}

fn check_composable<A: Coefficient>(u: &PowerLogSeries<A>) -> Result<()> {
    if !u.is_log_free() {
        return Err(Error::UnexpectedLog("series composition".into()));
    }
    if u.alpha().norm() > 1e-12 {
        return Err(Error::ExponentMismatch(
            "series composition needs alpha = 0".into(),
        ));
    }
    Ok(())
}

fn composed_series<A: Coefficient>(
    u: &PowerLogSeries<A>,
    f0: impl Fn(&A) -> A,
) -> Result<PowerLogSeries<A>> {
    check_composable(u)?;
    let n = u.order();
    let mut e: Vec<A> = vec![f0(&u.plain_coeffs()[0])];
    // E' = E u'  =>  k E_k = sum_{j=1..k} j u_j E_{k-j}
    for k in 1..=n {
        let mut acc = u.plain_coeffs()[0].zero_like();
        for j in 1..=k {
            acc = acc.add(
                &u.plain_coeffs()[j]
                    .scale(Complex64::new(j as f64, 0.0))
                    .mul(&e[k - j]),
            );
        }
        e.push(acc.scale(Complex64::new(1.0 / k as f64, 0.0)));
    }
    Ok(PowerLogSeries::from_plain(u.alpha(), e))
}

// Scalar seeds for composition. These are only meaningful for algebras whose
// elements act like scalars; grid fields provide their own pointwise versions
// through the chart module, and composition is not used on matrix algebras.
fn scalar_exp_like<A: Coefficient>(c: &A) -> A {
    // exp(c) = sum c^k / k!, truncated adaptively; exact for the scalar
    // algebras where |c| is the scalar magnitude.
    let mut term = c.one_like();
    let mut acc = c.one_like();
    for k in 1..60 {
        term = term.mul(c).scale(Complex64::new(1.0 / k as f64, 0.0));
        acc = acc.add(&term);
        if term.norm() < 1e-17 * acc.norm().max(1.0) {
            break;
        }
    }
    acc
}

fn scalar_sin_cos_like<A: Coefficient>(c: &A) -> (A, A) {
    // sin, cos via exp(ic) on scalar-like algebras.
    let i = Complex64::new(0.0, 1.0);
    let e_plus = scalar_exp_like(&c.scale(i));
    let e_minus = scalar_exp_like(&c.scale(-i));
    let s = e_plus.sub(&e_minus).scale(Complex64::new(0.0, -0.5));
    let co = e_plus.add(&e_minus).scale(Complex64::new(0.5, 0.0));
    (s, co)
}

fn scalar_log_like<A: Coefficient>(c: &A) -> Result<A> {
    // log(c) via Newton iteration on exp(z) = c, seeded at z = 0; adequate for
    // the scalar leading coefficients (warps have leading coefficient 1).
    let mut z = c.zero_like();
    for _ in 0..80 {
        let ez = scalar_exp_like(&z);
        let ezinv = ez.try_inverse().ok_or_else(|| {
            Error::NonInvertibleLeading("series log leading coefficient".into())
        })?;
        let step = c.mul(&ezinv).sub(&z.one_like());
        z = z.add(&step);
        if step.norm() < 1e-16 {
            break;
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn poly(alpha: f64, coeffs: &[f64]) -> PowerLogSeries<Complex64> {
        PowerLogSeries::from_plain(c(alpha), coeffs.iter().map(|&v| c(v)).collect())
    }

    fn assert_plain(s: &PowerLogSeries<Complex64>, expected: &[f64]) {
        for (j, &e) in expected.iter().enumerate() {
            let got = s.plain_coeff(j).unwrap();
            assert!(
                (got - c(e)).norm() < 1e-12,
                "coeff {j}: got {got}, want {e}"
            );
        }
    }

    #[test]
    fn mul_telescoping() {
        // (1+x)(1-x) = 1 - x^2 at order 4
        let a = poly(0.0, &[1.0, 1.0, 0.0, 0.0, 0.0]);
        let b = poly(0.0, &[1.0, -1.0, 0.0, 0.0, 0.0]);
        let p = a.mul(&b).unwrap();
        assert_plain(&p, &[1.0, 0.0, -1.0, 0.0, 0.0]);
    }

    #[test]
    fn mul_einstein_warp_square() {
        // (1 - x^2/4)^2 = 1 - x^2/2 + x^4/16
        let a = poly(0.0, &[1.0, 0.0, -0.25, 0.0, 0.0]);
        let p = a.mul(&a).unwrap();
        assert_plain(&p, &[1.0, 0.0, -0.5, 0.0, 1.0 / 16.0]);
    }

    #[test]
    fn mul_exponents_add() {
        let s = 1.7;
        let n = 3.0;
        let a = PowerLogSeries::monomial(c(s), c(1.0), 2);
        let b = PowerLogSeries::monomial(c(n - s), c(1.0), 2);
        let p = a.mul(&b).unwrap();
        assert!((p.alpha() - c(n)).norm() < 1e-14);
        assert_plain(&p, &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn mul_rejects_double_log() {
        let mut a = poly(0.0, &[1.0, 0.0]);
        a.set_log_coeff(1, c(1.0)).unwrap();
        assert!(matches!(a.mul(&a), Err(Error::DoubleLog)));
    }

    #[test]
    fn inverse_geometric() {
        // 1/(1-x) = 1 + x + x^2 + x^3
        let a = poly(0.0, &[1.0, -1.0, 0.0, 0.0]);
        let inv = a.inverse().unwrap();
        assert_plain(&inv, &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn inverse_binomial() {
        // 1/(1-x^2/4)^2 = 1 + x^2/2 + 3 x^4/16
        let a = poly(0.0, &[1.0, 0.0, -0.25, 0.0, 0.0]);
        let sq = a.mul(&a).unwrap();
        let inv = sq.inverse().unwrap();
        assert_plain(&inv, &[1.0, 0.0, 0.5, 0.0, 3.0 / 16.0]);
    }

    #[test]
    fn inverse_constant() {
        let a = poly(0.0, &[2.0, 0.0]);
        let inv = a.inverse().unwrap();
        assert_plain(&inv, &[0.5, 0.0]);
    }

    #[test]
    fn inverse_checks_product_is_one() {
        let a = poly(0.0, &[2.0, -0.3, 0.7, 0.1, -0.05]);
        let p = a.mul(&a.inverse().unwrap()).unwrap();
        assert_plain(&p, &[1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn diff_power() {
        // d/dx x^a = a x^(a-1)
        let a = PowerLogSeries::monomial(c(1.7), c(1.0), 2);
        let d = a.diff();
        assert!((d.alpha() - c(0.7)).norm() < 1e-14);
        assert!((d.plain_coeff(0).unwrap() - c(1.7)).norm() < 1e-14);
    }

    #[test]
    fn diff_log_feeds_plain() {
        // d/dx (x^a log x) = x^(a-1) (a log x + 1)
        let mut s = PowerLogSeries::monomial(c(1.7), c(0.0), 1);
        s.set_log_coeff(0, c(1.0)).unwrap();
        let d = s.diff();
        assert!((d.plain_coeff(0).unwrap() - c(1.0)).norm() < 1e-14);
        assert!((d.log_coeff(0).unwrap() - c(1.7)).norm() < 1e-14);
    }

    #[test]
    fn diff_polynomial() {
        // d/dx (1 + x^2) = 2x
        let a = poly(0.0, &[1.0, 0.0, 1.0]);
        let d = a.diff();
        // result frame alpha = -1: coefficients [0, 0, 2]
        assert!((d.alpha() - c(-1.0)).norm() < 1e-14);
        assert_plain(&d, &[0.0, 0.0, 2.0]);
    }

    #[test]
    fn add_aligns_exponents() {
        let a = PowerLogSeries::monomial(c(1.0), c(1.0), 3); // x
        let b = PowerLogSeries::monomial(c(3.0), c(2.0), 3); // 2 x^3
        let s = a.add(&b).unwrap();
        assert!((s.alpha() - c(1.0)).norm() < 1e-14);
        assert_plain(&s, &[1.0, 0.0, 2.0]);
        // truncation: min(3, 2 + 3) = 3
        assert_eq!(s.order(), 3);
    }

    #[test]
    fn add_rejects_fractional_offset() {
        let a = PowerLogSeries::monomial(c(0.5), c(1.0), 2);
        let b = PowerLogSeries::monomial(c(0.0), c(1.0), 2);
        assert!(matches!(a.add(&b), Err(Error::ExponentMismatch(_))));
    }

    #[test]
    fn coeff_beyond_order_is_error() {
        let a = poly(0.0, &[1.0, 2.0]);
        assert!(matches!(
            a.plain_coeff(2),
            Err(Error::OrderExceeded { index: 2, order: 1 })
        ));
    }

    #[test]
    fn log_free_round_trip() {
        let a = poly(0.0, &[1.0, -0.5, 0.25, 0.0]);
        let b = poly(0.0, &[2.0, 0.5, -1.0, 0.3]);
        let p = a.mul(&b).unwrap().add(&a).unwrap().diff();
        assert!(p.is_log_free());
    }

    #[test]
    fn eval_matches_horner() {
        let a = poly(0.5, &[1.0, -0.3, 0.2]);
        let x = 0.37f64;
        let want = x.powf(0.5) * (1.0 - 0.3 * x + 0.2 * x * x);
        assert!((a.eval(x) - c(want)).norm() < 1e-14);
    }

    #[test]
    fn sqrt_of_square() {
        let a = poly(0.0, &[1.0, 0.3, -0.2, 0.05, 0.0]);
        let sq = a.mul(&a).unwrap();
        let r = sqrt_unit_leading(&sq).unwrap();
        for j in 0..=4 {
            assert!(
                (r.plain_coeff(j).unwrap() - a.plain_coeff(j).unwrap()).norm() < 1e-12,
                "sqrt coeff {j}"
            );
        }
    }

    #[test]
    fn exp_log_inverse_of_each_other() {
        let a = poly(0.0, &[1.0, 0.4, -0.1, 0.02, 0.3]);
        let l = log_series(&a).unwrap();
        let e = exp_series(&l).unwrap();
        for j in 0..=4 {
            assert!((e.plain_coeff(j).unwrap() - a.plain_coeff(j).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn sin_cos_pythagoras() {
        let u = poly(0.0, &[0.3, 0.4, -0.1, 0.02]);
        let (s, co) = sin_cos_series(&u).unwrap();
        let one = s.mul(&s).unwrap().add(&co.mul(&co).unwrap()).unwrap();
        assert_plain(&one, &[1.0, 0.0, 0.0, 0.0]);
    }
}
