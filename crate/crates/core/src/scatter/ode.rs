//! Adaptive Dormand-Prince 5(4) integration for small complex-valued systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 35.0 / 384.0 - 5179.0 / 57600.0;
const E3: f64 = 500.0 / 1113.0 - 7571.0 / 16695.0;
const E4: f64 = 125.0 / 192.0 - 393.0 / 640.0;
const E5: f64 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
const E6: f64 = 11.0 / 84.0 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

fn axpy<const N: usize>(
    y: &[Complex64; N],
    terms: &[(f64, &[Complex64; N])],
    h: f64,
) -> [Complex64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrate y' = f(t, y) from t0 to t1 (either direction), local tolerance
/// `rtol`/`atol`, returning y(t1).
pub fn integrate<const N: usize>(
    f: &dyn Fn(f64, &[Complex64; N]) -> [Complex64; N],
    t0: f64,
    t1: f64,
    y0: [Complex64; N],
    rtol: f64,
    atol: f64,
) -> Result<[Complex64; N]> {
    if t0 == t1 {
        return Ok(y0);
    }
    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (span / 64.0).min(0.1);
    let mut k1 = f(t, &y);
    let mut steps = 0usize;
    loop {
        if (t - t1).abs() < 1e-15 * span.max(1.0) {
            return Ok(y);
        }
        if dir * (t + h - t1) > 0.0 {
            h = t1 - t;
        }
        let k2 = f(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
        let k3 = f(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(
            t + C5 * h,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
        );
        let k6 = f(
            t + h,
            &axpy(
                &y,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                h,
            ),
        );
        let y_next = axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
        let k7 = f(t + h, &y_next);
        // embedded error estimate
        let mut err: f64 = 0.0;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                + E7 * k7[i]);
            let scale = atol + rtol * y[i].norm().max(y_next[i].norm());
            err = err.max(e.norm() / scale);
        }
        if err <= 1.0 {
            t += h;
            y = y_next;
            k1 = k7; // FSAL
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h.abs() < 1e-14 * span.max(1.0) {
            return Err(Error::Tolerance(format!(
                "step size underflow at t = {t} (err {err:.3e})"
            )));
        }
        steps += 1;
        if steps > 2_000_000 {
            return Err(Error::Tolerance("integrator step budget exhausted".into()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let f = |_t: f64, y: &[Complex64; 1]| [-y[0]];
        let y = integrate(&f, 0.0, 2.0, [Complex64::new(1.0, 0.0)], 1e-12, 1e-14).unwrap();
        assert!((y[0].re - (-2.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_backwards() {
        // u'' = -u with u = sin t, integrated from t=pi back to 0
        let f = |_t: f64, y: &[Complex64; 2]| [y[1], -y[0]];
        let y = integrate(
            &f,
            std::f64::consts::PI,
            0.0,
            [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
            1e-12,
            1e-14,
        )
        .unwrap();
        assert!((y[0].re - 0.0).abs() < 1e-10);
        assert!((y[1].re - 1.0).abs() < 1e-10);
    }
}
