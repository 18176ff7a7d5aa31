//! Independent reference computations ("oracles").
//!
//! Everything here deliberately avoids the spectral/series code paths it is
//! used to check: curvature and Laplacians come from 4th-order finite
//! differences of closed-form metric components, integrals from adaptive
//! Simpson quadrature, and Bessel-type series coefficients from their own
//! recurrences. The `verify` pipeline and the test suites compare the main
//! implementations against these routines.

/// 4th-order central first derivative of a scalar closed form.
fn fd1(f: &dyn Fn(&[f64]) -> f64, y: &[f64], axis: usize, h: f64) -> f64 {
    let mut yp = y.to_vec();
    let eval = |yp: &mut [f64], k: f64| {
        yp[axis] = y[axis] + k * h;
        f(yp)
    };
    (-eval(&mut yp, 2.0) + 8.0 * eval(&mut yp, 1.0) - 8.0 * eval(&mut yp, -1.0)
        + eval(&mut yp, -2.0))
        / (12.0 * h)
}

/// Finite-difference Christoffel symbols of a closed-form metric at a point.
fn fd_christoffel(
    n: usize,
    comp: &dyn Fn(usize, usize, &[f64]) -> f64,
    y: &[f64],
    h: f64,
) -> Vec<f64> {
    // dh[l][i][j] = partial_l h_ij
    let mut dh = vec![0.0; n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in i..n {
                let d = fd1(&|p: &[f64]| comp(i, j, p), y, l, h);
                dh[(l * n + i) * n + j] = d;
                dh[(l * n + j) * n + i] = d;
            }
        }
    }
    let hinv = invert(n, &matrix_at(n, comp, y));
    let mut gamma = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += hinv[k * n + l]
                        * (dh[(i * n + j) * n + l] + dh[(j * n + i) * n + l]
                            - dh[(l * n + i) * n + j]);
                }
                gamma[(k * n + i) * n + j] = 0.5 * acc;
                gamma[(k * n + j) * n + i] = 0.5 * acc;
            }
        }
    }
    gamma
}

fn matrix_at(n: usize, comp: &dyn Fn(usize, usize, &[f64]) -> f64, y: &[f64]) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = comp(i.min(j), i.max(j), y);
        }
    }
    m
}

fn invert(n: usize, a: &[f64]) -> Vec<f64> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for k in 0..n {
        let mut piv = k;
        for r in (k + 1)..n {
            if m[r * n + k].abs() > m[piv * n + k].abs() {
                piv = r;
            }
        }
        for c in 0..n {
            m.swap(k * n + c, piv * n + c);
            inv.swap(k * n + c, piv * n + c);
        }
        let d = m[k * n + k];
        for c in 0..n {
            m[k * n + c] /= d;
            inv[k * n + c] /= d;
        }
        for r in 0..n {
            if r != k {
                let f = m[r * n + k];
                for c in 0..n {
                    m[r * n + c] -= f * m[k * n + c];
                    inv[r * n + c] -= f * inv[k * n + c];
                }
            }
        }
    }
    inv
}

/// Scalar curvature of a closed-form metric at `y`, entirely by 4th-order
/// finite differences (step `h`). Positive on the round-sphere convention.
pub fn fd_scalar_curvature(
    n: usize,
    comp: &dyn Fn(usize, usize, &[f64]) -> f64,
    y: &[f64],
    h: f64,
) -> f64 {
    // Ricci_ij = d_k Gamma^k_ij - d_i Gamma^k_kj
    //          + Gamma^k_kl Gamma^l_ij - Gamma^k_il Gamma^l_kj
    let gamma = fd_christoffel(n, comp, y, h);
    let mut dgamma = vec![0.0; n * n * n * n]; // [a][(k,i,j)]
    for a in 0..n {
        for idx in 0..n * n * n {
            let (k, rem) = (idx / (n * n), idx % (n * n));
            let (i, j) = (rem / n, rem % n);
            if j < i {
                continue;
            }
            let d = fd1(
                &|p: &[f64]| fd_christoffel(n, comp, p, h)[(k * n + i) * n + j],
                y,
                a,
                h,
            );
            dgamma[a * n * n * n + (k * n + i) * n + j] = d;
            dgamma[a * n * n * n + (k * n + j) * n + i] = d;
        }
    }
    let ga = |k: usize, i: usize, j: usize| gamma[(k * n + i) * n + j];
    let dga = |a: usize, k: usize, i: usize, j: usize| dgamma[a * n * n * n + (k * n + i) * n + j];
    let mut ricci = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += dga(k, k, i, j) - dga(i, k, k, j);
                for l in 0..n {
                    acc += ga(k, k, l) * ga(l, i, j) - ga(k, i, l) * ga(l, k, j);
                }
            }
            ricci[i * n + j] = acc;
        }
    }
    let hinv = invert(n, &matrix_at(n, comp, y));
    let mut r = 0.0;
    for i in 0..n {
        for j in 0..n {
            r += hinv[i * n + j] * ricci[i * n + j];
        }
    }
    r
}

/// Positive Laplace-Beltrami of a closed-form function at `y`, by 4th-order
/// finite differences.
pub fn fd_laplace_beltrami(
    n: usize,
    comp: &dyn Fn(usize, usize, &[f64]) -> f64,
    f: &dyn Fn(&[f64]) -> f64,
    y: &[f64],
    h: f64,
) -> f64 {
    let flux = |i: usize, p: &[f64]| -> f64 {
        let hinv = invert(n, &matrix_at(n, comp, p));
        let det = det_small(n, &matrix_at(n, comp, p));
        let mut acc = 0.0;
        for j in 0..n {
            acc += hinv[i * n + j] * fd1(f, p, j, h);
        }
        det.sqrt() * acc
    };
    let det = det_small(n, &matrix_at(n, comp, y));
    let mut acc = 0.0;
    for i in 0..n {
        acc += fd1(&|p: &[f64]| flux(i, p), y, i, h);
    }
    -acc / det.sqrt()
}

fn det_small(n: usize, a: &[f64]) -> f64 {
    let mut m = a.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let mut piv = k;
        for r in (k + 1)..n {
            if m[r * n + k].abs() > m[piv * n + k].abs() {
                piv = r;
            }
        }
        if piv != k {
            for c in 0..n {
                m.swap(k * n + c, piv * n + c);
            }
            det = -det;
        }
        let d = m[k * n + k];
        if d == 0.0 {
            return 0.0;
        }
        det *= d;
        for r in (k + 1)..n {
            let f = m[r * n + k] / d;
            for c in k..n {
                m[r * n + c] -= f * m[k * n + c];
            }
        }
    }
    det
}

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + rec(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
    }
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// Coefficients of the normalised ascending modified-Bessel branch:
/// `x^{n/2} I_nu(q x)` rescaled to leading coefficient 1 has only even
/// coefficients `c_{2m}`, satisfying `c_{2m} = c_{2m-2} (q/2)^2 / (m (nu+m))`.
pub fn bessel_branch_coeffs(nu: f64, q: f64, terms: usize) -> Vec<f64> {
    let mut out = vec![0.0; 2 * terms + 1];
    out[0] = 1.0;
    let mut c = 1.0;
    for m in 1..=terms {
        c *= (q / 2.0) * (q / 2.0) / (m as f64 * (nu + m as f64));
        out[2 * m] = c;
    }
    out
}

/// Dirichlet-cap scattering ratio for the zero mode on the exactly flat
/// collar, by two-exponent algebra: u = x^{n-s} + S x^s with u(cap) = 0.
pub fn flat_zero_mode_cap_ratio(n: usize, s: num_complex::Complex64, cap: f64) -> num_complex::Complex64 {
    let e = num_complex::Complex64::new(n as f64, 0.0) - 2.0 * s;
    -(e * cap.ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fd_flat_curvature_zero() {
        let comp = |i: usize, j: usize, _y: &[f64]| if i == j { 1.0 } else { 0.0 };
        let r = fd_scalar_curvature(2, &comp, &[0.3, 1.1], 1e-2);
        assert!(r.abs() < 1e-10);
    }

    #[test]
    fn fd_curvature_matches_conformal_identity() {
        // dim 2, h = e^{2u} delta, u = 0.1 sin(y1): R = e^{-2u} * 2 * (positive Lap) u
        // with Delta u = +0.1 sin(y1) on the flat background.
        let u = |y: &[f64]| 0.1 * y[0].sin();
        let comp = move |i: usize, j: usize, y: &[f64]| {
            if i == j {
                (2.0 * u(y)).exp()
            } else {
                0.0
            }
        };
        for &y0 in &[0.0, 0.7, PI / 2.0, 3.0] {
            let y = [y0, 0.4];
            let want = (-2.0 * u(&y)).exp() * 2.0 * 0.1 * y0.sin();
            let got = fd_scalar_curvature(2, &comp, &y, 5e-3);
            assert!((got - want).abs() < 1e-7, "at {y0}: {got} vs {want}");
        }
    }

    #[test]
    fn simpson_integrates_exp() {
        let v = adaptive_simpson(&|t: f64| t.exp(), 0.0, 1.0, 1e-12);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-11);
    }
}
