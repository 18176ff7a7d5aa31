use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Rational64;

use super::*;
use crate::chart::TorusChart;
use crate::fg::{einstein_warp, solve_fg};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[test]
fn c_k_values() {
    assert_eq!(c_k_exact(1), Rational64::new(-1, 4));
    assert_eq!(c_k_exact(2), Rational64::new(1, 32));
    assert_eq!(c_k_exact(3), Rational64::new(-1, 768));
}

#[test]
fn c_1s_reduction() {
    // c_{1,s} = -1/(2(2s-n-2))
    for (n, s) in [(2usize, 2.7), (4usize, 3.3), (4usize, 5.1)] {
        let got = c_ks(n, 1, c(s)).unwrap();
        let want = -1.0 / (2.0 * (2.0 * s - n as f64 - 2.0));
        assert!((got - c(want)).norm() < 1e-14);
    }
}

#[test]
fn c_ks_pole_is_error() {
    assert!(matches!(
        c_ks(4, 2, c(4.0)),
        Err(crate::error::Error::RationalPole(_))
    ));
}

fn flat_grid_ds(chart: &Arc<TorusChart>, order: usize) -> GridDs {
    let h = crate::chart::GridMetric::flat(chart);
    let jet = solve_fg(&h, if chart.dim() % 2 == 0 { 2.min(chart.dim()) } else { 2 }).unwrap();
    assert!(jet.exact);
    GridDs::new(&jet, order).unwrap()
}

#[test]
fn ds_flat_constant_is_x_laplacian() {
    // flat jet, F = f constant in x: D_s F = x Delta_h f.
    let chart = TorusChart::square(2, 16).unwrap();
    let ds = flat_grid_ds(&chart, 3);
    let f = GridField::from_fn(&chart, |y| (y[0] + y[1]).sin());
    let s = c(1.7);
    let series = PowerLogSeries::constant(f.clone(), 3);
    let r = ds.apply_ds(s, &series).unwrap();
    let lap = laplace_beltrami(&crate::chart::GridMetric::flat(&chart), &f).unwrap();
    // coefficient of x^1
    let got = r.plain_at_power(c(1.0)).unwrap();
    assert!(got.sub(&lap).norm() < 1e-11);
    // coefficients of x^0 and x^-1 vanish
    assert!(r.plain_at_power(c(0.0)).unwrap().norm() < 1e-12);
}

#[test]
fn ds_leading_indicial_coefficient() {
    // D_s(x^j f) = j(2s-n-j) f x^{j-1} + O(x^j), checked for j <= 4 on a
    // curved (Einstein warp) backend.
    let s4 = crate::einstein::EinsteinModel::round_sphere(4).unwrap();
    let jet = einstein_warp(&s4, 8).unwrap();
    let backend = ModeDs::collar(&jet, c(7.3), 6).unwrap();
    let s = c(2.456);
    let n = 4.0;
    for j in 1..=4usize {
        let mut coeffs = vec![c(0.0); 7];
        coeffs[j] = c(1.0);
        let series = PowerLogSeries::from_plain(c(0.0), coeffs);
        let r = backend.apply_ds(s, &series).unwrap();
        let got = r.plain_at_power(c(j as f64 - 1.0)).unwrap();
        let want = j as f64 * (2.0 * s.re - n - j as f64);
        assert!(
            (got - c(want)).norm() < 1e-11,
            "j = {j}: got {got}, want {want}"
        );
    }
}

#[test]
fn ds_odd_warp_zeroth_coefficient() {
    // h_x = (1+bx)^2 h: h^{ij} h'_{ij}|_0 = 2nb, so the x^0 coefficient of
    // D_s f is -((n-s)/2) * 2nb * f = -n(n-s) b f.
    let n = 3usize;
    let b = 0.2;
    let mut phi = vec![c(0.0); 5];
    phi[0] = c(1.0);
    phi[1] = c(2.0 * b);
    phi[2] = c(b * b);
    let jet = crate::fg::WarpJet::new(n, PowerLogSeries::from_plain(c(0.0), phi), true).unwrap();
    let backend = ModeDs::collar(&jet, c(0.0), 4).unwrap();
    let s = c(1.9);
    let f = PowerLogSeries::constant(c(1.0), 4);
    let r = backend.apply_ds(s, &f).unwrap();
    let got = r.plain_at_power(c(0.0)).unwrap();
    let want = -(n as f64) * (n as f64 - s.re) * b;
    assert!((got - c(want)).norm() < 1e-12, "got {got}, want {want}");
}

#[test]
fn flat_f2_matches_c1s() {
    // flat: f_2 = Delta f / (2(n+2-2s)) = c_{1,s} Delta f.
    let chart = TorusChart::square(2, 16).unwrap();
    let ds = flat_grid_ds(&chart, 2);
    let f = GridField::from_fn(&chart, |y| y[0].cos() + 0.3 * (y[0] - y[1]).sin());
    let s = c(1.63);
    let sol = formal_smooth_solve(&ds, f.clone(), s, 2).unwrap();
    let lap = laplace_beltrami(&crate::chart::GridMetric::flat(&chart), &f).unwrap();
    let n = 2.0;
    let want = lap.scale(c(1.0 / (2.0 * (n + 2.0 - 2.0 * s.re))));
    let got = sol.series.plain_coeff(2).unwrap();
    assert!(got.sub(&want).norm() < 1e-11);
    // and f_1 = 0
    assert!(sol.series.plain_coeff(1).unwrap().norm() < 1e-12);
    // c_{k,s} route agrees
    let via_cks = lap.scale(c_ks(2, 1, s).unwrap());
    assert!(got.sub(&via_cks).norm() < 1e-11);
}

#[test]
fn parity_even_jet_kills_odd_orders() {
    let s4 = crate::einstein::EinsteinModel::round_sphere(4).unwrap();
    let jet = einstein_warp(&s4, 8).unwrap();
    let backend = ModeDs::collar(&jet, c(4.0), 6).unwrap();
    let sol = formal_smooth_solve(&backend, c(1.0), c(2.37), 6).unwrap();
    for j in [1usize, 3, 5] {
        let v = sol.series.plain_coeff(j).unwrap().norm();
        assert!(v < 1e-10, "odd order {j} coefficient {v:.3e}");
    }
}

#[test]
fn odd_warp_f1_formula() {
    // f_1 = n(n-s) b f / (2s-n-1)
    let n = 2usize;
    let b = 0.15;
    let mut phi = vec![c(0.0); 4];
    phi[0] = c(1.0);
    phi[1] = c(2.0 * b);
    phi[2] = c(b * b);
    let jet = crate::fg::WarpJet::new(n, PowerLogSeries::from_plain(c(0.0), phi), true).unwrap();
    let backend = ModeDs::collar(&jet, c(0.0), 3).unwrap();
    let s = c(1.8);
    let sol = formal_smooth_solve(&backend, c(1.0), s, 3).unwrap();
    let got = sol.series.plain_coeff(1).unwrap();
    let want = n as f64 * (n as f64 - s.re) * b / (2.0 * s.re - n as f64 - 1.0);
    assert!((got - c(want)).norm() < 1e-12, "got {got}, want {want}");
}

#[test]
fn log_coefficient_flat_t2_k1() {
    // flat, n=2, k=1, f = e^{i y1}: P_1 f = Delta f = f, and the log block
    // coefficient is g_2 = -2 c_1 P_1 f = f/2.
    let chart = TorusChart::square(2, 16).unwrap();
    let ds = flat_grid_ds(&chart, 2);
    let f = GridField::from_fn_complex(&chart, |y| Complex64::new(0.0, y[0]).exp());
    let (sol, g2) = log_coefficient(&ds, f.clone(), 1).unwrap();
    assert_eq!(sol.log_order, Some(2));
    let want = f.scale(c(0.5));
    assert!(g2.sub(&want).norm() < 1e-11);
    // P_k route
    let p1 = p_k_apply(&ds, f.clone(), 1).unwrap();
    assert!(p1.sub(&f).norm() < 1e-11);
}

#[test]
fn p_n_half_annihilates_constants() {
    // g_n = 0 for f = 1 (P_{n/2} has no constant term).
    // Einstein S^4, k = 2:
    let s4 = crate::einstein::EinsteinModel::round_sphere(4).unwrap();
    let jet = einstein_warp(&s4, 6).unwrap();
    let backend = ModeDs::collar(&jet, c(0.0), 4).unwrap();
    let (_, g4) = log_coefficient(&backend, c(1.0), 2).unwrap();
    assert!(g4.norm() < 1e-9, "g_4(1) = {:.3e}", g4.norm());
    // Curved grid jet on T^2, k = 1:
    let chart = TorusChart::square(2, 32).unwrap();
    let ups = GridField::from_fn(&chart, |y| 0.1 * y[0].sin());
    let h = crate::chart::GridMetric::flat(&chart).conformal_rescale(&ups);
    let jet2 = solve_fg(&h, 2).unwrap();
    let ds2 = GridDs::new(&jet2, 2).unwrap();
    let one = GridField::constant(&chart, c(1.0));
    let (_, g2) = log_coefficient(&ds2, one, 1).unwrap();
    assert!(g2.norm() < 1e-9, "g_2(1) = {:.3e}", g2.norm());
}

#[test]
fn einstein_p1_p2_polynomials() {
    let s4 = crate::einstein::EinsteinModel::round_sphere(4).unwrap();
    let jet = einstein_warp(&s4, 8).unwrap();
    let backend = einstein_mode_symbolic(&jet, 6).unwrap();
    let p1 = p_k_apply(&backend, MuPoly::constant(c(1.0)), 1).unwrap();
    let want1 = einstein_yamabe_poly(&s4);
    assert!(p1.sub(&want1).norm() < 1e-10, "P_1 poly {p1:?}");
    let p2 = p_k_apply(&backend, MuPoly::constant(c(1.0)), 2).unwrap();
    let want2 = einstein_paneitz_poly(&s4);
    assert!(p2.sub(&want2).norm() < 1e-9, "P_2 poly {p2:?} vs {want2:?}");
    // On the unit S^4 this is mu^2 + 2 mu.
    assert!((want2.eval(c(3.0)) - c(15.0)).norm() < 1e-12);
}

#[test]
fn flat_reduction_p_k_is_laplacian_power() {
    // P_k f = Delta^k f for k <= 3 on the flat torus.
    let chart = TorusChart::square(2, 16).unwrap();
    let f = GridField::from_fn_complex(&chart, |y| {
        Complex64::new(0.0, y[0]).exp() + Complex64::new(0.0, 2.0 * y[1]).exp() * 0.5
    });
    let h = crate::chart::GridMetric::flat(&chart);
    for k in 1..=3usize {
        let ds = flat_grid_ds(&chart, 2 * k);
        let got = p_k_apply(&ds, f.clone(), k).unwrap();
        let mut want = f.clone();
        for _ in 0..k {
            want = laplace_beltrami(&h, &want).unwrap();
        }
        let dev = got.sub(&want).norm();
        assert!(dev < 1e-9, "k = {k}: dev {dev:.3e}");
    }
}

#[test]
fn q_on_einstein_s4_is_six() {
    let s4 = crate::einstein::EinsteinModel::round_sphere(4).unwrap();
    let jet = einstein_warp(&s4, 6).unwrap();
    let backend = ModeDs::collar(&jet, c(0.0), 4).unwrap();
    let (q, diag) = q_compute(&backend, c(1.0), 1e-2, 1e-8).unwrap();
    assert!((q - c(6.0)).norm() < 1e-8, "Q = {q}, degree {}", diag.degree);
    assert!((einstein_q4_value(&s4) - 6.0).abs() < 1e-12);
}

#[test]
fn q_flat_is_zero() {
    let chart = TorusChart::square(2, 16).unwrap();
    let ds = flat_grid_ds(&chart, 2);
    let one = GridField::constant(&chart, c(1.0));
    let (q, _) = q_compute(&ds, one, 1e-2, 1e-8).unwrap();
    assert!(q.norm() < 1e-10);
}

#[test]
fn exceptional_s_reported() {
    let chart = TorusChart::square(2, 16).unwrap();
    let ds = flat_grid_ds(&chart, 3);
    let f = GridField::from_fn(&chart, |y| y[0].sin());
    // 2s - n = 2 at s = 2, n = 2: j = 2 is exceptional.
    let err = match formal_smooth_solve(&ds, f, c(2.0), 3) {
        Err(e) => e,
        Ok(_) => panic!("expected exceptional-s error"),
    };
    match err {
        crate::error::Error::ExceptionalS { j, .. } => assert_eq!(j, 2),
        e => panic!("wrong error {e}"),
    }
}
