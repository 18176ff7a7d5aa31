use num_complex::Complex64;

use super::*;
use crate::reference;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

#[test]
fn yukawa_b0_at_one() {
    // b_0^+(1) = 1/Gamma(3) = 1/2
    let v = yukawa_b(1.0, c(1.0), 0);
    assert!(close(v, c(0.5), 1e-13));
}

#[test]
fn yukawa_unitary_on_imaginary_axis() {
    for t in [0.5, 1.0, 2.0] {
        let s = Complex64::new(0.0, t);
        let sv = yukawa_s(s).unwrap();
        assert!(
            (sv.norm() - 1.0).abs() < 1e-10,
            "|S(i{t})| = {}",
            sv.norm()
        );
    }
}

#[test]
fn yukawa_residue_at_half() {
    // Res_{s=1/2} S(s) = +1/2
    let f = |z: Complex64| yukawa_s(z);
    let rec = contour_residue(&f, c(0.5), 0.05, 32).unwrap();
    assert!(close(rec.residue, c(0.5), 1e-8), "residue {}", rec.residue);
}

#[test]
fn yukawa_series_vs_ode() {
    let prob = yukawa_problem();
    for &(re, im) in &[(0.37, 0.0), (0.81, 0.6), (1.13, -0.4), (0.26, 1.9)] {
        let s = Complex64::new(re, im);
        let sc = scattering_value(&prob, s).unwrap();
        let closed = yukawa_s(s).unwrap();
        assert!(
            (sc.s_value - closed).norm() < 1e-10 * closed.norm().max(1.0),
            "s = {s}: ode {} vs series {}",
            sc.s_value,
            closed
        );
    }
}

#[test]
fn yukawa_frobenius_matches_b_coefficients() {
    let s = c(0.43);
    let prob = yukawa_problem();
    let (f_branch, g_branch) = prob.frobenius_basis(s, 8).unwrap();
    // x^{-s} branch: coefficients b_j^-(s)/b_0^-(s)
    let b0m = yukawa_b(-1.0, s, 0);
    let b0p = yukawa_b(1.0, s, 0);
    for j in 0..=8usize {
        let want_m = yukawa_b(-1.0, s, j) / b0m;
        let got_m = f_branch.plain_coeff(j).unwrap();
        assert!(close(*got_m, want_m, 1e-12), "b^- at {j}");
        let want_p = yukawa_b(1.0, s, j) / b0p;
        let got_p = g_branch.plain_coeff(j).unwrap();
        assert!(close(*got_p, want_p, 1e-12), "b^+ at {j}");
    }
}

#[test]
fn flat_frobenius_matches_bessel_recurrence() {
    // x^s branch on the flat collar is x^{n/2} I_nu(|xi| x) normalised:
    // even coefficients from the Bessel recurrence.
    let n = 2usize;
    let s = c(1.37);
    let model = CollarModel::flat(n, 1.0).unwrap();
    let mode = Mode::Fourier(vec![2, 1]);
    let q = mode.mu().sqrt();
    let prob = model.capped_problem(&mode);
    let (_, g_branch) = prob.frobenius_basis(s, 12).unwrap();
    let nu = s.re - n as f64 / 2.0;
    let want = reference::bessel_branch_coeffs(nu, q, 6);
    for m in 0..=6usize {
        let got = g_branch.plain_coeff(2 * m).unwrap();
        assert!(
            (got - c(want[2 * m])).norm() < 1e-11 * want[2 * m].abs().max(1.0),
            "coeff 2m = {}: got {got}, want {}",
            2 * m,
            want[2 * m]
        );
    }
    // odd coefficients vanish
    for m in [1usize, 3, 5] {
        assert!(g_branch.plain_coeff(m).unwrap().norm() < 1e-13);
    }
}

#[test]
fn flat_zero_mode_is_two_exponent_algebra() {
    // xi = 0: exact solutions x^{n-s}, x^s; S determined purely by the cap.
    let n = 2usize;
    let cap = 0.8;
    let model = CollarModel::flat(n, cap).unwrap();
    let mode = Mode::Fourier(vec![0, 0]);
    let prob = model.capped_problem(&mode);
    let s = c(1.62);
    let (u1, u2) = prob.frobenius_basis(s, 8).unwrap();
    for j in 1..=8usize {
        assert!(u1.plain_coeff(j).unwrap().norm() < 1e-14);
        assert!(u2.plain_coeff(j).unwrap().norm() < 1e-14);
    }
    let sc = scattering_value(&prob, s).unwrap();
    let want = reference::flat_zero_mode_cap_ratio(n, s, cap);
    assert!(close(sc.s_value, want, 1e-10), "{} vs {want}", sc.s_value);
}

#[test]
fn flat_mode_approaches_half_space_symbol() {
    // As |xi| x_cap grows the Dirichlet cap becomes invisible and S(s)
    // approaches 2^{n-2s} Gamma(n/2-s)/Gamma(s-n/2) |xi|^{2s-n}.
    let n = 2usize;
    let model = CollarModel::flat(n, 1.0).unwrap();
    let mode = Mode::Fourier(vec![8, 0]);
    let prob = model.capped_problem(&mode);
    let s = c(1.733);
    let sc = scattering_value(&prob, s).unwrap();
    let xi = mode.mu().sqrt();
    let e = c(n as f64) - 2.0 * s;
    let want = (e * c((2.0f64).ln())).exp() * gamma::gamma(c(n as f64 / 2.0) - s)
        / gamma::gamma(s - c(n as f64 / 2.0))
        * ((2.0 * s - c(n as f64)) * xi.ln()).exp();
    let rel = (sc.s_value - want).norm() / want.norm();
    assert!(rel < 1e-6, "relative deviation {rel:.3e}");
}

#[test]
fn flat_residue_theorem_one() {
    // n = 2, xi = (1,0), s0 = n/2 + 1 = 2: residue = -c_1 |xi|^2 = +1/4.
    let model = CollarModel::flat(2, 1.0).unwrap();
    let mode = Mode::Fourier(vec![1, 0]);
    let rec = residue_extract(&model, &mode, c(2.0), 0.05, 32, false).unwrap();
    assert!(close(rec.residue, c(0.25), 1e-7), "residue {}", rec.residue);
}

#[test]
fn residue_cap_invariance() {
    let mode = Mode::Fourier(vec![1, 0]);
    let mut values = Vec::new();
    for cap in [0.5, 0.75, 1.0] {
        let model = CollarModel::flat(2, cap).unwrap();
        let rec = residue_extract(&model, &mode, c(2.0), 0.05, 32, false).unwrap();
        values.push(rec.residue);
    }
    for w in values.windows(2) {
        assert!((w[0] - w[1]).norm() < 1e-7, "cap drift {:?}", values);
    }
}

#[test]
fn schwartz_reflection_symmetry() {
    // S(conj s)* = S(s) for real-analytic models.
    let model = CollarModel::flat(2, 1.0).unwrap();
    let prob = model.capped_problem(&Mode::Fourier(vec![1, 0]));
    let s = Complex64::new(1.3, 0.45);
    let a = scattering_value(&prob, s).unwrap().s_value;
    let b = scattering_value(&prob, s.conj()).unwrap().s_value.conj();
    assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
}

#[test]
fn odd_warp_residue_value() {
    // a(x) = 1 + b x: residue at s0 = n/2 + 1/2 equals -n(n-1) b / 4.
    let n = 2usize;
    let b = 0.1;
    let a_expr = crate::expr::parse_expression("1+0.1*x").unwrap();
    let model = CollarModel::from_warp_expr(n, &a_expr, 1.0, 8).unwrap();
    let mode = Mode::Fourier(vec![1, 0]);
    let s0 = c(n as f64 / 2.0 + 0.5);
    let rec = residue_extract(&model, &mode, s0, 0.05, 32, false).unwrap();
    let want = -(n as f64) * (n as f64 - 1.0) * b / 4.0;
    assert!(
        (rec.residue - c(want)).norm() < 1e-6,
        "odd-warp residue {} vs {want}",
        rec.residue
    );
}

#[test]
fn even_warp_odd_residues_vanish() {
    let n = 2usize;
    let a_expr = crate::expr::parse_expression("1+0.1*x^2").unwrap();
    let model = CollarModel::from_warp_expr(n, &a_expr, 1.0, 8).unwrap();
    let mode = Mode::Fourier(vec![1, 0]);
    for l in [1usize, 3] {
        let s0 = c(n as f64 / 2.0 + l as f64 / 2.0);
        let rec = residue_extract(&model, &mode, s0, 0.05, 32, false).unwrap();
        assert!(
            rec.residue.norm() < 1e-8,
            "even-warp residue at l = {l}: {}",
            rec.residue.norm()
        );
    }
}

#[test]
fn pairing_residual_on_critical_line() {
    let model = CollarModel::flat(2, 1.0).unwrap();
    let prob = model.capped_problem(&Mode::Fourier(vec![1, 0]));
    let s = Complex64::new(1.0, 0.7);
    let r = pairing_residual(&prob, s).unwrap();
    assert!(r < 1e-6, "pairing residual {r:.3e}");
}

#[test]
fn energy_identity_flat_and_warped() {
    let s = c(1.7);
    let flat = CollarModel::flat(2, 1.0).unwrap();
    let rep = energy_identity(&flat.capped_problem(&Mode::Fourier(vec![1, 0])), s).unwrap();
    assert!(rep.energy_residual < 1e-6, "flat energy {rep:?}");
    assert!(rep.symmetry_residual < 1e-6);

    let a_expr = crate::expr::parse_expression("1+0.05*x^2").unwrap();
    let warped = CollarModel::from_warp_expr(2, &a_expr, 1.0, 8).unwrap();
    let rep2 = energy_identity(&warped.capped_problem(&Mode::Fourier(vec![1, 0])), s).unwrap();
    assert!(rep2.energy_residual < 1e-6, "warped energy {rep2:?}");
}

#[test]
fn complete_einstein_energy_matches_scattering() {
    // The renormalized-energy identity pf E = -n S_0(s) per radial mode.
    let s4 = crate::einstein::EinsteinModel::round_sphere(4).unwrap();
    let model = CompleteEinsteinModel::new(&s4).unwrap();
    let s = c(3.9);
    let (e, s0) = pf_energy_complete(&model, s).unwrap();
    let want = -(4.0) * s0.re;
    assert!(
        (e - want).abs() < 1e-6 * want.abs().max(1.0),
        "pf energy {e} vs -n S_0 = {want}"
    );
}

#[test]
fn eigenvalue_collision_is_reported_or_avoided() {
    // A clean configuration must not trip the collision detector.
    let model = CollarModel::flat(2, 1.0).unwrap();
    let prob = model.capped_problem(&Mode::Fourier(vec![1, 0]));
    let sc = scattering_value(&prob, c(1.51)).unwrap();
    assert!(sc.cond < 1e8);
}
