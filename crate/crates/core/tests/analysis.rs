//! Large-N angular forms against integrals of the spectral line, plus line
//! widths and multipole scalings.

mod common;

use std::f64::consts::PI;

use vortex_sp::analysis::{
    angular_ee, angular_emu, angular_eq1, angular_eq2, angular_term, fwhm, LineOptions, LineShape,
};
use vortex_sp::quad::Quadrature;
use vortex_sp::radiation::{amplitudes, spectral_terms, Term};
use vortex_sp::regime::compute_etas;
use vortex_sp::units::omega_g;
use vortex_sp::{Beam, Constants, Geometry, LgPacket, Observation};

use common::rel_err;

fn packet(ell: i32, rho0: f64) -> LgPacket {
    LgPacket::new(rho0, ell, 0, Beam::new(0.5).unwrap(), Constants::default()).unwrap()
}

/// ∫ dW_t dω over one period of the Fejér kernel around ω₁.
fn line_integral(p: &LgPacket, g: &Geometry, o: &Observation, t: Term) -> (f64, f64) {
    let w1 = omega_g(g.d, 1, p.beam.beta, o.theta).unwrap();
    let q = Quadrature::rel(1e-8).panels(6 * g.n_strips as usize);
    let signed = q
        .integrate(|w| amplitudes(p, g, o, w).unwrap().term(t), 0.5 * w1, 1.5 * w1)
        .unwrap()
        .value;
    let abs = q
        .integrate(|w| amplitudes(p, g, o, w).unwrap().term(t).abs(), 0.5 * w1, 1.5 * w1)
        .unwrap()
        .value;
    (signed, abs)
}

const ANGLES: [(f64, f64); 3] = [(PI / 2.0, PI / 2.0), (1.2, 0.8), (2.0, 1.3)];

#[test]
fn angular_forms_are_line_integrals() {
    let p = packet(1000, 3e-7);
    let g = Geometry::new(1e-3, 5e-4, 400, 3.9e-4).unwrap();
    for (th, ph) in ANGLES {
        let o = Observation::new(th, ph).unwrap();
        let ee = line_integral(&p, &g, &o, Term::Ee).0;
        assert!(rel_err(ee, angular_ee(&p, &g, &o)) < 5e-3, "ee at {th},{ph}");
        let eq2 = line_integral(&p, &g, &o, Term::EQ2).0;
        assert!(rel_err(eq2, angular_eq2(&p, &g, &o).unwrap()) < 1e-2, "eQ2 at {th},{ph}");
        let eq1 = line_integral(&p, &g, &o, Term::EQ1).0;
        assert!(rel_err(eq1, angular_eq1(&p, &g, &o).unwrap()) < 2e-2, "eQ1 at {th},{ph}: {eq1:e} vs {:e}", angular_eq1(&p, &g, &o).unwrap());
        let eq0 = line_integral(&p, &g, &o, Term::EQ0).0;
        assert!(rel_err(eq0, angular_term(Term::EQ0, &p, &g, &o).unwrap()) < 5e-3, "eQ0 at {th},{ph}");
        if ph != PI / 2.0 {
            let emu = line_integral(&p, &g, &o, Term::EMu).0;
            assert!(rel_err(-emu, angular_emu(&p, &g, &o)) < 5e-3, "emu at {th},{ph}");
        }
    }
}

// The net area is the O(1/N) remainder that angular_eq1 keeps; at N = 400
// it is still 1.7% of the L1 norm.
#[test]
fn eq1_line_is_shift_like() {
    let p = packet(1000, 3e-7);
    let g = Geometry::new(1e-3, 5e-4, 800, 3.9e-4).unwrap();
    let o = Observation::new(PI / 2.0, PI / 2.0).unwrap();
    let (signed, abs) = line_integral(&p, &g, &o, Term::EQ1);
    assert!(signed.abs() < 1e-2 * abs, "{signed:e} of {abs:e}");
}

#[test]
fn eq1_magnitude_follows_eta_q1() {
    let p = LgPacket::new(3e-7, 1000, 0, Beam::new(0.5).unwrap(), Constants::new(3.9e-13).unwrap()).unwrap();
    let g = Geometry::new(1e-3, 5e-4, 50, 3.9e-4).unwrap();
    let o = Observation::new(PI / 2.0, PI / 2.0).unwrap();
    let ratio = (angular_eq1(&p, &g, &o).unwrap() / angular_ee(&p, &g, &o)).abs();
    let eta = compute_etas(&p, &g, &o).unwrap().eta_q1;
    assert!(ratio > 0.1 * eta && ratio < 10.0 * eta, "ratio {ratio:e} vs eta_Q1 {eta:e}");
}

#[test]
fn eq2_ratio_grows_as_n_squared() {
    let p = packet(1000, 3e-7);
    let o = Observation::new(PI / 2.0, PI / 2.0).unwrap();
    let r = |n: u32| {
        let g = Geometry::new(1e-3, 5e-4, n, 3.9e-4).unwrap();
        angular_eq2(&p, &g, &o).unwrap() / angular_ee(&p, &g, &o)
    };
    assert!(rel_err(r(2000) / r(1000), 4.0) < 2e-3);
    // The ratio is ℓ²N²(λc/ρ̄₀)² up to a kinematic factor of order one.
    let scale = (1000.0 * 1000.0 * p.constants.lambda_c / p.rho0).powi(2);
    let ratio = r(1000) / scale;
    assert!(ratio > 0.1 && ratio < 100.0, "ratio/scale {ratio}");
}

#[test]
fn azimuthal_asymmetry_in_the_infrared() {
    let p = LgPacket::new(1e-9, 1000, 0, Beam::new(0.5).unwrap(), Constants::default()).unwrap();
    let g = Geometry::new(5e-7, 2.5e-7, 3, 1.2e-7).unwrap();
    for phi in [0.3, 0.8, 1.2] {
        let w = |ph: f64| {
            let o = Observation::new(PI / 2.0 - 0.2, ph).unwrap();
            angular_ee(&p, &g, &o) + angular_emu(&p, &g, &o)
        };
        let (a, b) = (w(phi), w(PI - phi));
        let asym = ((a - b) / (a + b)).abs();
        assert!(asym > 1e-4 && asym < 1e-2, "phi={phi}: {asym:e}");
    }
}

#[test]
fn charge_width_scales_as_one_over_n() {
    let p = packet(1000, 3e-7);
    let o = Observation::new(PI / 2.0, PI / 2.0).unwrap();
    let width = |n: u32| {
        let g = Geometry::new(1e-3, 5e-4, n, 3.9e-4).unwrap();
        let l = LineShape::sample(&p, &g, &o, &Term::charge_only(), &LineOptions::default()).unwrap();
        fwhm(&l, &l).delta_omega
    };
    assert!(rel_err(width(25) / width(50), 2.0) < 2e-3);
}

/// Least-squares fit y ≈ c₁x₁ + c₂x₂ and the largest relative residual.
fn fit2(rows: &[(f64, f64, f64)]) -> f64 {
    let (mut a11, mut a12, mut a22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x1, x2, y) in rows {
        a11 += x1 * x1;
        a12 += x1 * x2;
        a22 += x2 * x2;
        b1 += x1 * y;
        b2 += x2 * y;
    }
    let det = a11 * a22 - a12 * a12;
    let c1 = (b1 * a22 - b2 * a12) / det;
    let c2 = (a11 * b2 - a12 * b1) / det;
    rows.iter()
        .map(|&(x1, x2, y)| ((c1 * x1 + c2 * x2 - y) / y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn spectral_terms_scale_with_their_small_parameters() {
    let g = Geometry::new(1e-3, 5e-4, 50, 3.9e-4).unwrap();
    let o = Observation::new(1.3, 0.9).unwrap();
    let w = 1.003 * omega_g(g.d, 1, 0.5, o.theta).unwrap();
    let mut q0 = Vec::new();
    let mut q1 = Vec::new();
    let mut mu = Vec::new();
    for rho0 in [1e-7, 2e-7, 3e-7, 5e-7] {
        for ell in [100, 400, 1000] {
            let p = packet(ell, rho0);
            let s = spectral_terms(&p, &g, &o, w, &Term::all()).unwrap();
            let ee = s.get(Term::Ee).unwrap();
            let eta1 = (ell as f64 * p.constants.lambda_c / rho0).powi(2);
            q0.push((rho0 * rho0, eta1, s.get(Term::EQ0).unwrap() / ee));
            q1.push((s.get(Term::EQ1).unwrap() / ee, s.get(Term::EQ2).unwrap() / ee, eta1));
            mu.push((s.get(Term::EMu).unwrap() / ee, s.get(Term::MuMu).unwrap() / ee, ell as f64));
        }
    }
    // eQ0 mixes the static ρ̄₀² and the spreading bracket; nothing else.
    assert!(fit2(&q0) < 1e-9);
    // eQ1, eQ2 are pure spreading terms; eμ is linear and μμ quadratic in ℓ.
    for rows in [&q1] {
        let k1 = rows[0].0 / rows[0].2;
        let k2 = rows[0].1 / rows[0].2;
        for &(a, b, e) in rows.iter() {
            assert!(rel_err(a, k1 * e) < 1e-9 && rel_err(b, k2 * e) < 1e-9);
        }
    }
    let (k1, k2) = (mu[0].0 / mu[0].2, mu[0].1 / mu[0].2.powi(2));
    for &(a, b, l) in &mu {
        assert!(rel_err(a, k1 * l) < 1e-9 && rel_err(b, k2 * l * l) < 1e-9);
    }
}
