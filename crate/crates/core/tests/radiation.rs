//! Spectral terms: closed-form cross-checks, symmetries and zeros.

mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use vortex_sp::analysis::{delta_weight, fejer_kernel};
use vortex_sp::fourier::{fourier_charge, fourier_dipole, fourier_field_engine, Derivative};
use vortex_sp::quad::Quadrature;
use vortex_sp::radiation::{amplitudes, dw_ee_closed, dw_emu_closed, form_factor, spectral_terms, Term};
use vortex_sp::units::omega_g;
use vortex_sp::{Beam, Constants, Geometry, LgPacket, Observation};

use common::{rel_err, rng};

fn reference_packet(ell: i32) -> LgPacket {
    LgPacket::new(3e-7, ell, 0, Beam::new(0.5).unwrap(), Constants::default()).unwrap()
}

fn reference_geometry(n: u32) -> Geometry {
    Geometry::new(1e-3, 5e-4, n, 3.9e-4).unwrap()
}

fn random_setup(r: &mut impl Rng) -> (LgPacket, Geometry, Observation, f64) {
    let beam = Beam::new(r.gen_range(0.3..0.9)).unwrap();
    let p = LgPacket::new(r.gen_range(1e-7..5e-7), r.gen_range(50..1500), 0, beam, Constants::default()).unwrap();
    let d = r.gen_range(2e-4..2e-3);
    let g = Geometry::new(d, d * r.gen_range(0.2..0.8), r.gen_range(5..80), d * r.gen_range(0.1..0.5)).unwrap();
    let o = Observation::new(r.gen_range(0.3..2.8), r.gen_range(0.1..3.0)).unwrap();
    let w1 = omega_g(d, 1, beam.beta, o.theta).unwrap();
    (p, g, o, w1 * r.gen_range(0.9..1.1))
}

#[test]
fn engine_matches_closed_fourier_forms() {
    let mut r = rng(31);
    for _ in 0..50 {
        let (p, g, o, w) = random_setup(&mut r);
        let q = w * o.direction()[0];
        let eng = fourier_field_engine(q, -g.h, w, &p, Derivative::None).unwrap();
        let e = fourier_charge(q, -g.h, w, &p.beam).unwrap();
        let m = fourier_dipole(q, -g.h, w, &p).unwrap();
        let se = e.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let sm = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for k in 0..3 {
            assert!((eng.e_e[k] - e[k]).norm() <= 1e-10 * se);
            assert!((eng.e_mu[k] - m[k]).norm() <= 1e-10 * sm);
        }
    }
}

#[test]
fn generic_terms_match_closed_spectra() {
    let mut r = rng(37);
    for _ in 0..50 {
        let (p, g, o, w) = random_setup(&mut r);
        let s = spectral_terms(&p, &g, &o, w, &[Term::Ee, Term::EMu].into()).unwrap();
        let ee = s.get(Term::Ee).unwrap();
        assert!(rel_err(ee, dw_ee_closed(&p, &g, &o, w)) < 1e-10);
        // Same magnitude, opposite orientation of the grating normal.
        let emu = s.get(Term::EMu).unwrap();
        assert!(rel_err(-emu, dw_emu_closed(&p, &g, &o, w)) < 1e-10);
    }
}

#[test]
fn charge_current_decays_with_effective_height() {
    let p = reference_packet(1000);
    let o = Observation::new(PI / 2.0, 1.1).unwrap();
    let w = 2.0 * PI / 2e-3;
    let b = p.beam;
    let rate = w / b.beta_gamma() * (1.0 + (b.beta_gamma() * o.direction()[0]).powi(2)).sqrt();
    let je = |h: f64| {
        let a = amplitudes(&p, &reference_geometry(50).with_height(h), &o, w).unwrap();
        a.current.j_e.iter().map(|v| v.norm_sqr()).sum::<f64>()
    };
    let (h1, h2) = (3.9e-4, 4.4e-4);
    let ratio = je(h2) / je(h1);
    assert!(rel_err(ratio, (-2.0 * rate * (h2 - h1)).exp()) < 1e-12);
}

#[test]
fn form_factor_matches_strip_sum() {
    let mut r = rng(41);
    for _ in 0..200 {
        let d = 1e-3;
        let g = Geometry::new(d, d * r.gen_range(0.1..0.9), r.gen_range(1..40), 1e-4).unwrap();
        let th: f64 = r.gen_range(-4e4..4e4);
        let i = Complex64::new(0.0, 1.0);
        let brute: Complex64 = (0..g.n_strips)
            .map(|k| {
                let lo = k as f64 * d;
                (Complex64::from_polar(1.0, th * (lo + g.a)) - Complex64::from_polar(1.0, th * lo)) / (i * th)
            })
            .sum();
        let f = form_factor(th, &g).f;
        let scale = g.n_strips as f64 * g.a;
        assert!((f - brute).norm() <= 1e-12 * scale.max(brute.norm()), "theta1 = {th}");
    }
}

#[test]
fn fejer_kernel_integrates_to_delta_weight() {
    let beam = Beam::new(0.5).unwrap();
    for (n, theta) in [(25u32, PI / 2.0), (100, 1.0), (7, 2.2)] {
        let g = reference_geometry(n);
        let w1 = omega_g(g.d, 1, beam.beta, theta).unwrap();
        let v = Quadrature::rel(1e-11)
            .panels(8 * n as usize)
            .integrate(|w| fejer_kernel(w, theta, &g, &beam), 0.5 * w1, 1.5 * w1)
            .unwrap()
            .value;
        assert!(rel_err(v, delta_weight(theta, &g, &beam)) < 1e-9);
        assert!(rel_err(v, w1) < 1e-9);
    }
}

#[test]
fn ell_reversal_symmetry() {
    let g = reference_geometry(50);
    let o = Observation::new(1.2, 0.7).unwrap();
    let w = 0.99 * omega_g(g.d, 1, 0.5, o.theta).unwrap();
    let plus = spectral_terms(&reference_packet(1000), &g, &o, w, &Term::all()).unwrap();
    let minus = spectral_terms(&reference_packet(-1000), &g, &o, w, &Term::all()).unwrap();
    for t in Term::all() {
        let (a, b) = (plus.get(t).unwrap(), minus.get(t).unwrap());
        let odd = matches!(t, Term::EMu | Term::MuQ0 | Term::MuQ1 | Term::MuQ2);
        let expect = if odd { -a } else { a };
        assert!((b - expect).abs() <= 1e-12 * a.abs(), "{t}: {a} vs {b}");
        assert!(a != 0.0, "{t} vanished");
    }
}

#[test]
fn dipole_term_vanishes_in_vertical_plane() {
    let p = reference_packet(1000);
    let g = reference_geometry(50);
    let o = Observation::new(1.3, PI / 2.0).unwrap();
    let w1 = omega_g(g.d, 1, 0.5, o.theta).unwrap();
    for f in [0.98, 1.0, 1.01] {
        let s = spectral_terms(&p, &g, &o, f * w1, &Term::all()).unwrap();
        assert!(s.get(Term::EMu).unwrap().abs() < 1e-14 * s.get(Term::Ee).unwrap());
    }
}

#[test]
fn quadrupole_zeros_sit_on_form_factor_zeros() {
    let p = reference_packet(1000);
    let n = 50;
    let g = reference_geometry(n);
    let o = Observation::new(PI / 2.0, PI / 2.0).unwrap();
    let w1 = omega_g(g.d, 1, 0.5, o.theta).unwrap();
    let charge_terms = [Term::Ee, Term::EQ0, Term::EQ1, Term::EQ2];
    let at = |w: f64| spectral_terms(&p, &g, &o, w, &Term::all()).unwrap();
    let peak = at(w1);
    for k in [-3i32, -2, -1, 1, 2, 3] {
        let w0 = w1 * (n as i32 + k) as f64 / n as f64;
        let th1 = vortex_sp::units::theta1(w0, 0.5, o.theta);
        assert!(form_factor(th1, &g).f.norm() < 1e-12 * n as f64 * g.a);
        let s = at(w0);
        for t in charge_terms {
            let scale = peak.get(t).unwrap().abs();
            assert!(s.get(t).unwrap().abs() < 1e-9 * scale, "{t} at zero {k}: {}", s.get(t).unwrap());
        }
        assert!(s.get(Term::Q2Q2).unwrap() > 0.0);
        assert!(s.get(Term::Q1Q1).unwrap() > 0.0);
    }
    // Between two adjacent zeros eQ0 keeps one sign: its zeros are the
    // double zeros of |F|².
    let lo = w1 * (n + 1) as f64 / n as f64;
    let hi = w1 * (n + 2) as f64 / n as f64;
    let signs: Vec<f64> = (1..40)
        .map(|i| at(lo + (hi - lo) * i as f64 / 40.0).get(Term::EQ0).unwrap().signum())
        .collect();
    assert!(signs.iter().all(|s| *s == signs[0]));
}
