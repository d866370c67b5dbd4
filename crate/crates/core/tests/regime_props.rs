//! Small-parameter ledger: identities, monotonicity and fixed-waist scaling.

use std::f64::consts::PI;

use proptest::prelude::*;
use vortex_sp::regime::{compute_etas, preset, validate, Verdict};
use vortex_sp::{Beam, Constants, Geometry, LgPacket, Observation};

fn obs() -> Observation {
    Observation::new(PI / 2.0, PI / 2.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ledger_identities(rho0 in 1e-8f64..1e-6, ell in 1i32..2000, n in 1u32..500, beta in 0.1f64..0.95) {
        let p = LgPacket::new(rho0, ell, 0, Beam::new(beta).unwrap(), Constants::default()).unwrap();
        let g = Geometry::new(1e-3, 5e-4, n, 4e-4).unwrap();
        let l = compute_etas(&p, &g, &obs()).unwrap();
        let nn = n as f64;
        prop_assert_eq!(l.eta_q2, nn * nn * l.eta_q1);
        prop_assert_eq!(l.eta_mumu, l.eta_mu * l.eta_mu);
        for i in 0..3 {
            prop_assert_eq!(l.eta_mu_q[i], l.eta_mu * l.eta_qj()[i]);
            for j in 0..3 {
                prop_assert_eq!(l.eta_qq[i][j], l.eta_qj()[i] * l.eta_qj()[j]);
            }
        }
    }

    #[test]
    fn monotone_in_n_and_rho(rho0 in 1e-8f64..1e-6, ell in 1i32..2000, n in 1u32..500) {
        let p = LgPacket::new(rho0, ell, 0, Beam::new(0.5).unwrap(), Constants::default()).unwrap();
        let g = Geometry::new(1e-3, 5e-4, n, 4e-4).unwrap();
        let a = compute_etas(&p, &g, &obs()).unwrap();
        let b = compute_etas(&p, &g.with_strips(n + 1), &obs()).unwrap();
        prop_assert!(b.eta_q2 > a.eta_q2);
        let wider = LgPacket { rho0: rho0 * 1.01, ..p };
        let c = compute_etas(&wider, &g, &obs()).unwrap();
        prop_assert!(c.eta_q1 < a.eta_q1);
    }

    #[test]
    fn fixed_waist_scalings(sigma in 1e-9f64..1e-7, ell in 1i32..1000, n in 1u32..300) {
        let beam = Beam::new(0.5).unwrap();
        let c = Constants::default();
        let g = Geometry::new(1e-3, 5e-4, n, 4e-4).unwrap();
        let at = |l: i32| compute_etas(&LgPacket::with_fixed_waist(sigma, l, 0, beam, c).unwrap(), &g, &obs()).unwrap();
        let (a, b) = (at(ell), at(2 * ell));
        let close = |x: f64, y: f64| ((x - y) / y).abs() < 1e-12;
        prop_assert!(close(b.eta_mu / a.eta_mu, 2.0));
        prop_assert!(close(b.eta_q0 / a.eta_q0, 2.0));
        prop_assert!(close(b.eta_q1 / a.eta_q1, 2.0));
        prop_assert!(close(b.eta_q2 / a.eta_q2, 2.0));
    }
}

#[test]
fn single_strip_has_equal_dynamic_parameters() {
    let p = LgPacket::new(3e-7, 1000, 0, Beam::new(0.5).unwrap(), Constants::default()).unwrap();
    let l = compute_etas(&p, &Geometry::new(1e-3, 5e-4, 1, 4e-4).unwrap(), &obs()).unwrap();
    assert_eq!(l.eta_q1, l.eta_q2);
}

#[test]
fn presets_against_validator() {
    let thz = preset("THz").unwrap();
    let l = compute_etas(&thz.packet, &thz.geometry, &thz.observation).unwrap();
    assert_eq!(validate(&l, &thz.packet, &thz.geometry).unwrap().overall, Verdict::Pass);

    let ir = preset("ir").unwrap();
    let g = ir.geometry.with_strips(50);
    let l = compute_etas(&ir.packet, &g, &ir.observation).unwrap();
    let r = validate(&l, &ir.packet, &g).unwrap();
    assert_eq!(r.overall, Verdict::Fail);
    assert_eq!(r.check("strip-limit").unwrap().reason.as_deref(), Some("multipole expansion invalid"));

    for p in [thz, ir] {
        let l = compute_etas(&p.packet, &p.geometry, &p.observation).unwrap();
        assert!(p.packet.rho0 < 1e-2 * l.lambda);
    }
}
