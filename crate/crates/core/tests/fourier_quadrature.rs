//! Analytic Fourier images against brute-force 2D quadrature of the lab
//! field over (x, t).

mod common;

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use vortex_sp::fields::{field_lab_decomposed_with, FieldOptions};
use vortex_sp::fourier::{fourier_field, CVec3};
use vortex_sp::quad::{Integrand, Quadrature};
use vortex_sp::{Beam, Constants, LgPacket};

use common::extrapolate;

const ANGLES: usize = 256;
const Z1: f64 = 1.0;

/// e, μ, and the quadrupole at z = −Z1, 0, +Z1.
#[derive(Clone, Copy)]
struct Acc([Complex64; 15]);

impl Add for Acc {
    type Output = Acc;
    fn add(self, o: Acc) -> Acc {
        Acc(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}
impl Sub for Acc {
    type Output = Acc;
    fn sub(self, o: Acc) -> Acc {
        Acc(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}
impl Mul<f64> for Acc {
    type Output = Acc;
    fn mul(self, s: f64) -> Acc {
        Acc(self.0.map(|v| v * s))
    }
}
impl Integrand for Acc {
    fn zero() -> Self {
        Acc([Complex64::new(0.0, 0.0); 15])
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

fn packet() -> LgPacket {
    LgPacket::new(0.1, 10, 0, Beam::new(0.6).unwrap(), Constants::new(1e-3).unwrap()).unwrap()
}

/// (1/γβ)∫dx du e^{−i(qx + ωu/γβ)} E(x, y, z, t(u, z)) with a Gaussian
/// damping of width 1/ε.
fn damped(p: &LgPacket, q: f64, y: f64, omega: f64, eps: f64) -> Acc {
    let bg = p.beam.beta_gamma();
    let b = p.beam.beta;
    let ku = omega / bg;
    let mu = (q * q + ku * ku).sqrt();
    let opts = FieldOptions { guard_factor: 0.0 };
    let trig: Vec<(f64, f64)> = (0..ANGLES).map(|i| (2.0 * PI * i as f64 / ANGLES as f64).sin_cos()).collect();
    let radial = |rho: f64| {
        let mut acc = Acc::zero();
        for &(s, c) in &trig {
            let (x, u) = (rho * c, rho * s);
            let phase = Complex64::from_polar(1.0, -(q * x + ku * u));
            for (zi, z) in [-Z1, 0.0, Z1].into_iter().enumerate() {
                let t = -u / bg + z / b;
                let f = field_lab_decomposed_with([x, y, z], t, p, &opts).unwrap();
                for k in 0..3 {
                    if zi == 1 {
                        acc.0[k] += phase * f.e[k];
                        acc.0[3 + k] += phase * f.mu[k];
                    }
                    acc.0[6 + 3 * zi + k] += phase * (f.q_static[k] + f.q_spread[k]);
                }
            }
        }
        acc * (rho * (-(eps * rho).powi(2)).exp() * 2.0 * PI / ANGLES as f64 / bg)
    };
    let r_max = 6.5 / eps;
    let panels = (mu * r_max / PI).ceil() as usize + 4;
    Quadrature::rel(1e-9).panels(panels).integrate(radial, 0.0, r_max).unwrap().value
}

fn brute(p: &LgPacket, q: f64, y: f64, omega: f64) -> Acc {
    let ku = omega / p.beam.beta_gamma();
    let mu = (q * q + ku * ku).sqrt();
    let eps0 = (mu / 12.0).min(0.25 / y.abs());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in 0..4 {
        let eps = eps0 / (1.0 + 0.3 * j as f64);
        xs.push(eps * eps);
        ys.push(damped(p, q, y, omega, eps));
    }
    extrapolate(&xs, &ys)
}

fn assert_close(a: &CVec3, b: &[Complex64], tol: f64, what: &str) {
    let scale = a.iter().chain(b).map(|v| v.norm()).fold(0.0, f64::max);
    for k in 0..3 {
        let e = (a[k] - b[k]).norm() / scale;
        assert!(e < tol, "{what}[{k}]: analytic {} brute {} rel {e:e}", a[k], b[k]);
    }
}

#[test]
fn analytic_transform_matches_quadrature() {
    let p = packet();
    for (q, y, omega) in [(0.8, -1.0, 1.5), (-1.2, -0.8, 2.0)] {
        let f = fourier_field(q, y, omega, &p).unwrap();
        let b = brute(&p, q, y, omega).0;
        assert_close(&f.e_e, &b[0..3], 1e-4, "charge");
        assert_close(&f.e_mu, &b[3..6], 1e-4, "dipole");
        let (m, z0, pl) = (&b[6..9], &b[9..12], &b[12..15]);
        let q1: Vec<Complex64> = (0..3).map(|k| (pl[k] - m[k]) / (2.0 * Z1)).collect();
        let q2: Vec<Complex64> = (0..3).map(|k| (pl[k] + m[k] - z0[k] * 2.0) / (2.0 * Z1 * Z1)).collect();
        assert_close(&f.e_q0, z0, 1e-4, "quadrupole z^0");
        assert_close(&f.e_q1, &q1, 1e-4, "quadrupole z^1");
        assert_close(&f.e_q2, &q2, 1e-4, "quadrupole z^2");
    }
}
