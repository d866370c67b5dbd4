//! Grating form factor F(Θ₁) = Σ_k ∫_{kd}^{kd+a} e^{izΘ₁} dz and its first
//! two derivatives.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::units::Geometry;

/// F and the z-weighted sums F1 = Σ∫z e^{izΘ₁} = −iF′, F2 = Σ∫z² e^{izΘ₁} = −F″.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormFactor {
    pub f: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

impl FormFactor {
    pub fn f1(&self) -> Complex64 {
        Complex64::new(0.0, -1.0) * self.d1
    }

    pub fn f2(&self) -> Complex64 {
        -self.d2
    }

    /// F_j for j = 0, 1, 2.
    pub fn weighted(&self, j: usize) -> Complex64 {
        match j {
            0 => self.f,
            1 => self.f1(),
            2 => self.f2(),
            _ => panic!("form factor weights exist for j <= 2"),
        }
    }
}

// Below these the closed forms lose digits to cancellation and the series
// take over.
const SINC_SERIES: f64 = 1e-2;
const DIRICHLET_SERIES: f64 = 1e-2;

/// sin v / v and its first two derivatives.
fn sinc3(v: f64) -> (f64, f64, f64) {
    if v.abs() < SINC_SERIES {
        let v2 = v * v;
        (
            1.0 - v2 / 6.0 + v2 * v2 / 120.0 - v2 * v2 * v2 / 5040.0,
            v * (-1.0 / 3.0 + v2 / 30.0 - v2 * v2 / 840.0),
            -1.0 / 3.0 + v2 / 10.0 - v2 * v2 / 168.0,
        )
    } else {
        let (s, c) = v.sin_cos();
        let f = s / v;
        let f1 = (v * c - s) / (v * v);
        let f2 = -f - 2.0 * f1 / v;
        (f, f1, f2)
    }
}

/// D(x) = sin(Nx)/sin(x) and its first two derivatives.
pub(crate) fn dirichlet3(n: u32, x: f64) -> (f64, f64, f64) {
    let nf = n as f64;
    let k = (x / PI).round();
    let u = x - k * PI;
    if (nf * u).abs() < DIRICHLET_SERIES {
        // D = Σ cos(m u) over m = N−1, N−3, …, 1−N; expand with exact power sums.
        let n2 = nf * nf;
        let s0 = nf;
        let s2 = nf * (n2 - 1.0) / 3.0;
        let s4 = nf * (n2 - 1.0) * (3.0 * n2 - 7.0) / 15.0;
        let s6 = nf * (n2 - 1.0) * (3.0 * n2 * n2 - 18.0 * n2 + 31.0) / 21.0;
        let u2 = u * u;
        let sign = if (k as i64 * (n as i64 - 1)) % 2 == 0 { 1.0 } else { -1.0 };
        let d0 = s0 - s2 * u2 / 2.0 + s4 * u2 * u2 / 24.0 - s6 * u2 * u2 * u2 / 720.0;
        let d1 = -s2 * u + s4 * u2 * u / 6.0 - s6 * u2 * u2 * u / 120.0;
        let d2 = -s2 + s4 * u2 / 2.0 - s6 * u2 * u2 / 24.0;
        (sign * d0, sign * d1, sign * d2)
    } else {
        let (sx, cx) = x.sin_cos();
        let (sn, cn) = (nf * x).sin_cos();
        let d = sn / sx;
        let cot = cx / sx;
        let d1 = nf * cn / sx - d * cot;
        // D'' = −N²D − 2cot·D' + D (from sin x·D = sin Nx differentiated twice)
        let d2 = -nf * nf * d - 2.0 * cot * d1 + d;
        (d, d1, d2)
    }
}

pub fn form_factor(theta1: f64, g: &Geometry) -> FormFactor {
    let (a, d, n) = (g.a, g.d, g.n_strips);
    // F = S(Θ) D(dΘ/2) e^{icΘ} with S = a·sinc(aΘ/2)
    let (s0, s1, s2) = sinc3(0.5 * a * theta1);
    let (s, s_1, s_2) = (a * s0, a * 0.5 * a * s1, a * 0.25 * a * a * s2);
    let (dd, dd1, dd2) = dirichlet3(n, 0.5 * d * theta1);
    let (dd1, dd2) = (0.5 * d * dd1, 0.25 * d * d * dd2);
    let p = s * dd;
    let p1 = s_1 * dd + s * dd1;
    let p2 = s_2 * dd + 2.0 * s_1 * dd1 + s * dd2;
    let c = 0.5 * (a + (n as f64 - 1.0) * d);
    let ph = Complex64::from_polar(1.0, c * theta1);
    let ic = Complex64::new(0.0, c);
    FormFactor {
        f: ph * p,
        d1: ph * (p1 + ic * p),
        d2: ph * (p2 + 2.0 * ic * p1 + ic * ic * p),
    }
}
