//! Adaptive Gauss-Kronrod (7/15) quadrature over real or complex integrands.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that the integrator can accumulate.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<T: Integrand, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod = kronrod + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let k = kronrod * h;
    let err = (k - gauss * h).magnitude();
    (k, err)
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_panels: usize,
    pub max_segments: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            initial_panels: 1,
            max_segments: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub segments: usize,
}

impl Quadrature {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn panels(self, initial_panels: usize) -> Self {
        Self {
            initial_panels: initial_panels.max(1),
            ..self
        }
    }

    pub fn integrate<T, F>(&self, mut f: F, a: f64, b: f64) -> Result<Estimate<T>>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Parameter {
                name: "interval",
                reason: format!("bounds must be finite, got [{a}, {b}]"),
            });
        }
        let mut heap = BinaryHeap::new();
        let mut total = T::zero();
        let mut total_err = 0.0;
        let n0 = self.initial_panels;
        for i in 0..n0 {
            let lo = a + (b - a) * i as f64 / n0 as f64;
            let hi = a + (b - a) * (i + 1) as f64 / n0 as f64;
            let (value, err) = gk15(&mut f, lo, hi);
            total = total + value;
            total_err += err;
            heap.push(Segment { a: lo, b: hi, value, err });
        }
        while total_err > self.abs_tol.max(self.rel_tol * total.magnitude()) {
            if heap.len() >= self.max_segments {
                return Err(Error::Resolution(format!(
                    "quadrature on [{a:e}, {b:e}] stalled at error {total_err:e} after {} segments",
                    heap.len()
                )));
            }
            let worst = heap.pop().expect("heap holds at least one segment");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Interval collapsed to machine resolution; accept what we have.
                heap.push(worst);
                break;
            }
            let (v1, e1) = gk15(&mut f, worst.a, mid);
            let (v2, e2) = gk15(&mut f, mid, worst.b);
            total = total - worst.value + v1 + v2;
            total_err += e1 + e2 - worst.err;
            heap.push(Segment { a: worst.a, b: mid, value: v1, err: e1 });
            heap.push(Segment { a: mid, b: worst.b, value: v2, err: e2 });
        }
        // Re-sum to shed accumulated rounding from the running updates.
        let mut value = T::zero();
        let mut error = 0.0;
        let segments = heap.len();
        for s in heap {
            value = value + s.value;
            error += s.err;
        }
        Ok(Estimate { value, error, segments })
    }
}
