//! Spectral line around the first order: sampling, peak, FWHM and the width
//! between zeros.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::packet::LgPacket;
use crate::radiation::{amplitudes, Term, TermSet};
use crate::units::{omega_g, Geometry, Observation, SPEED_OF_LIGHT};

/// Fewest samples allowed between the two zeros around the peak.
pub const MIN_POINTS_IN_LINE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineOptions {
    /// Half-width of the sampled window in units of ω₁/N.
    pub half_span: f64,
    pub points: usize,
}

impl Default for LineOptions {
    fn default() -> Self {
        Self {
            half_span: 1.2,
            points: 4001,
        }
    }
}

/// Peak and widths of a sampled line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineMetrics {
    pub peak: f64,
    pub peak_value: f64,
    pub fwhm: f64,
    pub half_lo: f64,
    pub half_hi: f64,
    pub zero_lo: f64,
    pub zero_hi: f64,
}

impl LineMetrics {
    pub fn zero_width(&self) -> f64 {
        self.zero_hi - self.zero_lo
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineShape {
    pub omega: Vec<f64>,
    pub terms: BTreeMap<Term, Vec<f64>>,
    pub total: Vec<f64>,
    pub metrics: LineMetrics,
}

/// Samples of every term in `terms` on the window around ω₁; each row is one
/// frequency.
pub fn sample_terms(
    packet: &LgPacket,
    geometry: &Geometry,
    obs: &Observation,
    terms: &TermSet,
    opts: &LineOptions,
) -> Result<(Vec<f64>, Vec<BTreeMap<Term, f64>>)> {
    let grid = line_grid(packet, geometry, obs, opts)?;
    let rows = grid
        .iter()
        .map(|&w| {
            let amp = amplitudes(packet, geometry, obs, w)?;
            Ok(terms.iter().map(|t| (*t, amp.term(*t))).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((grid, rows))
}

pub fn line_grid(packet: &LgPacket, geometry: &Geometry, obs: &Observation, opts: &LineOptions) -> Result<Vec<f64>> {
    if opts.points < 3 {
        return Err(Error::Resolution(format!("need at least 3 samples, got {}", opts.points)));
    }
    let w1 = omega_g(geometry.d, 1, packet.beam.beta, obs.theta)?;
    let half = opts.half_span * w1 / geometry.n_strips as f64;
    let (lo, hi) = (w1 - half, w1 + half);
    let step = (hi - lo) / (opts.points - 1) as f64;
    Ok((0..opts.points).map(|i| lo + step * i as f64).collect())
}

impl LineShape {
    pub fn sample(
        packet: &LgPacket,
        geometry: &Geometry,
        obs: &Observation,
        enabled: &TermSet,
        opts: &LineOptions,
    ) -> Result<Self> {
        let (omega, rows) = sample_terms(packet, geometry, obs, enabled, opts)?;
        Self::from_rows(omega, &rows, enabled)
    }

    /// Build from precomputed rows, keeping only the `enabled` terms.
    pub fn from_rows(omega: Vec<f64>, rows: &[BTreeMap<Term, f64>], enabled: &TermSet) -> Result<Self> {
        let mut terms: BTreeMap<Term, Vec<f64>> = BTreeMap::new();
        let mut total = Vec::with_capacity(rows.len());
        for row in rows {
            let mut sum = 0.0;
            for t in enabled {
                let v = *row
                    .get(t)
                    .ok_or_else(|| Error::Resolution(format!("term `{t}` was not sampled")))?;
                terms.entry(*t).or_default().push(v);
                sum += v;
            }
            total.push(sum);
        }
        let metrics = line_metrics(&omega, &total)?;
        Ok(Self {
            omega,
            terms,
            total,
            metrics,
        })
    }
}

/// FWHM of a line and its change relative to the charge-only line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fwhm {
    pub delta_omega: f64,
    pub narrowing_percent: f64,
}

pub fn fwhm(line: &LineShape, charge: &LineShape) -> Fwhm {
    let full = line.metrics.fwhm;
    Fwhm {
        delta_omega: full,
        narrowing_percent: narrowing_percent(full, charge.metrics.fwhm),
    }
}

pub fn narrowing_percent(full: f64, charge: f64) -> f64 {
    (full - charge) / charge * 100.0
}

/// Angular frequency width in THz, Δω·c/10¹².
pub fn to_thz(delta_omega: f64) -> f64 {
    delta_omega * SPEED_OF_LIGHT / 1e12
}

/// Peak, half-maximum crossings and surrounding zeros of uniformly sampled
/// data.
pub fn line_metrics(x: &[f64], y: &[f64]) -> Result<LineMetrics> {
    let n = y.len();
    if n != x.len() || n < 3 {
        return Err(Error::Resolution("line needs at least 3 samples".into()));
    }
    let ip = y
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > y[best] { i } else { best });
    if ip == 0 || ip == n - 1 {
        return Err(Error::Resolution("peak sits at the edge of the sampled window".into()));
    }
    // Zeros of the line are the neighbouring local minima.
    let mut zl = ip;
    while zl > 0 && y[zl - 1] < y[zl] {
        zl -= 1;
    }
    let mut zr = ip;
    while zr < n - 1 && y[zr + 1] < y[zr] {
        zr += 1;
    }
    if zl == 0 || zr == n - 1 {
        return Err(Error::Resolution("zeros around the peak are not bracketed by the window".into()));
    }
    if zr - zl + 1 < MIN_POINTS_IN_LINE {
        return Err(Error::Resolution(format!(
            "only {} samples between the zeros, need {MIN_POINTS_IN_LINE}",
            zr - zl + 1
        )));
    }
    // Parabola through the three highest samples.
    let (ym, y0, yp) = (y[ip - 1], y[ip], y[ip + 1]);
    let curv = ym - 2.0 * y0 + yp;
    let (off, peak_value) = if curv < 0.0 {
        let off = 0.5 * (ym - yp) / curv;
        (off, y0 - 0.25 * (ym - yp) * off)
    } else {
        (0.0, y0)
    };
    let peak = x[ip] + off * (x[ip + 1] - x[ip]);
    let half = 0.5 * peak_value;
    let left = Pchip::new(&x[zl..=ip], &y[zl..=ip]);
    let right = Pchip::new(&x[ip..=zr], &y[ip..=zr]);
    let half_lo = left.crossing(half)?;
    let half_hi = right.crossing(half)?;
    Ok(LineMetrics {
        peak,
        peak_value,
        fwhm: half_hi - half_lo,
        half_lo,
        half_hi,
        zero_lo: x[zl],
        zero_hi: x[zr],
    })
}

/// Monotone cubic (Fritsch–Carlson) interpolant of a monotone flank.
struct Pchip<'a> {
    x: &'a [f64],
    y: &'a [f64],
    m: Vec<f64>,
}

impl<'a> Pchip<'a> {
    fn new(x: &'a [f64], y: &'a [f64]) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut m = vec![0.0; n];
        if n == 2 {
            m[0] = del[0];
            m[1] = del[0];
            return Self { x, y, m };
        }
        for k in 1..n - 1 {
            if del[k - 1] * del[k] > 0.0 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                m[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
            }
        }
        m[0] = end_slope(h[0], h[1], del[0], del[1]);
        m[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        Self { x, y, m }
    }

    fn eval(&self, k: usize, t: f64) -> f64 {
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[k] + h10 * h * self.m[k] + h01 * self.y[k + 1] + h11 * h * self.m[k + 1]
    }

    /// Abscissa where the interpolant crosses `level`. A run of samples
    /// sitting exactly on the level resolves to its midpoint.
    fn crossing(&self, level: f64) -> Result<f64> {
        let n = self.x.len();
        let above = |v: f64| v > level;
        for k in 0..n {
            if self.y[k] == level {
                let mut j = k;
                while j + 1 < n && self.y[j + 1] == level {
                    j += 1;
                }
                return Ok(0.5 * (self.x[k] + self.x[j]));
            }
            if k + 1 < n && above(self.y[k]) != above(self.y[k + 1]) {
                let (mut a, mut b) = (self.x[k], self.x[k + 1]);
                let fa = self.y[k] - level;
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    let fm = self.eval(k, mid) - level;
                    if (fm > 0.0) == (fa > 0.0) {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                return Ok(0.5 * (a + b));
            }
        }
        Err(Error::Resolution("half maximum not crossed on a flank".into()))
    }
}

/// Shape-preserving three-point end slope.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// One row of the FWHM comparison: charge only, charge with the first-order
/// interference terms, and with every second-order term added.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FwhmRow {
    pub n: u32,
    pub charge: f64,
    pub leading: f64,
    pub full: f64,
    pub leading_percent: f64,
    pub full_percent: f64,
}

pub fn fwhm_row(packet: &LgPacket, geometry: &Geometry, obs: &Observation, opts: &LineOptions) -> Result<FwhmRow> {
    let all = Term::all();
    let (omega, rows) = sample_terms(packet, geometry, obs, &all, opts)?;
    let width = |set: &TermSet| -> Result<f64> {
        let total: Vec<f64> = rows.iter().map(|r| set.iter().map(|t| r[t]).sum()).collect();
        Ok(line_metrics(&omega, &total)?.fwhm)
    };
    let charge = width(&Term::charge_only())?;
    let leading = width(&Term::leading())?;
    let full = width(&all)?;
    Ok(FwhmRow {
        n: geometry.n_strips,
        charge,
        leading,
        full,
        leading_percent: narrowing_percent(leading, charge),
        full_percent: narrowing_percent(full, charge),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(n: usize, sigma: f64) -> (Vec<f64>, Vec<f64>) {
        let x: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        // Gaussian times a window so that it has zeros at ±0.9.
        let y = x
            .iter()
            .map(|v: &f64| (-(v * v) / (2.0 * sigma * sigma)).exp() * (0.81 - v * v).abs())
            .collect();
        (x, y)
    }

    #[test]
    fn fwhm_of_known_shape() {
        let (x, y) = gaussian(2001, 0.1);
        let m = line_metrics(&x, &y).unwrap();
        // Solve the half-maximum equation independently by bisection.
        let f = |v: f64| (-(v * v) / 0.02).exp() * (0.81 - v * v) - 0.5 * 0.81;
        let (mut a, mut b) = (0.0, 0.5);
        for _ in 0..100 {
            let c = 0.5 * (a + b);
            if f(c) > 0.0 {
                a = c
            } else {
                b = c
            }
        }
        assert!((m.fwhm - 2.0 * a).abs() < 1e-8);
        assert!((m.zero_width() - 1.8).abs() < 2e-3);
        assert!(m.fwhm <= m.zero_width());
        assert!(m.peak.abs() < 1e-12);
    }

    #[test]
    fn edge_peak_is_rejected() {
        let x: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let y = x.clone();
        assert!(matches!(line_metrics(&x, &y), Err(Error::Resolution(_))));
    }

    #[test]
    fn coarse_line_is_rejected() {
        let (x, y) = gaussian(41, 0.1);
        assert!(matches!(line_metrics(&x, &y), Err(Error::Resolution(_))));
    }

    #[test]
    fn plateau_resolves_to_midpoint() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [0.0, 0.5, 0.5, 1.0];
        let p = Pchip::new(&x, &y);
        assert_eq!(p.crossing(0.5).unwrap(), 1.5);
    }

    #[test]
    fn pchip_stays_monotone() {
        let x = [0.0, 1.0, 2.0, 3.0, 4.0];
        let y = [0.0, 0.01, 0.02, 5.0, 5.01];
        let p = Pchip::new(&x, &y);
        let mut last = -1.0;
        for k in 0..4 {
            for i in 0..=50 {
                let v = p.eval(k, x[k] + i as f64 / 50.0);
                assert!(v >= last - 1e-15);
                last = v;
            }
        }
    }
}
