//! Impact parameter that maximises the charge-quadrupole term when the
//! grating is as long as the packet spreading allows.

use serde::Serialize;

use super::angular::angular_eq2_real_n;
use crate::error::{Error, Result};
use crate::packet::{n_max_continuous, LgPacket};
use crate::units::{h_eff, omega_g, Geometry, Observation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalImpact {
    pub h_numeric: f64,
    /// (3/2)h_eff
    pub h_closed: f64,
    pub h_eff: f64,
}

/// h³e^{−2h/h_eff}, the large-N_max shape of the profile.
pub fn impact_shape(h: f64, h_eff: f64) -> f64 {
    h.powi(3) * (-2.0 * h / h_eff).exp()
}

/// angular_eQ2 at height h with N = N_max(h) taken as a real number.
pub fn eq2_at_n_max(packet: &LgPacket, geometry: &Geometry, obs: &Observation, h: f64) -> Result<f64> {
    let g = geometry.with_height(h);
    let n = n_max_continuous(packet, &g)?;
    Ok(angular_eq2_real_n(packet, &g, obs, n))
}

/// Effective impact parameter βγ/ω₁ at the observation angle.
pub fn h_eff_at(packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> Result<f64> {
    Ok(h_eff(omega_g(geometry.d, 1, packet.beam.beta, obs.theta)?, &packet.beam))
}

pub fn optimal_impact(packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> Result<OptimalImpact> {
    let he = h_eff_at(packet, geometry, obs)?;
    let lo = (0.1 * he).max(1.001 * packet.rho0);
    let hi = 10.0 * he;
    if lo >= hi {
        return Err(Error::Search("packet radius exceeds the searchable impact range".into()));
    }
    let f = |h: f64| eq2_at_n_max(packet, geometry, obs, h);
    // Coarse logarithmic grid, then golden section on the bracket.
    let pts = 400;
    let at = |i: usize| lo * (hi / lo).powf(i as f64 / (pts - 1) as f64);
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..pts {
        let v = f(at(i))?;
        if v > best.1 {
            best = (i, v);
        }
    }
    if best.0 == 0 || best.0 == pts - 1 {
        return Err(Error::Search("impact profile has no interior maximum".into()));
    }
    let (mut a, mut b) = (at(best.0 - 1), at(best.0 + 1));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-10 * he {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(OptimalImpact {
        h_numeric: 0.5 * (a + b),
        h_closed: 1.5 * he,
        h_eff: he,
    })
}
