//! Angular distributions at the first Smith-Purcell order in the large-N
//! limit, where the Fejér kernel becomes ω₁δ(ω − ω₁).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::fields::spread_coupling;
use crate::fourier::{fourier_field_engine, CVec3, Derivative};
use crate::packet::LgPacket;
use crate::radiation::current::{current_of, hdot};
use crate::radiation::{amplitudes, Term, TermSet};
use crate::units::{dispersion_factor, omega_g, sp_wavelength, Geometry, Observation};

/// Resonant frequency ω₁ and the factor 1/β − cosΘ.
fn resonance(packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> (f64, f64) {
    let b = packet.beam.beta;
    // Beam and angle are validated on construction, so this cannot fail.
    let w1 = omega_g(geometry.d, 1, b, obs.theta).unwrap_or(f64::NAN);
    (w1, dispersion_factor(b, obs.theta))
}

/// √(1 + β²γ²cos²Φ sin²Θ)
fn root(packet: &LgPacket, obs: &Observation) -> f64 {
    let bg = packet.beam.beta_gamma();
    (1.0 + (bg * obs.phi.cos() * obs.theta.sin()).powi(2)).sqrt()
}

/// Charge term per strip; linear in N, so callers scale by any real N.
fn ee_per_strip(packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> f64 {
    let (w1, _) = resonance(packet, geometry, obs);
    let (b, g) = (packet.beam.beta, packet.beam.gamma());
    let (st, ct) = obs.theta.sin_cos();
    let (sp, cp) = obs.phi.sin_cos();
    let r = root(packet, obs);
    let d = geometry.d;
    let num = ct * ct + 2.0 * b * g * g * cp * cp * ct * st * st + sp * sp * st * st + b * b * g.powi(4) * cp * cp * st.powi(4);
    d * d * w1.powi(3) / (PI * PI) * (geometry.a * PI / d).sin().powi(2) * (-2.0 * w1 * geometry.h / (b * g) * r).exp() * num
        / (b * b * g * g * r * r)
}

pub fn angular_ee(packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> f64 {
    geometry.n_strips as f64 * ee_per_strip(packet, geometry, obs)
}

/// Charge-dipole term. Odd in ℓ and in cosΦ, so it vanishes at Φ = π/2.
pub fn angular_emu(packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> f64 {
    let (w1, _) = resonance(packet, geometry, obs);
    let (b, g) = (packet.beam.beta, packet.beam.gamma());
    let (st, ct) = obs.theta.sin_cos();
    let cp = obs.phi.cos();
    let r = root(packet, obs);
    let d = geometry.d;
    let l_over_m = packet.ell as f64 * packet.constants.lambda_c;
    geometry.n_strips as f64 * l_over_m * d * d * w1.powi(4) / (PI * PI) / (b * b * g * g)
        * (PI * geometry.a / d).sin().powi(2)
        * (-2.0 * w1 * geometry.h / (b * g) * r).exp()
        * cp
        * st
        * (b * g * g * st * st + ct)
        / r
}

fn f2_real(n: f64, a: f64, d: f64) -> f64 {
    3.0 * PI * a * d / (a * PI / d).tan()
        + 3.0 * PI * PI * a * a
        + 3.0 * PI * PI * a * d * (n - 1.0)
        + d * d * (PI * PI * (2.0 * n * n - 3.0 * n + 1.0) - 3.0)
}

/// Coherent quadrupole factor −6π² Re(F F″*)/|F|² at the resonance,
/// ≈ 2π²d²N² for large N.
pub fn f2(n: u32, a: f64, d: f64) -> Result<f64> {
    if n == 0 {
        return Err(param("N", "need at least one strip"));
    }
    if !(a > 0.0 && a < d) {
        return Err(param("a", format!("f2 needs 0 < a < d, got a = {a}, d = {d}")));
    }
    Ok(f2_real(n as f64, a, d))
}

/// Ratio dW_eQ2/dW_ee for a real strip count.
fn eq2_ratio(packet: &LgPacket, geometry: &Geometry, obs: &Observation, n: f64) -> f64 {
    let bg = packet.beam.beta_gamma();
    let lambda1 = sp_wavelength(geometry.d, 1, packet.beam.beta, obs.theta).unwrap_or(f64::NAN);
    spread_coupling(packet) / (3.0 * bg.powi(4)) * f2_real(n, geometry.a, geometry.d) / (lambda1 * lambda1)
}

/// Dynamically enhanced charge-quadrupole term, cubic in N.
pub fn angular_eq2(packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> Result<f64> {
    f2(geometry.n_strips, geometry.a, geometry.d)?;
    Ok(eq2_ratio(packet, geometry, obs, geometry.n_strips as f64) * angular_ee(packet, geometry, obs))
}

/// The charge-quadrupole term with N promoted to a real number, used when
/// the strip count follows N_max(h) continuously.
pub(crate) fn angular_eq2_real_n(packet: &LgPacket, geometry: &Geometry, obs: &Observation, n: f64) -> f64 {
    eq2_ratio(packet, geometry, obs, n) * n * ee_per_strip(packet, geometry, obs)
}

/// G(ω) = ω² Im X(ω) along the observation ray and its ω-derivative, with
/// X = j_e·j_Q1*. The derivative comes from the symbolic tables.
pub fn eq1_profile(packet: &LgPacket, geometry: &Geometry, obs: &Observation, omega: f64) -> Result<(f64, f64)> {
    packet.require_vortex()?;
    let e0 = obs.direction();
    let q = omega * e0[0];
    let y = -geometry.h;
    let f = fourier_field_engine(q, y, omega, packet, Derivative::None)?;
    let fw = fourier_field_engine(q, y, omega, packet, Derivative::Omega)?;
    let fq = fourier_field_engine(q, y, omega, packet, Derivative::Qx)?;
    // Along the ray q = ω e₀ₓ, so d/dω = ∂_ω + e₀ₓ ∂_q.
    let total = |a: &CVec3, b: &CVec3| -> CVec3 { std::array::from_fn(|k| a[k] + b[k] * e0[0]) };
    let je = current_of(&f.e_e, e0);
    let jq = current_of(&f.e_q1, e0);
    let je1 = current_of(&total(&fw.e_e, &fq.e_e), e0);
    let jq1 = current_of(&total(&fw.e_q1, &fq.e_q1), e0);
    let x = hdot(&je, &jq).im;
    let x1 = (hdot(&je1, &jq) + hdot(&je, &jq1)).im;
    let w2 = omega * omega;
    Ok((w2 * x, w2 * x1 + 2.0 * omega * x))
}

/// Charge-quadrupole term from the z-linear field part. Its spectral factor
/// is −(G/c′)∂_ω|F|² with |F|² = S²N F_N, so after integrating by parts only
/// G′ multiplies the δ-function and the single-strip factor S² stays outside
/// the derivative.
pub fn angular_eq1(packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> Result<f64> {
    let (w1, c) = resonance(packet, geometry, obs);
    let (_, dg) = eq1_profile(packet, geometry, obs, w1)?;
    let th1 = w1 * c;
    let single = 4.0 * (geometry.a * PI / geometry.d).sin().powi(2) / (th1 * th1);
    Ok(geometry.n_strips as f64 * w1 / c * dg * single)
}

/// δ-limit of any term whose spectral factor is |F|², i.e. pairs among the
/// charge, dipole and static-quadrupole parts.
pub fn angular_delta(term: Term, packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> Result<f64> {
    let (i, k) = term.pair();
    if i > 2 || k > 2 {
        return Err(param("terms", format!("`{term}` has no |F|² spectral factor")));
    }
    let (w1, c) = resonance(packet, geometry, obs);
    let amp = amplitudes(packet, geometry, obs, w1)?;
    let th1 = w1 * c;
    let single = 4.0 * (geometry.a * PI / geometry.d).sin().powi(2) / (th1 * th1);
    Ok(geometry.n_strips as f64 * w1 * w1 * w1 * amp.current_pair(term) * single)
}

/// Large-N angular value of one term.
pub fn angular_term(term: Term, packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> Result<f64> {
    match term {
        Term::Ee => Ok(angular_ee(packet, geometry, obs)),
        Term::EMu => Ok(angular_emu(packet, geometry, obs)),
        Term::EQ1 => angular_eq1(packet, geometry, obs),
        Term::EQ2 => angular_eq2(packet, geometry, obs),
        Term::EQ0 | Term::MuMu | Term::MuQ0 | Term::Q0Q0 => angular_delta(term, packet, geometry, obs),
        other => Err(param("terms", format!("no large-N angular form for `{other}`"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleVariable {
    Theta,
    Phi,
}

/// Per-term dW/dΩ at g = 1 over a grid of Θ or Φ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularDistribution {
    pub variable: AngleVariable,
    pub grid: Vec<f64>,
    pub terms: BTreeMap<Term, Vec<f64>>,
    pub total: Vec<f64>,
}

/// Terms at one angle, in the order of `enabled`.
pub fn angular_point(
    packet: &LgPacket,
    geometry: &Geometry,
    obs: &Observation,
    enabled: &TermSet,
) -> Result<BTreeMap<Term, f64>> {
    enabled.iter().map(|t| Ok((*t, angular_term(*t, packet, geometry, obs)?))).collect()
}

pub fn angular_distribution(
    packet: &LgPacket,
    geometry: &Geometry,
    base: &Observation,
    variable: AngleVariable,
    grid: &[f64],
    enabled: &TermSet,
) -> Result<AngularDistribution> {
    let mut terms: BTreeMap<Term, Vec<f64>> = enabled.iter().map(|t| (*t, Vec::with_capacity(grid.len()))).collect();
    let mut total = Vec::with_capacity(grid.len());
    for &v in grid {
        let obs = match variable {
            AngleVariable::Theta => Observation::new(v, base.phi)?,
            AngleVariable::Phi => Observation::new(base.theta, v)?,
        };
        let row = angular_point(packet, geometry, &obs, enabled)?;
        total.push(row.values().sum());
        for (t, x) in row {
            terms.get_mut(&t).ok_or_else(|| Error::Search("term bookkeeping".into()))?.push(x);
        }
    }
    Ok(AngularDistribution {
        variable,
        grid: grid.to_vec(),
        terms,
        total,
    })
}
