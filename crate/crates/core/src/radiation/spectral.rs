use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::current::{hdot, surface_current, SurfaceCurrent};
use super::form_factor::{form_factor, FormFactor};
use crate::error::{param, Error, Result};
use crate::fourier::{fourier_field, CVec3, FourierField};
use crate::packet::LgPacket;
use crate::units::{theta1, Geometry, Observation};

/// Interference terms of the radiated intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    #[serde(rename = "ee")]
    Ee,
    #[serde(rename = "emu")]
    EMu,
    #[serde(rename = "eQ0")]
    EQ0,
    #[serde(rename = "eQ1")]
    EQ1,
    #[serde(rename = "eQ2")]
    EQ2,
    #[serde(rename = "mumu")]
    MuMu,
    #[serde(rename = "muQ0")]
    MuQ0,
    #[serde(rename = "muQ1")]
    MuQ1,
    #[serde(rename = "muQ2")]
    MuQ2,
    #[serde(rename = "Q0Q0")]
    Q0Q0,
    #[serde(rename = "Q0Q1")]
    Q0Q1,
    #[serde(rename = "Q0Q2")]
    Q0Q2,
    #[serde(rename = "Q1Q1")]
    Q1Q1,
    #[serde(rename = "Q1Q2")]
    Q1Q2,
    #[serde(rename = "Q2Q2")]
    Q2Q2,
}

pub type TermSet = BTreeSet<Term>;

const ALL: [Term; 15] = [
    Term::Ee,
    Term::EMu,
    Term::EQ0,
    Term::EQ1,
    Term::EQ2,
    Term::MuMu,
    Term::MuQ0,
    Term::MuQ1,
    Term::MuQ2,
    Term::Q0Q0,
    Term::Q0Q1,
    Term::Q0Q2,
    Term::Q1Q1,
    Term::Q1Q2,
    Term::Q2Q2,
];

impl Term {
    pub fn all() -> TermSet {
        ALL.into_iter().collect()
    }

    /// Charge radiation plus its first-order interference terms.
    pub fn leading() -> TermSet {
        [Term::Ee, Term::EMu, Term::EQ0, Term::EQ1, Term::EQ2].into_iter().collect()
    }

    pub fn charge_only() -> TermSet {
        [Term::Ee].into_iter().collect()
    }

    pub fn label(&self) -> &'static str {
        match self {
            Term::Ee => "ee",
            Term::EMu => "emu",
            Term::EQ0 => "eQ0",
            Term::EQ1 => "eQ1",
            Term::EQ2 => "eQ2",
            Term::MuMu => "mumu",
            Term::MuQ0 => "muQ0",
            Term::MuQ1 => "muQ1",
            Term::MuQ2 => "muQ2",
            Term::Q0Q0 => "Q0Q0",
            Term::Q0Q1 => "Q0Q1",
            Term::Q0Q2 => "Q0Q2",
            Term::Q1Q1 => "Q1Q1",
            Term::Q1Q2 => "Q1Q2",
            Term::Q2Q2 => "Q2Q2",
        }
    }

    /// Indices into the amplitude list (e, μ, Q0, Q1, Q2).
    pub fn pair(&self) -> (usize, usize) {
        match self {
            Term::Ee => (0, 0),
            Term::EMu => (0, 1),
            Term::EQ0 => (0, 2),
            Term::EQ1 => (0, 3),
            Term::EQ2 => (0, 4),
            Term::MuMu => (1, 1),
            Term::MuQ0 => (1, 2),
            Term::MuQ1 => (1, 3),
            Term::MuQ2 => (1, 4),
            Term::Q0Q0 => (2, 2),
            Term::Q0Q1 => (2, 3),
            Term::Q0Q2 => (2, 4),
            Term::Q1Q1 => (3, 3),
            Term::Q1Q2 => (3, 4),
            Term::Q2Q2 => (4, 4),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Term {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ALL.into_iter()
            .find(|t| t.label() == s)
            .ok_or_else(|| param("terms", format!("unknown term `{s}`")))
    }
}

/// Everything needed to form the interference terms at one (ω, direction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitudes {
    pub omega: f64,
    pub theta1: f64,
    pub direction: [f64; 3],
    pub field: FourierField,
    pub current: SurfaceCurrent,
    pub form: FormFactor,
    /// Radiation amplitudes j·F_j for e, μ, Q0, Q1, Q2.
    pub a: [CVec3; 5],
}

fn times(v: &CVec3, s: num_complex::Complex64) -> CVec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

pub fn amplitudes(packet: &LgPacket, geometry: &Geometry, obs: &Observation, omega: f64) -> Result<Amplitudes> {
    packet.require_vortex()?;
    geometry.check()?;
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(param("omega", format!("must be positive, got {omega}")));
    }
    let e0 = obs.direction();
    let th1 = theta1(omega, packet.beam.beta, obs.theta);
    // Grating plane y = 0 with the centroid at height h.
    let field = fourier_field(omega * e0[0], -geometry.h, omega, packet)?;
    let current = surface_current(&field, e0);
    let form = form_factor(th1, geometry);
    let j = current.parts();
    let f = [form.f, form.f, form.f, form.f1(), form.f2()];
    let a = std::array::from_fn(|k| times(&j[k], f[k]));
    Ok(Amplitudes {
        omega,
        theta1: th1,
        direction: e0,
        field,
        current,
        form,
        a,
    })
}

/// Pairing rule shared by amplitudes and bare currents.
fn pair_value(v: &[CVec3; 5], i: usize, k: usize) -> f64 {
    if i == k {
        let m: f64 = v[i].iter().map(|c| c.norm_sqr()).sum();
        // Quadrupole self terms carry a factor 2 in the source expansion.
        if i >= 2 {
            2.0 * m
        } else {
            m
        }
    } else {
        2.0 * hdot(&v[i], &v[k]).re
    }
}

impl Amplitudes {
    /// Intensity of one interference term; the ω² comes from the radiation
    /// field E^R = iω e^{ikr}/r ∫ j dz.
    pub fn term(&self, t: Term) -> f64 {
        let (i, k) = t.pair();
        self.omega * self.omega * pair_value(&self.a, i, k)
    }

    /// The same pairing applied to the currents alone, without form factors
    /// and without ω².
    pub fn current_pair(&self, t: Term) -> f64 {
        let (i, k) = t.pair();
        pair_value(&self.current.parts(), i, k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralDecomposition {
    pub omega: f64,
    pub terms: BTreeMap<Term, f64>,
    pub total: f64,
}

impl SpectralDecomposition {
    pub fn from_amplitudes(amp: &Amplitudes, enabled: &TermSet) -> Self {
        let terms: BTreeMap<Term, f64> = enabled.iter().map(|t| (*t, amp.term(*t))).collect();
        let total = terms.values().sum();
        Self {
            omega: amp.omega,
            terms,
            total,
        }
    }

    pub fn get(&self, t: Term) -> Option<f64> {
        self.terms.get(&t).copied()
    }

    /// Every term divided by the number of strips.
    pub fn per_strip(&self, n_strips: u32) -> Self {
        let n = n_strips as f64;
        Self {
            omega: self.omega,
            terms: self.terms.iter().map(|(k, v)| (*k, v / n)).collect(),
            total: self.total / n,
        }
    }
}

pub fn spectral_terms(
    packet: &LgPacket,
    geometry: &Geometry,
    obs: &Observation,
    omega: f64,
    enabled: &TermSet,
) -> Result<SpectralDecomposition> {
    let amp = amplitudes(packet, geometry, obs, omega)?;
    Ok(SpectralDecomposition::from_amplitudes(&amp, enabled))
}

struct Kinematics {
    b: f64,
    g: f64,
    st: f64,
    ct: f64,
    sp: f64,
    cp: f64,
    root: f64,
    decay: f64,
    f2: f64,
    th1: f64,
}

fn kinematics(packet: &LgPacket, geometry: &Geometry, obs: &Observation, omega: f64) -> Kinematics {
    let b = packet.beam.beta;
    let g = packet.beam.gamma();
    let (st, ct) = obs.theta.sin_cos();
    let (sp, cp) = obs.phi.sin_cos();
    let root = (1.0 + (b * g * cp * st).powi(2)).sqrt();
    let h_eff = b * g / omega;
    let th1 = theta1(omega, b, obs.theta);
    Kinematics {
        b,
        g,
        st,
        ct,
        sp,
        cp,
        root,
        decay: (-2.0 * geometry.h / h_eff * root).exp(),
        f2: form_factor(th1, geometry).f.norm_sqr(),
        th1,
    }
}

/// Closed-form charge term, in the normalization of `spectral_terms`.
pub fn dw_ee_closed(packet: &LgPacket, geometry: &Geometry, obs: &Observation, omega: f64) -> f64 {
    let k = kinematics(packet, geometry, obs, omega);
    let (b, g, st, ct, sp, cp) = (k.b, k.g, k.st, k.ct, k.sp, k.cp);
    let num = ct * ct + 2.0 * b * g * g * cp * cp * ct * st * st + sp * sp * st * st + b * b * g.powi(4) * cp * cp * st.powi(4);
    let den = g * g * (1.0 - b * ct).powi(2) * k.root * k.root;
    k.decay * num / den * k.f2 * k.th1 * k.th1
}

/// Closed-form charge-dipole term, in the normalization of `spectral_terms`
/// up to the orientation sign discussed in the README.
pub fn dw_emu_closed(packet: &LgPacket, geometry: &Geometry, obs: &Observation, omega: f64) -> f64 {
    let k = kinematics(packet, geometry, obs, omega);
    let (b, g, st, ct, cp) = (k.b, k.g, k.st, k.ct, k.cp);
    let l_over_m = packet.ell as f64 * packet.constants.lambda_c;
    let num = omega * cp * st * (b * g * g * st * st + ct);
    let den = g * g * (1.0 - b * ct).powi(2) * k.root;
    l_over_m * k.decay * num / den * k.f2 * k.th1 * k.th1
}
