//! Dimensionless parameters of the multipole expansion, the inequalities
//! that keep it valid, and two baseline parameter sets.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::packet::{ell_max, n_max_continuous, LgPacket};
use crate::units::{sp_wavelength, Beam, Constants, Geometry, Observation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaLedger {
    /// Emitted wavelength the parameters refer to.
    pub lambda: f64,
    pub h_eff: f64,
    /// λc/λ, used by every verdict.
    pub eta_q: f64,
    /// ω/ε with ε the kinetic energy; informational only.
    pub eta_q_recoil: f64,
    pub eta_mu: f64,
    pub eta_q0: f64,
    pub eta_q1: f64,
    pub eta_q2: f64,
    pub eta_mumu: f64,
    pub eta_mu_q: [f64; 3],
    pub eta_qq: [[f64; 3]; 3],
}

impl EtaLedger {
    pub fn eta_qj(&self) -> [f64; 3] {
        [self.eta_q0, self.eta_q1, self.eta_q2]
    }

    /// The fifteen parameters in table order.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let q = &self.eta_qq;
        vec![
            ("eta_q", self.eta_q),
            ("eta_mu", self.eta_mu),
            ("eta_Q0", self.eta_q0),
            ("eta_Q1", self.eta_q1),
            ("eta_Q2", self.eta_q2),
            ("eta_mumu", self.eta_mumu),
            ("eta_muQ0", self.eta_mu_q[0]),
            ("eta_muQ1", self.eta_mu_q[1]),
            ("eta_muQ2", self.eta_mu_q[2]),
            ("eta_Q00", q[0][0]),
            ("eta_Q01", q[0][1]),
            ("eta_Q02", q[0][2]),
            ("eta_Q11", q[1][1]),
            ("eta_Q12", q[1][2]),
            ("eta_Q22", q[2][2]),
        ]
    }
}

/// Parameters at the first-order wavelength for the observation angle.
pub fn compute_etas(packet: &LgPacket, geometry: &Geometry, obs: &Observation) -> Result<EtaLedger> {
    let lambda = sp_wavelength(geometry.d, 1, packet.beam.beta, obs.theta)?;
    Ok(compute_etas_at(packet, geometry, 2.0 * PI / lambda))
}

/// Parameters at an explicit frequency ω.
pub fn compute_etas_at(packet: &LgPacket, geometry: &Geometry, omega: f64) -> EtaLedger {
    let lc = packet.constants.lambda_c;
    let lambda = 2.0 * PI / omega;
    let h_eff = packet.beam.beta_gamma() / omega;
    let ell = packet.abs_ell();
    let eta_q = lc / lambda;
    let eta_mu = ell * eta_q;
    let eta_q0 = (packet.rho0 / h_eff).powi(2);
    let eta_q1 = (ell * lc / packet.rho0).powi(2);
    let n = geometry.n_strips as f64;
    let eta_q2 = n * n * eta_q1;
    let qs = [eta_q0, eta_q1, eta_q2];
    EtaLedger {
        lambda,
        h_eff,
        eta_q,
        eta_q_recoil: omega * lc / (packet.beam.gamma() - 1.0),
        eta_mu,
        eta_q0,
        eta_q1,
        eta_q2,
        eta_mumu: eta_mu * eta_mu,
        eta_mu_q: qs.map(|q| eta_mu * q),
        eta_qq: qs.map(|a| qs.map(|b| a * b)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Warn,
    Fail,
}

/// Numeric meaning of "≪" and "≲".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    /// a ≪ b passes below this ratio and fails at or above 1.
    #[serde(default = "default_much_less")]
    pub much_less: f64,
    /// a ≲ b passes below 1 and fails at or above this ratio.
    #[serde(default = "default_less_sim")]
    pub less_sim: f64,
}

fn default_much_less() -> f64 {
    0.1
}

fn default_less_sim() -> f64 {
    3.0
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            much_less: default_much_less(),
            less_sim: default_less_sim(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Relation {
    MuchLess,
    LessSim,
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub inequality: String,
    /// Left side over right side.
    pub ratio: f64,
    pub verdict: Verdict,
    /// Advisory checks never fail; a violation is reported as a warning.
    pub advisory: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Fail if any hard check fails, pass otherwise.
    pub overall: Verdict,
    pub warnings: usize,
    /// Largest first-order correction.
    pub dominant: String,
    pub n_max: f64,
    pub ell_max: u64,
}

impl ValidationReport {
    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Builder<'a> {
    th: &'a Thresholds,
    checks: Vec<Check>,
}

impl Builder<'_> {
    fn add(&mut self, name: &str, inequality: &str, lhs: f64, rhs: f64, rel: Relation, advisory: bool, reason: &str) {
        let ratio = lhs / rhs;
        let mut verdict = match rel {
            Relation::MuchLess if ratio < self.th.much_less => Verdict::Pass,
            Relation::MuchLess if ratio < 1.0 => Verdict::Warn,
            Relation::LessSim if ratio < 1.0 => Verdict::Pass,
            Relation::LessSim if ratio < self.th.less_sim => Verdict::Warn,
            Relation::AtMost if ratio <= 1.0 => Verdict::Pass,
            _ => Verdict::Fail,
        };
        if advisory && verdict == Verdict::Fail {
            verdict = Verdict::Warn;
        }
        self.checks.push(Check {
            name: name.to_string(),
            inequality: inequality.to_string(),
            ratio,
            verdict,
            advisory,
            reason: (verdict != Verdict::Pass).then(|| reason.to_string()),
        });
    }
}

pub fn validate(ledger: &EtaLedger, packet: &LgPacket, geometry: &Geometry) -> Result<ValidationReport> {
    validate_with(ledger, packet, geometry, &Thresholds::default())
}

pub fn validate_with(
    ledger: &EtaLedger,
    packet: &LgPacket,
    geometry: &Geometry,
    thresholds: &Thresholds,
) -> Result<ValidationReport> {
    use Relation::*;
    let mut b = Builder {
        th: thresholds,
        checks: Vec::new(),
    };
    let l = ledger;
    let lc = packet.constants.lambda_c;
    let ell = packet.abs_ell();
    let lmax_real = (l.lambda / lc).sqrt();
    let lmax = ell_max(l.lambda, &packet.constants);
    let n = geometry.n_strips as f64;
    let nmax = n_max_continuous(packet, geometry)?;

    b.add("recoil-vs-dipole", "eta_q << eta_mu", l.eta_q, l.eta_mu, MuchLess, false, "quantum recoil not small against the dipole term");
    for (j, q) in l.eta_qj().iter().enumerate() {
        let name = format!("recoil-vs-Q{j}");
        let ineq = format!("eta_q << eta_Q{j}");
        b.add(&name, &ineq, l.eta_q, *q, MuchLess, false, "quantum recoil not small against the quadrupole term");
    }
    b.add("ell-max", "|ell| <= ell_max = sqrt(lambda/lambda_c)", ell, lmax as f64, AtMost, false, "OAM above ell_max, dipole self term exceeds the recoil");
    b.add("strip-limit", "N <= N_max", n, nmax, AtMost, false, "multipole expansion invalid");
    // Packet radius when it leaves the grating at t = Nd/β.
    let t_exit = n * geometry.d / packet.beam.beta;
    let rho_exit = packet.rho_bar(t_exit)?;
    b.add("packet-clearance", "rho(t_exit) < h", rho_exit, geometry.h, AtMost, false, "packet touches the grating before leaving it");

    let x = packet.rho0 / l.h_eff;
    b.add("rho-window-lower", "1/ell_max << rho0/h_eff", 1.0 / lmax_real, x, MuchLess, false, "packet too narrow for the Q0 correction to exceed recoil");
    b.add("rho-window-upper", "rho0/h_eff <~ ell_max^(-1/2)", x, lmax_real.powf(-0.5), LessSim, true, "Q0 self term exceeds recoil");
    b.add("ell-window-lower", "|ell| lambda_c ell_max^(1/2) <~ rho0", ell * lc * lmax_real.sqrt(), packet.rho0, LessSim, true, "Q1 self term exceeds recoil");
    b.add("ell-window-upper", "rho0 << |ell| lambda_c ell_max", packet.rho0, ell * lc * lmax_real, MuchLess, false, "Q1 correction below recoil");
    let n_unit = packet.rho0 / (ell * lmax_real * lc);
    b.add("strip-window-lower", "rho0/(|ell| ell_max lambda_c) << N", n_unit, n, MuchLess, false, "Q2 correction below recoil");
    b.add("strip-window-upper", "N <~ rho0/(|ell| ell_max^(1/2) lambda_c)", n, n_unit * lmax_real.sqrt(), LessSim, true, "Q2 self term exceeds recoil");

    b.add("second-order-mumu", "eta_mumu <~ eta_q", l.eta_mumu, l.eta_q, LessSim, true, "second-order term exceeds recoil");
    for j in 0..3 {
        let name = format!("second-order-muQ{j}");
        let ineq = format!("eta_muQ{j} <~ eta_q");
        b.add(&name, &ineq, l.eta_mu_q[j], l.eta_q, LessSim, true, "second-order term exceeds recoil");
    }
    for i in 0..3 {
        for j in i..3 {
            let name = format!("second-order-Q{i}{j}");
            let ineq = format!("eta_Q{i}{j} <~ eta_q");
            b.add(&name, &ineq, l.eta_qq[i][j], l.eta_q, LessSim, true, "second-order term exceeds recoil");
        }
    }

    let checks = b.checks;
    let overall = if checks.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    let warnings = checks.iter().filter(|c| c.verdict == Verdict::Warn).count();
    let candidates = [("eta_mu", l.eta_mu), ("eta_Q0", l.eta_q0), ("eta_Q1", l.eta_q1), ("eta_Q2", l.eta_q2)];
    let dominant = candidates
        .iter()
        .fold(candidates[0], |best, c| if c.1 > best.1 { *c } else { best })
        .0
        .to_string();
    Ok(ValidationReport {
        checks,
        overall,
        warnings,
        dominant,
        n_max: nmax,
        ell_max: lmax,
    })
}

/// A named baseline parameter set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub packet: LgPacket,
    pub geometry: Geometry,
    pub observation: Observation,
}

/// Infrared (λ ≈ 1 μm) and terahertz (λ ≈ 1 mm) baselines, both at
/// β = 0.5 and Θ = Φ = π/2 with a = d/2.
pub fn presets() -> Vec<Preset> {
    let beam = Beam { beta: 0.5 };
    let obs = Observation {
        theta: PI / 2.0,
        phi: PI / 2.0,
    };
    let c = Constants::default();
    vec![
        Preset {
            name: "IR".into(),
            description: "lambda ~ 1 um, rho0 ~ 1 nm, ell ~ 100; the grating allows only a few strips".into(),
            packet: LgPacket {
                rho0: 1e-9,
                ell: 100,
                n: 0,
                beam,
                constants: c,
            },
            geometry: Geometry {
                d: 0.5e-6,
                a: 0.25e-6,
                n_strips: 3,
                h: 0.12e-6,
            },
            observation: obs,
        },
        Preset {
            name: "THz".into(),
            description: "lambda ~ 1 mm, rho0 ~ 100 nm, ell ~ 100, N ~ 30".into(),
            packet: LgPacket {
                rho0: 100e-9,
                ell: 100,
                n: 0,
                beam,
                constants: c,
            },
            geometry: Geometry {
                d: 0.5e-3,
                a: 0.25e-3,
                n_strips: 30,
                h: 0.1e-3,
            },
            observation: obs,
        },
    ]
}

pub fn preset(name: &str) -> Option<Preset> {
    presets().into_iter().find(|p| p.name.eq_ignore_ascii_case(name))
}
