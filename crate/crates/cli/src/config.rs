//! Run configuration: a single JSON file.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vortex_sp::regime::Thresholds;
use vortex_sp::units::LAMBDA_C;
use vortex_sp::{Beam, Constants, Geometry, LgPacket, Observation};

use crate::error::CliError;
use vortex_sp::radiation::Term;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub packet: PacketBlock,
    pub grating: GratingBlock,
    #[serde(default)]
    pub observation: ObservationBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanBlock>,
    /// Enabled terms; each command has its own default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<Term>>,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default)]
    pub constants: ConstantsBlock,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub fwhm: FwhmBlock,
    #[serde(default)]
    pub polar: PolarBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketBlock {
    /// Waist radius ρ̄₀ [m].
    pub rho0: f64,
    pub ell: i32,
    #[serde(default)]
    pub n: u32,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GratingBlock {
    pub d: f64,
    pub a: f64,
    #[serde(rename = "N")]
    pub n: u32,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationBlock {
    #[serde(default = "half_pi")]
    pub theta: f64,
    #[serde(default = "half_pi")]
    pub phi: f64,
    /// Frequency for scans over anything but ω; defaults to ω₁.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

fn half_pi() -> f64 {
    PI / 2.0
}

impl Default for ObservationBlock {
    fn default() -> Self {
        Self {
            theta: half_pi(),
            phi: half_pi(),
            omega: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanVariable {
    #[serde(rename = "omega")]
    Omega,
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "phi")]
    Phi,
    #[serde(rename = "N")]
    N,
    #[serde(rename = "h")]
    H,
}

impl ScanVariable {
    pub fn label(self) -> &'static str {
        match self {
            ScanVariable::Omega => "omega",
            ScanVariable::Theta => "theta",
            ScanVariable::Phi => "phi",
            ScanVariable::N => "N",
            ScanVariable::H => "h",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanBlock {
    pub variable: ScanVariable,
    pub range: [f64; 2],
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// File stem; the command name when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
    #[serde(default)]
    pub svg: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            stem: None,
            svg: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsBlock {
    #[serde(default = "default_lambda_c")]
    pub lambda_c: f64,
}

fn default_lambda_c() -> f64 {
    LAMBDA_C
}

impl Default for ConstantsBlock {
    fn default() -> Self {
        Self {
            lambda_c: LAMBDA_C,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FwhmBlock {
    #[serde(default = "default_fwhm_strips")]
    pub strips: Vec<u32>,
    /// Half-width of the sampled window in units of ω₁/N.
    #[serde(default = "default_half_span")]
    pub half_span: f64,
    #[serde(default = "default_line_points")]
    pub points: usize,
}

fn default_fwhm_strips() -> Vec<u32> {
    vec![25, 50, 100, 150]
}

fn default_half_span() -> f64 {
    1.2
}

fn default_line_points() -> usize {
    4001
}

impl Default for FwhmBlock {
    fn default() -> Self {
        Self {
            strips: default_fwhm_strips(),
            half_span: default_half_span(),
            points: default_line_points(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarBlock {
    #[serde(default = "default_polar_strips")]
    pub strips: Vec<u32>,
}

fn default_polar_strips() -> Vec<u32> {
    vec![400, 800]
}

impl Default for PolarBlock {
    fn default() -> Self {
        Self {
            strips: default_polar_strips(),
        }
    }
}

/// Packet, grating and direction of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setup {
    pub packet: LgPacket,
    pub geometry: Geometry,
    pub observation: Observation,
    pub omega: Option<f64>,
}

/// A sidecar written by a previous run is accepted as a configuration.
#[derive(Deserialize)]
struct Sidecar {
    config: RunConfig,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn from_json(text: &str, origin: &Path) -> Result<Self, CliError> {
        match serde_json::from_str::<RunConfig>(text) {
            Ok(c) => Ok(c),
            Err(e) => match serde_json::from_str::<Sidecar>(text) {
                Ok(s) => Ok(s.config),
                Err(_) => Err(CliError::Parse {
                    path: origin.to_path_buf(),
                    line: e.line(),
                    column: e.column(),
                    message: e.to_string(),
                }),
            },
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text, path)
    }

    pub fn setup(&self) -> Result<Setup, CliError> {
        let constants = Constants::new(self.constants.lambda_c).map_err(|e| bad(e.to_string()))?;
        let beam = Beam::new(self.packet.beta).map_err(|e| bad(e.to_string()))?;
        let packet = LgPacket::new(self.packet.rho0, self.packet.ell, self.packet.n, beam, constants)
            .map_err(|e| bad(e.to_string()))?;
        let g = &self.grating;
        let geometry = Geometry::new(g.d, g.a, g.n, g.h).map_err(|e| bad(e.to_string()))?;
        let observation = Observation::new(self.observation.theta, self.observation.phi).map_err(|e| bad(e.to_string()))?;
        if let Some(w) = self.observation.omega {
            if !(w > 0.0 && w.is_finite()) {
                return Err(bad(format!("observation.omega must be positive, got {w}")));
            }
        }
        Ok(Setup {
            packet,
            geometry,
            observation,
            omega: self.observation.omega,
        })
    }

    pub fn scan(&self) -> Result<&ScanBlock, CliError> {
        let s = self.scan.as_ref().ok_or_else(|| bad("this command needs a `scan` block"))?;
        let [lo, hi] = s.range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(bad(format!("scan.range needs min < max, got [{lo}, {hi}]")));
        }
        if s.points < 2 {
            return Err(bad(format!("scan.points must be at least 2, got {}", s.points)));
        }
        if s.spacing == Spacing::Log && lo <= 0.0 {
            return Err(bad("log spacing needs a positive range"));
        }
        if s.variable == ScanVariable::N && (lo < 1.0 || lo.fract() != 0.0 || hi.fract() != 0.0) {
            return Err(bad(format!("an N scan needs whole numbers >= 1, got [{lo}, {hi}]")));
        }
        Ok(s)
    }
}

impl ScanBlock {
    /// Grid values; whole strip counts are deduplicated after rounding.
    pub fn grid(&self) -> Vec<f64> {
        let [lo, hi] = self.range;
        let n = self.points;
        let mut v: Vec<f64> = (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => lo + (hi - lo) * f,
                    Spacing::Log => lo * (hi / lo).powf(f),
                }
            })
            .collect();
        if self.variable == ScanVariable::N {
            v.iter_mut().for_each(|x| *x = x.round());
            v.dedup();
        }
        v
    }
}

impl Setup {
    /// The same setup with one variable replaced.
    pub fn at(&self, variable: ScanVariable, value: f64) -> Result<Setup, CliError> {
        let mut s = *self;
        match variable {
            ScanVariable::Omega => s.omega = Some(value),
            ScanVariable::Theta => {
                s.observation = Observation::new(value, s.observation.phi).map_err(|e| bad(e.to_string()))?
            }
            ScanVariable::Phi => {
                s.observation = Observation::new(s.observation.theta, value).map_err(|e| bad(e.to_string()))?
            }
            ScanVariable::N => s.geometry = s.geometry.with_strips(value as u32),
            ScanVariable::H => s.geometry = s.geometry.with_height(value),
        }
        s.geometry.check().map_err(|e| bad(e.to_string()))?;
        Ok(s)
    }
}
