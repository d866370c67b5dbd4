//! Natural units: c = ħ = |e| = 1, every length in meters.
//!
//! Frequencies are wave numbers (1/m), the electron mass is 1/λc and times
//! are measured in meters of light travel.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Reduced Compton wavelength of the electron in meters.
pub const LAMBDA_C: f64 = 3.8616e-13;

/// Speed of light in m/s, used only for unit conversion of output.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Physical constants that a run may override.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    #[serde(default = "default_lambda_c")]
    pub lambda_c: f64,
}

fn default_lambda_c() -> f64 {
    LAMBDA_C
}

impl Default for Constants {
    fn default() -> Self {
        Self { lambda_c: LAMBDA_C }
    }
}

impl Constants {
    pub fn new(lambda_c: f64) -> Result<Self> {
        if !(lambda_c.is_finite() && lambda_c > 0.0) {
            return Err(param("lambda_c", format!("must be positive, got {lambda_c}")));
        }
        Ok(Self { lambda_c })
    }

    /// Electron mass as an inverse length.
    pub fn mass(&self) -> f64 {
        1.0 / self.lambda_c
    }
}

/// Centroid velocity of the packet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Beam {
    pub beta: f64,
}

impl Beam {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(param("beta", format!("must lie in (0, 1), got {beta}")));
        }
        Ok(Self { beta })
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.beta * self.beta).sqrt()
    }

    pub fn beta_gamma(&self) -> f64 {
        self.beta * self.gamma()
    }
}

/// Lamellar grating of `n_strips` strips of width `a` and period `d`,
/// with the packet passing at height `h` above the surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub d: f64,
    pub a: f64,
    #[serde(rename = "N")]
    pub n_strips: u32,
    pub h: f64,
}

impl Geometry {
    pub fn new(d: f64, a: f64, n_strips: u32, h: f64) -> Result<Self> {
        let g = Self { d, a, n_strips, h };
        g.check()?;
        Ok(g)
    }

    pub fn check(&self) -> Result<()> {
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(param("d", format!("period must be positive, got {}", self.d)));
        }
        if !(self.a > 0.0 && self.a <= self.d) {
            return Err(param("a", format!("strip width must lie in (0, d], got {}", self.a)));
        }
        if self.n_strips == 0 {
            return Err(param("N", "need at least one strip"));
        }
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(param("h", format!("impact parameter must be positive, got {}", self.h)));
        }
        Ok(())
    }

    pub fn with_strips(self, n_strips: u32) -> Self {
        Self { n_strips, ..self }
    }

    pub fn with_height(self, h: f64) -> Self {
        Self { h, ..self }
    }
}

/// Emission direction: polar angle from the beam axis and azimuth from the
/// grating normal plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observation {
    pub theta: f64,
    pub phi: f64,
}

impl Observation {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(param("theta", format!("must lie in [0, pi], got {theta}")));
        }
        if !phi.is_finite() {
            return Err(param("phi", "must be finite"));
        }
        Ok(Self { theta, phi })
    }

    /// Unit vector toward the detector.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Kinematic factor 1/β − cosΘ shared by every dispersion quantity.
pub fn dispersion_factor(beta: f64, theta: f64) -> f64 {
    1.0 / beta - theta.cos()
}

/// Wavelength of the g-th diffraction order.
pub fn sp_wavelength(d: f64, g: u32, beta: f64, theta: f64) -> Result<f64> {
    if g == 0 {
        return Err(param("g", "diffraction order must be at least 1"));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(param("beta", format!("must lie in (0, 1), got {beta}")));
    }
    Ok(d / g as f64 * dispersion_factor(beta, theta))
}

/// Frequency of the g-th order, 2π/λ_g.
pub fn omega_g(d: f64, g: u32, beta: f64, theta: f64) -> Result<f64> {
    Ok(2.0 * PI / sp_wavelength(d, g, beta, theta)?)
}

/// Longitudinal phase advance per unit length, ω(1/β − cosΘ).
pub fn theta1(omega: f64, beta: f64, theta: f64) -> f64 {
    omega * dispersion_factor(beta, theta)
}

/// Evanescent decay length βγ/ω of the packet field.
pub fn h_eff(omega: f64, beam: &Beam) -> f64 {
    beam.beta_gamma() / omega
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normal_emission_wavelength() {
        let lam = sp_wavelength(1e-3, 1, 0.5, PI / 2.0).unwrap();
        assert_relative_eq!(lam, 2e-3, max_relative = 1e-12);
        assert_relative_eq!(omega_g(1e-3, 1, 0.5, PI / 2.0).unwrap(), PI * 1e3, max_relative = 1e-12);
    }

    #[test]
    fn higher_orders_divide_wavelength() {
        let l1 = sp_wavelength(3e-4, 1, 0.7, 1.1).unwrap();
        let l3 = sp_wavelength(3e-4, 3, 0.7, 1.1).unwrap();
        assert_relative_eq!(l1 / l3, 3.0, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(sp_wavelength(1e-3, 0, 0.5, 1.0).is_err());
        assert!(Beam::new(1.0).is_err());
        assert!(Beam::new(0.0).is_err());
        assert!(Geometry::new(1e-3, 2e-3, 10, 1e-4).is_err());
        assert!(Constants::new(-1.0).is_err());
    }

    #[test]
    fn h_eff_at_normal_emission() {
        let beam = Beam::new(0.5).unwrap();
        let w = omega_g(1e-3, 1, 0.5, PI / 2.0).unwrap();
        // βγλ/2π with λ = 2 mm
        assert_relative_eq!(h_eff(w, &beam), 0.5 * beam.gamma() * 2e-3 / (2.0 * PI), max_relative = 1e-14);
    }
}
