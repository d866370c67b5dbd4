//! Generalized Laguerre-Gaussian packets: spreading, wavefunction and moments.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::quad::Quadrature;
use crate::units::{Beam, Constants, Geometry};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LgPacket {
    /// Mean transverse radius at the waist, in meters.
    pub rho0: f64,
    /// Orbital angular momentum quantum number.
    pub ell: i32,
    /// Radial quantum number.
    pub n: u32,
    pub beam: Beam,
    pub constants: Constants,
}

/// Transverse size and Gouy phase at a given time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadState {
    pub t: f64,
    pub rho_bar: f64,
    pub gouy_phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    /// Magnetic moment along the beam axis, including the finite-width term.
    pub mu_z: f64,
    /// Leading magnetic moment ℓ/2m used by the field expressions.
    pub mu_z_leading: f64,
    /// Diagonal of the quadrupole tensor (Qxx, Qyy, Qzz).
    pub q_diag: [f64; 3],
}

/// Quadrature estimates of the density moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMoments {
    pub norm: f64,
    pub rho2: f64,
}

impl LgPacket {
    pub fn new(rho0: f64, ell: i32, n: u32, beam: Beam, constants: Constants) -> Result<Self> {
        if !(rho0.is_finite() && rho0 > 0.0) {
            return Err(param("rho0", format!("must be positive, got {rho0}")));
        }
        Ok(Self {
            rho0,
            ell,
            n,
            beam,
            constants,
        })
    }

    /// Packet defined by a fixed waist σ⊥, so that ρ̄₀ = σ⊥√|ℓ|.
    pub fn with_fixed_waist(sigma: f64, ell: i32, n: u32, beam: Beam, constants: Constants) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(param("sigma", format!("must be positive, got {sigma}")));
        }
        Self::new(sigma * (ell.unsigned_abs() as f64).sqrt(), ell, n, beam, constants)
    }

    pub fn abs_ell(&self) -> f64 {
        self.ell.unsigned_abs() as f64
    }

    pub(crate) fn require_vortex(&self) -> Result<()> {
        if self.ell == 0 {
            return Err(param("ell", "a vortex packet needs ell != 0"));
        }
        Ok(())
    }

    /// Diffraction time t_d = ρ̄₀²/(λc|ℓ|).
    pub fn diffraction_time(&self) -> Result<f64> {
        self.require_vortex()?;
        Ok(self.rho0 * self.rho0 / (self.constants.lambda_c * self.abs_ell()))
    }

    /// Distance over which the packet doubles its transverse area.
    pub fn rayleigh_length(&self) -> Result<f64> {
        Ok(self.beam.beta * self.diffraction_time()?)
    }

    pub fn rho_bar(&self, t: f64) -> Result<f64> {
        let td = self.diffraction_time()?;
        Ok(self.rho0 * (1.0 + (t / td).powi(2)).sqrt())
    }

    pub fn spread(&self, t: f64) -> Result<SpreadState> {
        let td = self.diffraction_time()?;
        Ok(SpreadState {
            t,
            rho_bar: self.rho0 * (1.0 + (t / td).powi(2)).sqrt(),
            gouy_phase: (2.0 * self.n as f64 + self.abs_ell() + 1.5) * (t / td).atan(),
        })
    }

    /// Multipole moments at time t.
    pub fn moments(&self, t: f64) -> Result<Moments> {
        self.require_vortex()?;
        let lead = self.ell as f64 * self.constants.lambda_c / 2.0;
        let ratio = self.ell as f64 * self.constants.lambda_c / self.rho0;
        let rb2 = self.rho_bar(t)?.powi(2);
        Ok(Moments {
            mu_z: lead * (1.0 - 0.5 * ratio * ratio),
            mu_z_leading: lead,
            q_diag: [0.5 * rb2, 0.5 * rb2, -rb2],
        })
    }

    /// Wavefunction at the Cartesian point r and time t, relative to the
    /// origin of the centroid trajectory z = βt.
    pub fn psi(&self, r: [f64; 3], t: f64) -> Result<Complex64> {
        let st = self.spread(t)?;
        let td = self.diffraction_time()?;
        let l = self.abs_ell();
        let n = self.n;
        let rho = r[0].hypot(r[1]);
        let phi = r[1].atan2(r[0]);
        let zeta = r[2] - self.beam.beta * t;
        let rb = st.rho_bar;
        let x = l * (rho * rho) / (rb * rb);

        let lag = laguerre(n, l, x);
        if lag == 0.0 || rho == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let ln_amp = 0.5 * (ln_factorial(n) - ln_factorial(n + self.ell.unsigned_abs())) - 0.75 * PI.ln()
            + l * (rho / rb).ln()
            + (2.0 * l + 3.0) / 4.0 * l.ln()
            - 1.5 * rb.ln()
            + lag.abs().ln()
            - l * (rho * rho + zeta * zeta) / (2.0 * rb * rb);

        let m = self.constants.mass();
        let p = m * self.beam.beta;
        let sign_phase = if lag < 0.0 { PI } else { 0.0 };
        let phase = (2.0 * n as f64 + self.ell as f64) * PI / 2.0 - t * p * p / (2.0 * m) + p * r[2]
            + self.ell as f64 * phi
            - st.gouy_phase
            + l * t * (rho * rho + zeta * zeta) / (2.0 * td * rb * rb)
            + sign_phase;
        Ok(Complex64::from_polar(ln_amp.exp(), phase))
    }

    /// Norm and ⟨ρ²⟩ of |ψ|² by nested adaptive quadrature in cylindrical
    /// coordinates, truncated at 8ρ̄(t) in ρ and |z − βt|.
    pub fn density_moments(&self, t: f64, rel_tol: f64) -> Result<DensityMoments> {
        let rb = self.rho_bar(t)?;
        let zc = self.beam.beta * t;
        let cut = 8.0 * rb;
        let outer = Quadrature::rel(rel_tol).panels(64);
        let inner = Quadrature::rel(rel_tol * 0.1).panels(64);
        let mut failure: Option<Error> = None;
        let mut radial = |rho: f64, weight_rho2: bool| -> f64 {
            let col = inner.integrate(
                |z: f64| match self.psi([rho, 0.0, zc + z], t) {
                    Ok(v) => v.norm_sqr(),
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                },
                -cut,
                cut,
            );
            let col = match col {
                Ok(c) => c.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            };
            let w = if weight_rho2 { rho * rho } else { 1.0 };
            2.0 * PI * rho * w * col
        };
        let norm = outer.integrate(|rho| radial(rho, false), 0.0, cut)?.value;
        let rho2 = outer.integrate(|rho| radial(rho, true), 0.0, cut)?.value;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(DensityMoments { norm, rho2: rho2 / norm })
    }

    /// Exact ⟨ρ²⟩ of the packet density, ρ̄(t)²(2n + |ℓ| + 1)/|ℓ|.
    pub fn mean_rho2(&self, t: f64) -> Result<f64> {
        let l = self.abs_ell();
        Ok(self.rho_bar(t)?.powi(2) * (2.0 * self.n as f64 + l + 1.0) / l)
    }
}

/// Generalized Laguerre polynomial L_n^α(x) by upward recurrence.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Largest strip count for which the packet stays narrower than h over the
/// whole grating, as a real number before flooring.
pub fn n_max_continuous(packet: &LgPacket, geometry: &Geometry) -> Result<f64> {
    packet.require_vortex()?;
    if geometry.h <= packet.rho0 {
        return Err(Error::Geometry(format!(
            "impact parameter h = {:e} m does not exceed the packet radius {:e} m",
            geometry.h, packet.rho0
        )));
    }
    let r = packet.rho0 / geometry.h;
    Ok(packet.beam.beta / packet.abs_ell() * (packet.rho0 / packet.constants.lambda_c) * (geometry.h / geometry.d)
        * (1.0 - r * r).sqrt())
}

pub fn n_max(packet: &LgPacket, geometry: &Geometry) -> Result<u32> {
    Ok(n_max_continuous(packet, geometry)?.floor() as u32)
}

/// Largest |ℓ| for which the magnetic-moment correction stays below the
/// quantum recoil at wavelength λ.
pub fn ell_max(lambda: f64, constants: &Constants) -> u64 {
    (lambda / constants.lambda_c).sqrt().floor() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn packet(rho0: f64, ell: i32, beta: f64) -> LgPacket {
        LgPacket::new(rho0, ell, 0, Beam::new(beta).unwrap(), Constants::default()).unwrap()
    }

    #[test]
    fn spreading_law() {
        let p = packet(1e-9, 1, 0.5);
        let td = p.diffraction_time().unwrap();
        assert_relative_eq!(td, 1e-18 / LAMBDA_C_DEFAULT, max_relative = 1e-12);
        assert_relative_eq!(p.rho_bar(td).unwrap(), 2f64.sqrt() * 1e-9, max_relative = 1e-12);
        assert_relative_eq!(p.rayleigh_length().unwrap(), 0.5 * td, max_relative = 1e-14);
    }

    const LAMBDA_C_DEFAULT: f64 = crate::units::LAMBDA_C;

    #[test]
    fn zero_ell_rejected() {
        let p = packet(1e-9, 0, 0.5);
        assert!(p.diffraction_time().is_err());
        assert!(p.moments(0.0).is_err());
    }

    #[test]
    fn quadrupole_is_traceless() {
        let p = packet(3e-7, 1000, 0.5);
        let q = p.moments(1e-3).unwrap().q_diag;
        assert!((q[0] + q[1] + q[2]).abs() < 1e-30);
    }

    #[test]
    fn magnetic_moment_correction() {
        let p = packet(3e-7, 1000, 0.5);
        let m = p.moments(0.0).unwrap();
        let x = 1000.0 * LAMBDA_C_DEFAULT / 3e-7;
        assert_relative_eq!(m.mu_z / m.mu_z_leading, 1.0 - 0.5 * x * x, max_relative = 1e-14);
    }

    #[test]
    fn laguerre_low_orders() {
        let (a, x) = (2.5, 0.7);
        assert_relative_eq!(laguerre(2, a, x), 0.5 * (x * x - 2.0 * (a + 2.0) * x + (a + 1.0) * (a + 2.0)), max_relative = 1e-14);
    }

    #[test]
    fn n_max_figure_values() {
        let c = Constants::default();
        let b = Beam::new(0.5).unwrap();
        let p = LgPacket::new(3e-7, 1000, 0, b, c).unwrap();
        let g = Geometry::new(1e-3, 5e-4, 50, 1.3e-4).unwrap();
        assert_eq!(n_max(&p, &g).unwrap(), 50);
        let g = Geometry::new(1e-3, 5e-4, 50, 3e-7).unwrap();
        assert!(matches!(n_max(&p, &g), Err(Error::Geometry(_))));
    }

    #[test]
    fn ell_max_grows_as_root_lambda() {
        let c = Constants::default();
        let l1 = ell_max(1e-3, &c) as f64;
        let l4 = ell_max(4e-3, &c) as f64;
        assert!((l4 / l1 - 2.0).abs() < 1e-4);
    }
}
