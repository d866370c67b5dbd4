//! Master integrals J_ν = ∫dt dx e^{iωt − iqx} R^{−ν} with the plane wave
//! e^{iωz/β} stripped off.

use num_complex::Complex64;

use super::term::{rational, MasterContext, MasterFamilyTerm, Powers};
use crate::error::{param, Error, Result};
use crate::units::Beam;

/// Symbolic J_ν for ν ∈ {3, 5, 7}.
pub fn master_term(nu: u32) -> Result<MasterFamilyTerm> {
    let p = |mu: i32, y: i32| Powers { mu, y, beta: -1, gamma: -1, ..Powers::default() };
    let t = match nu {
        3 => MasterFamilyTerm::monomial(rational(1, 1), p(0, -1)),
        5 => MasterFamilyTerm::monomial(rational(1, 3), p(0, -3)).add(&MasterFamilyTerm::monomial(rational(1, 3), p(1, -2))),
        7 => MasterFamilyTerm::monomial(rational(1, 5), p(0, -5))
            .add(&MasterFamilyTerm::monomial(rational(1, 5), p(1, -4)))
            .add(&MasterFamilyTerm::monomial(rational(1, 15), p(2, -3))),
        _ => return Err(param("nu", format!("master integrals exist for 3, 5, 7; got {nu}"))),
    };
    Ok(t)
}

pub(crate) fn check_point(y: f64, omega: f64) -> Result<()> {
    if y == 0.0 || !y.is_finite() {
        return Err(Error::Singularity(format!("transverse offset y = {y} from the centroid")));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(param("omega", format!("must be positive, got {omega}")));
    }
    Ok(())
}

/// Closed-form J_ν at (q, y, ω); multiply by e^{iωz/β} for the full integral.
pub fn master_integral(nu: u32, q: f64, y: f64, omega: f64, beam: &Beam) -> Result<Complex64> {
    check_point(y, omega)?;
    let g = beam.gamma();
    let ctx = MasterContext::new(q, y, omega, beam.beta, g);
    let my = ctx.mu * ctx.y_abs;
    let yy = ctx.y_abs;
    let pre = ctx.kernel / (g * beam.beta);
    let v = match nu {
        3 => pre / yy,
        5 => pre * (1.0 + my) / (3.0 * yy.powi(3)),
        7 => pre * (3.0 + 3.0 * my + my * my) / (15.0 * yy.powi(5)),
        _ => return Err(param("nu", format!("master integrals exist for 3, 5, 7; got {nu}"))),
    };
    Ok(Complex64::new(v, 0.0))
}

/// The z-dependent plane wave carried alongside every Fourier field.
pub fn plane_wave(omega: f64, z: f64, beam: &Beam) -> Complex64 {
    Complex64::from_polar(1.0, omega * z / beam.beta)
}
