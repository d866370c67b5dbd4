//! Fejér kernel F_N = sin²(NdΘ₁/2)/(N sin²(dΘ₁/2)) of the grating and its
//! frequency derivative.

use crate::radiation::form_factor::dirichlet3;
use crate::units::{dispersion_factor, theta1, Beam, Geometry};

pub fn fejer_kernel(omega: f64, theta: f64, geometry: &Geometry, beam: &Beam) -> f64 {
    let x = 0.5 * geometry.d * theta1(omega, beam.beta, theta);
    let (dd, _, _) = dirichlet3(geometry.n_strips, x);
    dd * dd / geometry.n_strips as f64
}

/// ∂F_N/∂ω at fixed angles.
pub fn fejer_derivative(omega: f64, theta: f64, geometry: &Geometry, beam: &Beam) -> f64 {
    let c = dispersion_factor(beam.beta, theta);
    let x = 0.5 * geometry.d * omega * c;
    let (dd, d1, _) = dirichlet3(geometry.n_strips, x);
    2.0 * dd * d1 * 0.5 * geometry.d * c / geometry.n_strips as f64
}

/// Weight ω_g/g of the δ(ω − ω_g) that F_N tends to for large N. It is the
/// same for every order.
pub fn delta_weight(theta: f64, geometry: &Geometry, beam: &Beam) -> f64 {
    2.0 * std::f64::consts::PI / (geometry.d * dispersion_factor(beam.beta, theta))
}
