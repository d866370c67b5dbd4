use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fourier::{CVec3, FourierField};

/// Surface current induced on the grating by each field piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceCurrent {
    pub j_e: CVec3,
    pub j_mu: CVec3,
    pub j_q0: CVec3,
    pub j_q1: CVec3,
    pub j_q2: CVec3,
}

impl SurfaceCurrent {
    /// Currents in the order e, μ, Q0, Q1, Q2.
    pub fn parts(&self) -> [CVec3; 5] {
        [self.j_e, self.j_mu, self.j_q0, self.j_q1, self.j_q2]
    }
}

/// j = (1/2π)(−E_x e₀y, E_x e₀x + E_z e₀z, −E_z e₀y) for the surface normal ŷ.
pub fn current_of(e: &CVec3, e0: [f64; 3]) -> CVec3 {
    let k = 1.0 / (2.0 * PI);
    [
        -e[0] * e0[1] * k,
        (e[0] * e0[0] + e[2] * e0[2]) * k,
        -e[2] * e0[1] * k,
    ]
}

pub fn surface_current(field: &FourierField, e0: [f64; 3]) -> SurfaceCurrent {
    SurfaceCurrent {
        j_e: current_of(&field.e_e, e0),
        j_mu: current_of(&field.e_mu, e0),
        j_q0: current_of(&field.e_q0, e0),
        j_q1: current_of(&field.e_q1, e0),
        j_q2: current_of(&field.e_q2, e0),
    }
}

/// Σ_c a_c · conj(b_c)
pub fn hdot(a: &CVec3, b: &CVec3) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transverse_field_gives_no_current() {
        let e = [Complex64::new(0.0, 0.0), Complex64::new(3.0, -1.0), Complex64::new(0.0, 0.0)];
        let j = current_of(&e, [0.3, 0.5, 0.8]);
        assert!(j.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn zenith_plane_components() {
        let th: f64 = 1.1;
        let e0 = [0.0, th.sin(), th.cos()];
        let e = [Complex64::new(2.0, 1.0), Complex64::new(5.0, 5.0), Complex64::new(-1.0, 0.5)];
        let j = current_of(&e, e0);
        let k = 1.0 / (2.0 * PI);
        assert!((j[0] + e[0] * th.sin() * k).norm() < 1e-15);
        assert!((j[1] - e[2] * th.cos() * k).norm() < 1e-15);
    }
}
