//! Real-space fields of the packet: rest frame, Lorentz boost and the
//! lab-frame split into charge, magnetic-dipole and quadrupole parts.

use crate::error::{Error, Result};
use crate::packet::LgPacket;
use crate::units::Beam;

pub type FieldVec3 = [f64; 3];

/// Rest-frame electric and magnetic fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestField {
    pub e: FieldVec3,
    pub h: FieldVec3,
}

/// Lab-frame electric field split by multipole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabFieldParts {
    pub e: FieldVec3,
    pub mu: FieldVec3,
    /// Quadrupole part proportional to ρ̄₀².
    pub q_static: FieldVec3,
    /// Quadrupole part proportional to ℓ²λc²/ρ̄₀² (packet spreading).
    pub q_spread: FieldVec3,
}

impl LabFieldParts {
    pub fn q(&self) -> FieldVec3 {
        add(self.q_static, self.q_spread)
    }

    pub fn total(&self) -> FieldVec3 {
        add(add(self.e, self.mu), self.q())
    }
}

/// Coordinates of a lab-frame event as seen from the packet rest frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostedCoords {
    pub x: f64,
    pub y: f64,
    pub rz: f64,
    pub tz: f64,
    pub r: f64,
}

impl BoostedCoords {
    pub fn new(r: [f64; 3], t: f64, beam: &Beam) -> Self {
        let (b, g) = (beam.beta, beam.gamma());
        let rz = g * (r[2] - b * t);
        let tz = g * (t - b * r[2]);
        Self {
            x: r[0],
            y: r[1],
            rz,
            tz,
            r: (r[0] * r[0] + r[1] * r[1] + rz * rz).sqrt(),
        }
    }
}

/// Minimum distance from the centroid, in units of ρ̄(t), at which the
/// multipole expansion is trusted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldOptions {
    pub guard_factor: f64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        Self { guard_factor: 1.0 }
    }
}

fn add(a: FieldVec3, b: FieldVec3) -> FieldVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// ℓ²λc²/ρ̄₀², the spreading strength of the quadrupole.
pub(crate) fn spread_coupling(packet: &LgPacket) -> f64 {
    let x = packet.ell as f64 * packet.constants.lambda_c / packet.rho0;
    x * x
}

fn guard(packet: &LgPacket, t: f64, dist: f64, opts: &FieldOptions) -> Result<()> {
    let rb = if packet.ell == 0 { packet.rho0 } else { packet.rho_bar(t)? };
    if !(dist >= opts.guard_factor * rb) || dist == 0.0 {
        return Err(Error::Singularity(format!(
            "distance {dist:e} m from the centroid is inside {}·ρ̄(t) = {:e} m",
            opts.guard_factor,
            opts.guard_factor * rb
        )));
    }
    Ok(())
}

/// Rest-frame fields at position r and rest-frame time t.
pub fn field_rest(r: [f64; 3], t: f64, packet: &LgPacket) -> Result<RestField> {
    field_rest_with(r, t, packet, &FieldOptions::default())
}

pub fn field_rest_with(r: [f64; 3], t: f64, packet: &LgPacket, opts: &FieldOptions) -> Result<RestField> {
    let [x, y, z] = r;
    let r2 = x * x + y * y + z * z;
    let rr = r2.sqrt();
    guard(packet, t, rr, opts)?;
    let s = packet.rho0 * packet.rho0;
    let eta = spread_coupling(packet);
    let mu = packet.ell as f64 * packet.constants.lambda_c / 2.0;
    let c2 = z * z / r2;
    let t2 = t * t / r2;
    let transverse = 1.0 + 0.25 * (3.0 * s / r2 * (1.0 - 5.0 * c2) + eta * (3.0 * t2 * (1.0 - 5.0 * c2) + 3.0 * c2 - 1.0));
    let axial = 1.0 + 0.25 * (3.0 * s / r2 * (3.0 - 5.0 * c2) + eta * (3.0 * t2 * (3.0 - 5.0 * c2) + 3.0 * c2 - 1.0));
    let r3 = r2 * rr;
    let r5 = r3 * r2;
    Ok(RestField {
        e: [x / r3 * transverse, y / r3 * transverse, z / r3 * axial],
        h: [
            z / r5 * (3.0 * x * mu + 1.5 * eta * t * y),
            z / r5 * (3.0 * y * mu - 1.5 * eta * t * x),
            mu * (3.0 * c2 - 1.0) / r3,
        ],
    })
}

/// Electric field seen in the lab for rest-frame fields already evaluated
/// at the boosted coordinates.
pub fn boost_to_lab(e: FieldVec3, h: FieldVec3, beam: &Beam) -> FieldVec3 {
    let (b, g) = (beam.beta, beam.gamma());
    [g * (e[0] + b * h[1]), g * (e[1] - b * h[0]), e[2]]
}

/// Lab field through the rest frame: transform the event, evaluate, boost.
pub fn field_lab_boosted(r: [f64; 3], t: f64, packet: &LgPacket) -> Result<FieldVec3> {
    let bc = BoostedCoords::new(r, t, &packet.beam);
    let opts = FieldOptions::default();
    guard(packet, t, bc.r, &opts)?;
    let rest = field_rest_with([bc.x, bc.y, bc.rz], bc.tz, packet, &FieldOptions { guard_factor: 0.0 })?;
    Ok(boost_to_lab(rest.e, rest.h, &packet.beam))
}

/// Lab field from the closed lab-frame expression.
pub fn field_lab(r: [f64; 3], t: f64, packet: &LgPacket) -> Result<FieldVec3> {
    let bc = BoostedCoords::new(r, t, &packet.beam);
    guard(packet, t, bc.r, &FieldOptions::default())?;
    let (b, g) = (packet.beam.beta, packet.beam.gamma());
    let s = packet.rho0 * packet.rho0;
    let eta = spread_coupling(packet);
    let mu = packet.ell as f64 * packet.constants.lambda_c / 2.0;
    let r2 = bc.r * bc.r;
    let c2 = bc.rz * bc.rz / r2;
    let t2 = bc.tz * bc.tz / r2;
    let rt = bc.rz * bc.tz / r2;
    let r3 = r2 * bc.r;
    let r5 = r3 * r2;
    let tr = 1.0 + 0.75 * s / r2 * (1.0 - 5.0 * c2) + 0.25 * eta * (3.0 * t2 * (1.0 - 5.0 * c2) + 3.0 * c2 - 6.0 * b * rt - 1.0);
    let ax = 1.0 + 0.75 * s / r2 * (3.0 - 5.0 * c2) + 0.25 * eta * (3.0 * t2 * (3.0 - 5.0 * c2) + 3.0 * c2 - 1.0);
    Ok([
        g * bc.x / r3 * tr + mu * 3.0 * b * g * bc.y * bc.rz / r5,
        g * bc.y / r3 * tr - mu * 3.0 * b * g * bc.x * bc.rz / r5,
        bc.rz / r3 * ax,
    ])
}

/// Lab field split into charge, dipole and the two quadrupole brackets.
pub fn field_lab_decomposed(r: [f64; 3], t: f64, packet: &LgPacket) -> Result<LabFieldParts> {
    field_lab_decomposed_with(r, t, packet, &FieldOptions::default())
}

pub fn field_lab_decomposed_with(r: [f64; 3], t: f64, packet: &LgPacket, opts: &FieldOptions) -> Result<LabFieldParts> {
    let bc = BoostedCoords::new(r, t, &packet.beam);
    guard(packet, t, bc.r, opts)?;
    let (b, g) = (packet.beam.beta, packet.beam.gamma());
    let s = packet.rho0 * packet.rho0;
    let eta = spread_coupling(packet);
    let mu = packet.ell as f64 * packet.constants.lambda_c / 2.0;
    let (x, y, rz, tz) = (bc.x, bc.y, bc.rz, bc.tz);
    let r2 = bc.r * bc.r;
    let r3 = r2 * bc.r;
    let r5 = r3 * r2;
    let r7 = r5 * r2;
    let rz2 = rz * rz;
    let tz2 = tz * tz;

    let s_tr = 0.75 * s * (1.0 / r5 - 5.0 * rz2 / r7);
    let s_ax = 0.75 * s * (3.0 / r5 - 5.0 * rz2 / r7);
    let e_tr = 0.25 * eta * (3.0 * tz2 / r5 - 15.0 * tz2 * rz2 / r7 + 3.0 * rz2 / r5 - 6.0 * b * rz * tz / r5 - 1.0 / r3);
    let e_ax = 0.25 * eta * (9.0 * tz2 / r5 - 15.0 * tz2 * rz2 / r7 + 3.0 * rz2 / r5 - 1.0 / r3);

    Ok(LabFieldParts {
        e: [g * x / r3, g * y / r3, rz / r3],
        mu: [mu * 3.0 * b * g * rz * y / r5, -mu * 3.0 * b * g * rz * x / r5, 0.0],
        q_static: [g * x * s_tr, g * y * s_tr, rz * s_ax],
        q_spread: [g * x * e_tr, g * y * e_tr, rz * e_ax],
    })
}
