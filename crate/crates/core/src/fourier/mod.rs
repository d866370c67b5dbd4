//! Planar (x, t) Fourier transform of the lab-frame field.
//!
//! Every real-space term x^p y^a R_z^n T_z^k / R^ν is mapped onto the
//! master integrals: x → i∂_q, R_z → iγβ∂_ω, and T_z = z/(γβ) − R_z/β is
//! expanded so the field becomes e^{iωz/β}(E0 + E_Q1 z + E_Q2 z²).

pub mod master;
pub mod term;

use std::fmt::Write as _;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::Result;
use crate::fields::spread_coupling;
use crate::packet::LgPacket;
use crate::units::Beam;
pub use master::{master_integral, master_term, plane_wave};
use term::{derive, imag_unit, rational, CompiledTerm, MasterContext, MasterFamilyTerm, Powers, Var};
pub use term::{MasterContext as Context, MasterFamilyTerm as FamilyTerm, Var as DerivativeVar};

pub type CVec3 = [Complex64; 3];

const ZERO3: CVec3 = [Complex64::new(0.0, 0.0); 3];

/// Fourier image of the field at (q_x, y − h, ω), z-dependence stripped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierField {
    pub e_e: CVec3,
    pub e_mu: CVec3,
    pub e_q0: CVec3,
    pub e_q1: CVec3,
    pub e_q2: CVec3,
    /// Evanescent decay constant shared by all parts.
    pub mu: f64,
}

impl FourierField {
    pub fn e0(&self) -> CVec3 {
        add3(add3(self.e_e, self.e_mu), self.e_q0)
    }

    /// Full field at longitudinal position z.
    pub fn at_z(&self, z: f64, omega: f64, beam: &Beam) -> CVec3 {
        let pw = plane_wave(omega, z, beam);
        let e0 = self.e0();
        let mut out = ZERO3;
        for k in 0..3 {
            out[k] = pw * (e0[k] + self.e_q1[k] * z + self.e_q2[k] * z * z);
        }
        out
    }
}

/// Quadrupole coefficients of z⁰, z¹, z².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadrupoleParts {
    pub q0: CVec3,
    pub q1: CVec3,
    pub q2: CVec3,
}

pub(crate) fn add3(a: CVec3, b: CVec3) -> CVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale3(a: CVec3, s: f64) -> CVec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// One real-space monomial c β^e γ^f x^p y^a R_z^n T_z^k / R^ν.
#[derive(Debug, Clone, Copy)]
struct RealTerm {
    c: (i64, i64),
    beta: i32,
    gamma: i32,
    x: u32,
    y: u32,
    rz: u32,
    tz: u32,
    nu: u32,
}

const fn rt(c: (i64, i64), beta: i32, gamma: i32, x: u32, y: u32, rz: u32, tz: u32, nu: u32) -> RealTerm {
    RealTerm { c, beta, gamma, x, y, rz, tz, nu }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Fourier image of one real-space term, split by power of z.
fn transform(t: &RealTerm) -> [MasterFamilyTerm; 3] {
    let mut out = [MasterFamilyTerm::zero(), MasterFamilyTerm::zero(), MasterFamilyTerm::zero()];
    let base = master_term(t.nu).expect("field terms use ν ∈ {3, 5, 7}");
    let i = imag_unit();
    for m in 0..=t.tz {
        // T_z^k = Σ_m C(k,m) (z/(γβ))^m (−R_z/β)^{k−m}
        let sign = if (t.tz - m) % 2 == 0 { 1 } else { -1 };
        let c = rational(t.c.0 * sign * binomial(t.tz, m), t.c.1);
        let n = t.rz + t.tz - m;
        let mut f = base.clone();
        for _ in 0..n {
            f = derive(&f, Var::Omega, 1).scale(i, Powers { beta: 1, ..Powers::default() });
        }
        for _ in 0..t.x {
            f = derive(&f, Var::Qx, 1).scale(i, Powers::default());
        }
        let p = Powers {
            beta: t.beta - t.tz as i32,
            gamma: t.gamma + n as i32 - m as i32,
            y: t.y as i32,
            sgn: t.y % 2,
            ..Powers::default()
        };
        let f = f.scale(c, p);
        out[m as usize] = out[m as usize].add(&f);
    }
    out
}

fn build(component: &[RealTerm]) -> [MasterFamilyTerm; 3] {
    let mut acc = [MasterFamilyTerm::zero(), MasterFamilyTerm::zero(), MasterFamilyTerm::zero()];
    for t in component {
        let parts = transform(t);
        for m in 0..3 {
            acc[m] = acc[m].add(&parts[m]);
        }
    }
    acc
}

/// Symbolic tables for every field piece: `[component][power of z]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTables {
    pub charge: [MasterFamilyTerm; 3],
    /// Per unit ℓ/2m.
    pub dipole: [MasterFamilyTerm; 3],
    /// Per unit ρ̄₀²; z⁰ only.
    pub q_static: [MasterFamilyTerm; 3],
    /// Per unit ℓ²λc²/ρ̄₀², indexed `[component][z power]`.
    pub q_spread: [[MasterFamilyTerm; 3]; 3],
}

impl FieldTables {
    fn build() -> Self {
        let charge_x = [rt((1, 1), 0, 1, 1, 0, 0, 0, 3)];
        let charge_y = [rt((1, 1), 0, 1, 0, 1, 0, 0, 3)];
        let charge_z = [rt((1, 1), 0, 0, 0, 0, 1, 0, 3)];
        let dip_x = [rt((3, 1), 1, 1, 0, 1, 1, 0, 5)];
        let dip_y = [rt((-3, 1), 1, 1, 1, 0, 1, 0, 5)];
        let qs = |x: u32, y: u32| [rt((3, 4), 0, 1, x, y, 0, 0, 5), rt((-15, 4), 0, 1, x, y, 2, 0, 7)];
        let qs_z = [rt((9, 4), 0, 0, 0, 0, 1, 0, 5), rt((-15, 4), 0, 0, 0, 0, 3, 0, 7)];
        let qe = |x: u32, y: u32| {
            [
                rt((3, 4), 0, 1, x, y, 0, 2, 5),
                rt((-15, 4), 0, 1, x, y, 2, 2, 7),
                rt((3, 4), 0, 1, x, y, 2, 0, 5),
                rt((-6, 4), 1, 1, x, y, 1, 1, 5),
                rt((-1, 4), 0, 1, x, y, 0, 0, 3),
            ]
        };
        let qe_z = [
            rt((9, 4), 0, 0, 0, 0, 1, 2, 5),
            rt((-15, 4), 0, 0, 0, 0, 3, 2, 7),
            rt((3, 4), 0, 0, 0, 0, 3, 0, 5),
            rt((-1, 4), 0, 0, 0, 0, 1, 0, 3),
        ];
        let z0 = |v: [MasterFamilyTerm; 3]| v[0].clone();
        let qx = build(&qe(1, 0));
        let qy = build(&qe(0, 1));
        let qz = build(&qe_z);
        Self {
            charge: [z0(build(&charge_x)), z0(build(&charge_y)), z0(build(&charge_z))],
            dipole: [z0(build(&dip_x)), z0(build(&dip_y)), MasterFamilyTerm::zero()],
            q_static: [z0(build(&qs(1, 0))), z0(build(&qs(0, 1))), z0(build(&qs_z))],
            q_spread: [qx, qy, qz],
        }
    }

    fn map(&self, f: impl Fn(&MasterFamilyTerm) -> MasterFamilyTerm) -> Self {
        Self {
            charge: self.charge.each_ref().map(&f),
            dipole: self.dipole.each_ref().map(&f),
            q_static: self.q_static.each_ref().map(&f),
            q_spread: self.q_spread.each_ref().map(|c| c.each_ref().map(&f)),
        }
    }

    /// Tables of the partial derivative with respect to ω or q.
    pub fn derived(&self, wrt: Var) -> Self {
        self.map(|t| derive(t, wrt, 1))
    }

    fn compile(&self) -> CompiledTables {
        CompiledTables {
            charge: self.charge.each_ref().map(|t| t.compile()),
            dipole: self.dipole.each_ref().map(|t| t.compile()),
            q_static: self.q_static.each_ref().map(|t| t.compile()),
            q_spread: self.q_spread.each_ref().map(|c| c.each_ref().map(|t| t.compile())),
        }
    }

    /// Plain-text listing, one monomial per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let comps = ["x", "y", "z"];
        let mut emit = |name: &str, t: &MasterFamilyTerm| {
            let _ = writeln!(s, "# {name} ({} terms)", t.len());
            let _ = write!(s, "{t}");
        };
        for (k, c) in comps.iter().enumerate() {
            emit(&format!("charge.{c}"), &self.charge[k]);
        }
        for (k, c) in comps.iter().enumerate() {
            emit(&format!("dipole.{c}"), &self.dipole[k]);
        }
        for (k, c) in comps.iter().enumerate() {
            emit(&format!("quadrupole.rho0.{c}.z0"), &self.q_static[k]);
        }
        for (k, c) in comps.iter().enumerate() {
            for m in 0..3 {
                emit(&format!("quadrupole.spread.{c}.z{m}"), &self.q_spread[k][m]);
            }
        }
        s
    }
}

struct CompiledTables {
    charge: [CompiledTerm; 3],
    dipole: [CompiledTerm; 3],
    q_static: [CompiledTerm; 3],
    q_spread: [[CompiledTerm; 3]; 3],
}

struct TableSet {
    symbolic: FieldTables,
    base: CompiledTables,
    d_omega: CompiledTables,
    d_q: CompiledTables,
}

fn tables() -> &'static TableSet {
    static TABLES: OnceLock<TableSet> = OnceLock::new();
    TABLES.get_or_init(|| {
        let symbolic = FieldTables::build();
        let d_omega = symbolic.derived(Var::Omega).compile();
        let d_q = symbolic.derived(Var::Qx).compile();
        TableSet {
            base: symbolic.compile(),
            symbolic,
            d_omega,
            d_q,
        }
    })
}

/// The symbolic field tables, built once per process.
pub fn field_tables() -> &'static FieldTables {
    &tables().symbolic
}

/// Which partial derivative of the field to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivative {
    None,
    Omega,
    Qx,
}

fn context(q: f64, y: f64, omega: f64, beam: &Beam) -> Result<MasterContext> {
    master::check_point(y, omega)?;
    Ok(MasterContext::new(q, y, omega, beam.beta, beam.gamma()))
}

fn eval3(t: &[CompiledTerm; 3], ctx: &MasterContext) -> CVec3 {
    [t[0].eval(ctx), t[1].eval(ctx), t[2].eval(ctx)]
}

/// Closed-form Fourier image of the charge field.
pub fn fourier_charge(q: f64, y: f64, omega: f64, beam: &Beam) -> Result<CVec3> {
    let ctx = context(q, y, omega, beam)?;
    let (b, g) = (beam.beta, beam.gamma());
    let s = ctx.kernel / (b * ctx.mu);
    Ok([
        Complex64::new(0.0, -q * s),
        Complex64::new(ctx.sgn * ctx.mu * s, 0.0),
        Complex64::new(0.0, -omega / (b * g * g) * s),
    ])
}

/// Closed-form Fourier image of the magnetic-dipole field.
pub fn fourier_dipole(q: f64, y: f64, omega: f64, packet: &LgPacket) -> Result<CVec3> {
    let beam = &packet.beam;
    let ctx = context(q, y, omega, beam)?;
    let lead = packet.ell as f64 * packet.constants.lambda_c / 2.0;
    let s = -lead * omega / (beam.beta * beam.gamma()) * ctx.kernel / ctx.mu;
    // −(ℓ/2m)(iω/βγ)(sgn μ, iq, 0)
    Ok([
        Complex64::new(0.0, s * ctx.sgn * ctx.mu),
        Complex64::new(-s * q, 0.0),
        Complex64::new(0.0, 0.0),
    ])
}

/// Quadrupole field coefficients of z⁰, z¹, z² from the symbolic tables.
pub fn fourier_quadrupole(q: f64, y: f64, omega: f64, packet: &LgPacket) -> Result<QuadrupoleParts> {
    let (st, sp) = fourier_quadrupole_brackets(q, y, omega, packet)?;
    Ok(QuadrupoleParts {
        q0: add3(st, sp.q0),
        q1: sp.q1,
        q2: sp.q2,
    })
}

/// The ρ̄₀² bracket (z⁰ only) and the spreading bracket, each with its
/// physical prefactor applied.
pub fn fourier_quadrupole_brackets(q: f64, y: f64, omega: f64, packet: &LgPacket) -> Result<(CVec3, QuadrupoleParts)> {
    let ctx = context(q, y, omega, &packet.beam)?;
    let t = &tables().base;
    Ok(quadrupole_from(t, &ctx, packet))
}

fn quadrupole_from(t: &CompiledTables, ctx: &MasterContext, packet: &LgPacket) -> (CVec3, QuadrupoleParts) {
    let s = packet.rho0 * packet.rho0;
    let eta = spread_coupling(packet);
    let st = scale3(eval3(&t.q_static, ctx), s);
    let comp = |m: usize| {
        scale3(
            [t.q_spread[0][m].eval(ctx), t.q_spread[1][m].eval(ctx), t.q_spread[2][m].eval(ctx)],
            eta,
        )
    };
    (st, QuadrupoleParts { q0: comp(0), q1: comp(1), q2: comp(2) })
}

/// Fourier field at (q_x, y − h, ω): closed forms for charge and dipole,
/// symbolic tables for the quadrupole.
pub fn fourier_field(q: f64, y: f64, omega: f64, packet: &LgPacket) -> Result<FourierField> {
    let ctx = context(q, y, omega, &packet.beam)?;
    let e_e = fourier_charge(q, y, omega, &packet.beam)?;
    let e_mu = fourier_dipole(q, y, omega, packet)?;
    let (st, sp) = quadrupole_from(&tables().base, &ctx, packet);
    Ok(FourierField {
        e_e,
        e_mu,
        e_q0: add3(st, sp.q0),
        e_q1: sp.q1,
        e_q2: sp.q2,
        mu: ctx.mu,
    })
}

/// Fourier field, or one of its partial derivatives, entirely from the
/// symbolic tables.
pub fn fourier_field_engine(q: f64, y: f64, omega: f64, packet: &LgPacket, which: Derivative) -> Result<FourierField> {
    let ctx = context(q, y, omega, &packet.beam)?;
    let set = tables();
    let t = match which {
        Derivative::None => &set.base,
        Derivative::Omega => &set.d_omega,
        Derivative::Qx => &set.d_q,
    };
    let lead = packet.ell as f64 * packet.constants.lambda_c / 2.0;
    let (st, sp) = quadrupole_from(t, &ctx, packet);
    Ok(FourierField {
        e_e: eval3(&t.charge, &ctx),
        e_mu: scale3(eval3(&t.dipole, &ctx), lead),
        e_q0: add3(st, sp.q0),
        e_q1: sp.q1,
        e_q2: sp.q2,
        mu: ctx.mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::Constants;

    fn packet() -> LgPacket {
        LgPacket::new(3e-7, 1000, 0, Beam::new(0.5).unwrap(), Constants::default()).unwrap()
    }

    fn close(a: CVec3, b: CVec3, tol: f64) -> bool {
        let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() <= tol * scale)
    }

    #[test]
    fn engine_reproduces_closed_forms() {
        let p = packet();
        let w = std::f64::consts::PI * 1e3;
        for (q, y) in [(0.0, -3.9e-4), (700.0, -2e-4), (-1500.0, 5e-4)] {
            let eng = fourier_field_engine(q, y, w, &p, Derivative::None).unwrap();
            assert!(close(eng.e_e, fourier_charge(q, y, w, &p.beam).unwrap(), 1e-13));
            assert!(close(eng.e_mu, fourier_dipole(q, y, w, &p).unwrap(), 1e-13));
        }
    }

    #[test]
    fn charge_component_ratio() {
        let beam = Beam::new(0.5).unwrap();
        let (q, w) = (321.0, 2.0e3);
        let e = fourier_charge(q, -1e-4, w, &beam).unwrap();
        let g = beam.gamma();
        let r = e[0] / e[2];
        assert!((r - Complex64::new(q * beam.beta * g * g / w, 0.0)).norm() < 1e-13 * r.norm());
    }

    #[test]
    fn zero_ell_has_no_dipole() {
        let p = LgPacket { ell: 0, ..packet() };
        let e = fourier_dipole(10.0, -1e-4, 1e3, &p).unwrap();
        assert!(e.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn dump_lists_every_table() {
        let d = field_tables().dump();
        assert!(d.contains("# quadrupole.spread.z.z2"));
        assert!(d.lines().count() > 20);
    }
}
