//! Exact symbolic algebra over the master-integral family
//!
//! ```text
//! 2π e^{−μ|y|} Σ c · μ^a |y|^b q^c ω^d β^e γ^f sgn(y)^k
//! ```
//!
//! with μ² = ω²/(γ²β²) + q². Derivatives with respect to ω, q and |y|
//! map the family into itself, so every Fourier field component is a finite
//! table of such monomials.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

pub type Coef = Complex<Rational64>;

pub fn rational(n: i64, d: i64) -> Coef {
    Complex::new(Rational64::new(n, d), Rational64::zero())
}

pub fn imag_unit() -> Coef {
    Complex::new(Rational64::zero(), Rational64::one())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Powers {
    pub mu: i32,
    pub y: i32,
    pub q: u32,
    pub omega: u32,
    pub beta: i32,
    pub gamma: i32,
    /// Power of sgn(y), reduced mod 2.
    pub sgn: u32,
}

impl Powers {
    fn times(self, o: Powers) -> Powers {
        Powers {
            mu: self.mu + o.mu,
            y: self.y + o.y,
            q: self.q + o.q,
            omega: self.omega + o.omega,
            beta: self.beta + o.beta,
            gamma: self.gamma + o.gamma,
            sgn: (self.sgn + o.sgn) % 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Omega,
    Qx,
    AbsY,
}

/// Numerical point at which a family member is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterContext {
    pub q: f64,
    pub y_abs: f64,
    pub sgn: f64,
    pub omega: f64,
    pub beta: f64,
    pub gamma: f64,
    pub mu: f64,
    /// 2π e^{−μ|y|}, shared by every multipole.
    pub kernel: f64,
}

impl MasterContext {
    pub fn new(q: f64, y: f64, omega: f64, beta: f64, gamma: f64) -> Self {
        let bg = beta * gamma;
        let mu = ((omega / bg).powi(2) + q * q).sqrt();
        let y_abs = y.abs();
        Self {
            q,
            y_abs,
            sgn: y.signum(),
            omega,
            beta,
            gamma,
            mu,
            kernel: 2.0 * PI * (-mu * y_abs).exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MasterFamilyTerm {
    terms: BTreeMap<Powers, Coef>,
}

impl MasterFamilyTerm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Coef, p: Powers) -> Self {
        let mut t = Self::zero();
        t.push(p, c);
        t
    }

    fn push(&mut self, p: Powers, c: Coef) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_insert_with(Coef::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Powers, &Coef)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.push(*p, *c);
        }
        out
    }

    /// Multiply by c · (monomial p).
    pub fn scale(&self, c: Coef, p: Powers) -> Self {
        let mut out = Self::zero();
        for (q, d) in &self.terms {
            out.push(q.times(p), *d * c);
        }
        out
    }

    fn derive_once(&self, wrt: Var) -> Self {
        let mut out = Self::zero();
        for (p, c) in &self.terms {
            let a = p.mu as i64;
            match wrt {
                Var::Omega => {
                    // ∂μ/∂ω = ω/(γ²β²μ)
                    let dmu = Powers { mu: -1, omega: 1, beta: -2, gamma: -2, ..Powers::default() };
                    if a != 0 {
                        out.push(p.times(dmu).times(Powers { mu: -1, ..Powers::default() }), *c * rational(a, 1));
                    }
                    if p.omega > 0 {
                        let mut q = *p;
                        q.omega -= 1;
                        out.push(q, *c * rational(p.omega as i64, 1));
                    }
                    out.push(p.times(dmu).times(Powers { y: 1, ..Powers::default() }), -*c);
                }
                Var::Qx => {
                    let dmu = Powers { mu: -1, q: 1, ..Powers::default() };
                    if a != 0 {
                        out.push(p.times(dmu).times(Powers { mu: -1, ..Powers::default() }), *c * rational(a, 1));
                    }
                    if p.q > 0 {
                        let mut q = *p;
                        q.q -= 1;
                        out.push(q, *c * rational(p.q as i64, 1));
                    }
                    out.push(p.times(dmu).times(Powers { y: 1, ..Powers::default() }), -*c);
                }
                Var::AbsY => {
                    if p.y != 0 {
                        out.push(p.times(Powers { y: -1, ..Powers::default() }), *c * rational(p.y as i64, 1));
                    }
                    out.push(p.times(Powers { mu: 1, ..Powers::default() }), -*c);
                }
            }
        }
        out
    }

    pub fn eval(&self, ctx: &MasterContext) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, c) in &self.terms {
            acc += coef_to_f64(c) * monomial_value(p, ctx);
        }
        acc * ctx.kernel
    }

    /// Numeric copy for fast repeated evaluation.
    pub fn compile(&self) -> CompiledTerm {
        CompiledTerm {
            terms: self.terms.iter().map(|(p, c)| (*p, coef_to_f64(c))).collect(),
        }
    }
}

/// Exact derivative of a family member; order 0 is the identity.
pub fn derive(term: &MasterFamilyTerm, wrt: Var, order: u32) -> MasterFamilyTerm {
    let mut out = term.clone();
    for _ in 0..order {
        out = out.derive_once(wrt);
    }
    out
}

fn coef_to_f64(c: &Coef) -> Complex64 {
    Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

fn monomial_value(p: &Powers, ctx: &MasterContext) -> f64 {
    let mut v = ctx.mu.powi(p.mu)
        * ctx.y_abs.powi(p.y)
        * ctx.q.powi(p.q as i32)
        * ctx.omega.powi(p.omega as i32)
        * ctx.beta.powi(p.beta)
        * ctx.gamma.powi(p.gamma);
    if p.sgn == 1 {
        v *= ctx.sgn;
    }
    v
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompiledTerm {
    terms: Vec<(Powers, Complex64)>,
}

impl CompiledTerm {
    pub fn eval(&self, ctx: &MasterContext) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, c) in &self.terms {
            acc += c * monomial_value(p, ctx);
        }
        acc * ctx.kernel
    }
}

impl fmt::Display for MasterFamilyTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, c) in &self.terms {
            writeln!(
                f,
                "({}) + ({})i\tmu^{}\t|y|^{}\tq^{}\tw^{}\tbeta^{}\tgamma^{}\tsgn^{}",
                c.re, c.im, p.mu, p.y, p.q, p.omega, p.beta, p.gamma, p.sgn
            )?;
        }
        Ok(())
    }
}
