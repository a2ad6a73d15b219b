//! Trigonometric functions of a space form of constant curvature `ε`.
//!
//! | function | ε = 0 | ε = 1 | ε = -1 |
//! |----------|-------|-------|--------|
//! | `cos_ε`  | 1     | cos s | cosh s |
//! | `sin_ε`  | s     | sin s | sinh s |
//!
//! Quotients report an explicit [`Error::Pole`] instead of returning an
//! infinity.

use crate::{Error, Result};

/// Sectional curvature sign of a simply connected space form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Epsilon {
    Hyperbolic,
    Flat,
    Spherical,
}

impl Epsilon {
    pub fn value(self) -> i64 {
        match self {
            Epsilon::Hyperbolic => -1,
            Epsilon::Flat => 0,
            Epsilon::Spherical => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }
}

impl TryFrom<i64> for Epsilon {
    type Error = Error;

    fn try_from(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(Epsilon::Hyperbolic),
            0 => Ok(Epsilon::Flat),
            1 => Ok(Epsilon::Spherical),
            other => Err(Error::InvalidEpsilon(other)),
        }
    }
}

impl std::fmt::Display for Epsilon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value())
    }
}

pub fn cos_eps(eps: Epsilon, s: f64) -> f64 {
    match eps {
        Epsilon::Flat => 1.0,
        Epsilon::Spherical => s.cos(),
        Epsilon::Hyperbolic => s.cosh(),
    }
}

pub fn sin_eps(eps: Epsilon, s: f64) -> f64 {
    match eps {
        Epsilon::Flat => s,
        Epsilon::Spherical => s.sin(),
        Epsilon::Hyperbolic => s.sinh(),
    }
}

fn quotient(function: &'static str, num: f64, den: f64, s: f64) -> Result<f64> {
    if den == 0.0 {
        return Err(Error::Pole { function, at: s });
    }
    Ok(num / den)
}

pub fn tan_eps(eps: Epsilon, s: f64) -> Result<f64> {
    quotient("tan_eps", sin_eps(eps, s), cos_eps(eps, s), s)
}

pub fn cot_eps(eps: Epsilon, s: f64) -> Result<f64> {
    quotient("cot_eps", cos_eps(eps, s), sin_eps(eps, s), s)
}

pub fn sec_eps(eps: Epsilon, s: f64) -> Result<f64> {
    quotient("sec_eps", 1.0, cos_eps(eps, s), s)
}

/// Plain cotangent with the same pole convention. `cos(π/2 + kπ)` never
/// rounds to exactly zero, but `sin(kπ)` does at `s = 0`.
pub(crate) fn cot(s: f64) -> Result<f64> {
    quotient("cot", s.cos(), s.sin(), s)
}

pub(crate) fn coth(s: f64) -> Result<f64> {
    quotient("coth", s.cosh(), s.sinh(), s)
}
