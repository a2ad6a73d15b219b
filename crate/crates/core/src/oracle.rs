//! Closed-form collapse times and implicit `φ(t)` relations for the flows
//! where separation of variables integrates in elementary functions.
//!
//! The case table is closed: problems outside it get `None`.

use crate::epstrig::{cos_eps, cot_eps, tan_eps, Epsilon};
use crate::families::{AmbientSpace, FamilyKind};
use crate::flow::FlowProblem;
use crate::weingarten::{binomial, WeingartenSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedFormCase {
    /// `|A|^2` on Euclidean spheres: `(R-φ)^3 = R^3 - 3nt`.
    EuclideanSquaredNorm { n: usize, radius: f64 },
    /// `H_r` on Euclidean spheres: `(R-φ)^{r+1}/(r+1) = R^{r+1}/(r+1) - C(n,r) t`.
    EuclideanMean { n: usize, r: usize, radius: f64 },
    /// `|A|^2` (`c = n`) or `H_2` (`c = n(n-1)/2`) on spheres of `Q_ε`, `ε = ±1`:
    /// `tan_ε(R-φ) + φ = 1/k - ε c t`.
    CurvedQuadratic { eps: Epsilon, c: f64, radius: f64 },
    /// `H_1` on spheres of `Q_ε`, `ε = ±1`: `cos_ε(R-φ) = e^{εnt} cos_ε R`.
    CurvedMean { eps: Epsilon, n: usize, radius: f64 },
    /// `H_1` on geodesic spheres of `H_F^m`.
    HyperbolicFieldMean { n: usize, q: usize, radius: f64 },
    /// `K` on a `g = 2` Münzner family with `m_1 = m_2` even: `K ≡ 1`.
    MunznerUnitK { tau0: f64 },
    /// `K` on a `g = 2` Münzner family with `m_1 - m_2 = 1`, `m_2` even: `K = cot τ`.
    MunznerCotK { tau0: f64 },
}

impl ClosedFormCase {
    pub fn of(problem: &FlowProblem) -> Option<Self> {
        let family = problem.family();
        let n = family.n();
        let radius = problem.tau0();
        // K is H_n
        let spec = match problem.spec() {
            WeingartenSpec::GaussK => WeingartenSpec::MeanCurvature(n),
            s => s.clone(),
        };
        match (family.kind(), family.ambient(), &problem.spec(), spec) {
            (FamilyKind::GeodesicSphere, AmbientSpace::SpaceForm { eps, .. }, _, spec) => match (eps, spec) {
                (Epsilon::Flat, WeingartenSpec::SquaredNorm) => Some(Self::EuclideanSquaredNorm { n, radius }),
                (Epsilon::Flat, WeingartenSpec::MeanCurvature(r)) => Some(Self::EuclideanMean { n, r, radius }),
                (_, WeingartenSpec::SquaredNorm) => Some(Self::CurvedQuadratic { eps, c: n as f64, radius }),
                (_, WeingartenSpec::MeanCurvature(2)) => {
                    Some(Self::CurvedQuadratic { eps, c: binomial(n, 2), radius })
                }
                (_, WeingartenSpec::MeanCurvature(1)) => Some(Self::CurvedMean { eps, n, radius }),
                _ => None,
            },
            (FamilyKind::HFGeodesicSphere, amb @ AmbientSpace::HyperbolicField { .. }, _, WeingartenSpec::MeanCurvature(1)) => {
                Some(Self::HyperbolicFieldMean { n, q: amb.q().expect("hyperbolic field"), radius })
            }
            (FamilyKind::SphereMunzner { g: 2, multiplicities }, _, WeingartenSpec::GaussK, _) => {
                let (m1, m2) = (multiplicities[0], multiplicities[1]);
                if m2 % 2 != 0 {
                    None
                } else if m1 == m2 {
                    Some(Self::MunznerUnitK { tau0: radius })
                } else if m1 == m2 + 1 {
                    Some(Self::MunznerCotK { tau0: radius })
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::EuclideanSquaredNorm { .. } => "euclidean-|A|^2-sphere",
            Self::EuclideanMean { .. } => "euclidean-H_r-sphere",
            Self::CurvedQuadratic { .. } => "curved-|A|^2/H_2-sphere",
            Self::CurvedMean { .. } => "curved-H_1-sphere",
            Self::HyperbolicFieldMean { .. } => "H_F^m-H-sphere",
            Self::MunznerUnitK { .. } => "munzner-K-m1=m2",
            Self::MunznerCotK { .. } => "munzner-K-m1-m2=1",
        }
    }

    pub fn collapse_time(&self) -> f64 {
        match *self {
            Self::EuclideanSquaredNorm { n, radius } => radius.powi(3) / (3.0 * n as f64),
            Self::EuclideanMean { n, r, radius } => {
                radius.powi(r as i32 + 1) / ((r + 1) as f64 * binomial(n, r))
            }
            Self::CurvedQuadratic { eps, c, radius } => {
                let k = cot_eps(eps, radius).expect("radius > 0");
                eps.as_f64() * (1.0 - k * radius) / (k * c)
            }
            Self::CurvedMean { eps, n, radius } => {
                eps.as_f64() / n as f64 * (1.0 / cos_eps(eps, radius)).ln()
            }
            Self::HyperbolicFieldMean { n, q, radius } => {
                let (a, b) = hf_constants(n, q);
                let e = radius.exp();
                ((a * (e * e + 1.0) + b * e) / (2.0 * n as f64 * e)).ln() / a
            }
            Self::MunznerUnitK { tau0 } => tau0,
            Self::MunznerCotK { tau0 } => (1.0 / tau0.cos()).ln(),
        }
    }

    /// `G(t, φ)` of the implicit relation `G = 0` satisfied by exact solutions.
    pub fn phi_residual(&self, t: f64, phi: f64) -> f64 {
        match *self {
            Self::EuclideanSquaredNorm { n, radius } => {
                (radius - phi).powi(3) - (radius.powi(3) - 3.0 * n as f64 * t)
            }
            Self::EuclideanMean { n, r, radius } => {
                let p = (r + 1) as i32;
                (radius - phi).powi(p) / p as f64 - (radius.powi(p) / p as f64 - binomial(n, r) * t)
            }
            Self::CurvedQuadratic { eps, c, radius } => {
                let k = cot_eps(eps, radius).expect("radius > 0");
                let lhs = tan_eps(eps, radius - phi).unwrap_or(f64::INFINITY) + phi;
                lhs - (1.0 / k - eps.as_f64() * c * t)
            }
            Self::CurvedMean { eps, n, radius } => {
                cos_eps(eps, radius - phi) - (eps.as_f64() * n as f64 * t).exp() * cos_eps(eps, radius)
            }
            Self::HyperbolicFieldMean { n, q, radius } => {
                let (a, b) = hf_constants(n, q);
                let g = |u: f64| {
                    let x = u.exp();
                    (u - (a * (x * x + 1.0) + b * x).ln()) / a
                };
                g(radius - phi) - t - g(radius)
            }
            Self::MunznerUnitK { .. } => phi - t,
            Self::MunznerCotK { tau0 } => (tau0 - phi).cos() - t.exp() * tau0.cos(),
        }
    }
}

fn hf_constants(n: usize, q: usize) -> (f64, f64) {
    ((n + q) as f64 / 2.0, (n - q) as f64)
}

/// Closed-form collapse time when the problem matches a known case.
pub fn closed_form_t(problem: &FlowProblem) -> Option<f64> {
    ClosedFormCase::of(problem).map(|c| c.collapse_time())
}

pub fn implicit_phi_residual(problem: &FlowProblem, t: f64, phi: f64) -> Option<f64> {
    ClosedFormCase::of(problem).map(|c| c.phi_residual(t, phi))
}
