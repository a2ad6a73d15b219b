//! Avoidance checks on pairs of parallel flows whose mutual distance is
//! available in closed form from the two focal parameters.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::epstrig::Epsilon;
use crate::families::{AmbientSpace, FamilyKind, IsoparametricFamily};
use crate::flow::{collapse_time, integrate_at, FlowProblem, SolverConfig, Verdict};
use crate::weingarten::WeingartenSpec;
use crate::{Error, Result};

/// Tolerance used for the verdict stored on a [`DistanceCurve`].
pub const DEFAULT_MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairKind {
    /// Two geodesic spheres about the same center, radii `outer > inner`.
    ConcentricSpheres { outer: f64, inner: f64 },
    /// Two geodesic spheres with centers `distance` apart, `first + second < distance`.
    CollinearDisjointSpheres { distance: f64, first: f64, second: f64 },
    /// A geodesic sphere of `H^{n+1}` inside the horoball of a horosphere, `gap` apart.
    SphereInsideHorosphere { radius: f64, gap: f64 },
}

/// Which hypothesis admits the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Justification {
    /// `W` is odd.
    OddSpec,
    /// Both members are inward-oriented geodesic spheres.
    InwardSpheres,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairScenario {
    kind: PairKind,
    ambient: AmbientSpace,
    spec: WeingartenSpec,
    justification: Justification,
}

impl PairScenario {
    pub fn new(kind: PairKind, ambient: AmbientSpace, spec: WeingartenSpec) -> Result<Self> {
        let AmbientSpace::SpaceForm { eps, .. } = ambient else {
            return Err(Error::Invalid("pair scenarios live in space forms".into()));
        };
        let n = ambient.n();
        spec.check(n)?;
        let positive = |x: f64| x > 0.0 && x.is_finite();
        match kind {
            PairKind::ConcentricSpheres { outer, inner } => {
                if !(positive(inner) && outer > inner && outer.is_finite()) {
                    return Err(Error::Invalid(format!("concentric spheres need outer > inner > 0, got {outer}, {inner}")));
                }
                if eps == Epsilon::Spherical && outer >= FRAC_PI_2 {
                    return Err(Error::Invalid("spherical scenarios must fit in an open hemisphere".into()));
                }
            }
            PairKind::CollinearDisjointSpheres { distance, first, second } => {
                if !(positive(first) && positive(second) && distance.is_finite() && first + second < distance) {
                    return Err(Error::Invalid(format!(
                        "collinear spheres need radii {first}, {second} > 0 summing below {distance}"
                    )));
                }
                if eps == Epsilon::Spherical
                    && (distance + first + second >= PI || first >= FRAC_PI_2 || second >= FRAC_PI_2)
                {
                    return Err(Error::Invalid("spherical scenarios must fit in an open hemisphere".into()));
                }
            }
            PairKind::SphereInsideHorosphere { radius, gap } => {
                if eps != Epsilon::Hyperbolic {
                    return Err(Error::Invalid("horosphere scenarios need hyperbolic space".into()));
                }
                if !(positive(radius) && positive(gap)) {
                    return Err(Error::Invalid(format!("radius and gap must be positive, got {radius}, {gap}")));
                }
            }
        }
        let justification = if spec.is_odd(n) {
            Justification::OddSpec
        } else if matches!(kind, PairKind::SphereInsideHorosphere { .. }) {
            return Err(Error::Invalid(format!(
                "{} is not odd; only pairs of inward-oriented spheres are admitted",
                spec.label()
            )));
        } else {
            Justification::InwardSpheres
        };
        Ok(Self { kind, ambient, spec, justification })
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn ambient(&self) -> AmbientSpace {
        self.ambient
    }

    pub fn spec(&self) -> &WeingartenSpec {
        &self.spec
    }

    pub fn justification(&self) -> Justification {
        self.justification
    }

    /// The horosphere configuration goes beyond the examples the avoidance
    /// principle is usually illustrated with; reports flag it.
    pub fn is_extension(&self) -> bool {
        matches!(self.kind, PairKind::SphereInsideHorosphere { .. })
    }

    fn sphere(&self, radius: f64) -> Result<FlowProblem> {
        let fam = IsoparametricFamily::new(self.ambient, FamilyKind::GeodesicSphere)?;
        FlowProblem::new(fam, self.spec.clone(), radius, None)
    }

    /// The two member flows.
    pub fn members(&self) -> Result<[FlowProblem; 2]> {
        Ok(match self.kind {
            PairKind::ConcentricSpheres { outer, inner } => [self.sphere(outer)?, self.sphere(inner)?],
            PairKind::CollinearDisjointSpheres { first, second, .. } => [self.sphere(first)?, self.sphere(second)?],
            PairKind::SphereInsideHorosphere { radius, .. } => {
                let fam = IsoparametricFamily::new(self.ambient, FamilyKind::Horosphere)?;
                [FlowProblem::new(fam, self.spec.clone(), 0.0, None)?, self.sphere(radius)?]
            }
        })
    }

    /// Squared distance between the members at focal parameters `a`, `b`.
    pub fn distance_sq(&self, a: f64, b: f64) -> f64 {
        let d = match self.kind {
            PairKind::ConcentricSpheres { .. } => a - b,
            PairKind::CollinearDisjointSpheres { distance, .. } => distance - a - b,
            // the horosphere advances toward the sphere, the sphere shrinks away from it
            PairKind::SphereInsideHorosphere { radius, gap } => gap - a + (radius - b),
        };
        d * d
    }

    pub fn initial_distance_sq(&self) -> Result<f64> {
        let [a, b] = self.members()?;
        Ok(self.distance_sq(a.tau0(), b.tau0()))
    }

    /// Shorter of the members' collapse times.
    pub fn horizon(&self, tol: f64) -> Result<f64> {
        let mut best = f64::INFINITY;
        for m in self.members()? {
            if let Verdict::Collapsed { t, .. } = collapse_time(&m, tol)?.verdict {
                best = best.min(t);
            }
        }
        if best.is_finite() {
            Ok(best)
        } else {
            Err(Error::UnboundedHorizon)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneVerdict {
    pub monotone: bool,
    /// Largest decrease between consecutive samples (0 when none).
    pub worst_violation: f64,
    /// First interval `[t_i, t_{i+1}]` where the tolerance was exceeded.
    pub first_violation: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceCurve {
    pub samples: Vec<(f64, f64)>,
    pub verdict: MonotoneVerdict,
}

impl DistanceCurve {
    pub fn from_samples(samples: Vec<(f64, f64)>) -> Self {
        let verdict = monotone_verdict(&samples, DEFAULT_MONOTONE_TOL);
        Self { samples, verdict }
    }
}

/// Samples `D(t)` on `grid` equally spaced times in `[0, 0.99·T]`, `T` the
/// shorter collapse time.
pub fn distance_curve(scenario: &PairScenario, config: &SolverConfig, grid: usize) -> Result<DistanceCurve> {
    if grid < 2 {
        return Err(Error::Invalid(format!("grid must have at least 2 points, got {grid}")));
    }
    let horizon = 0.99 * scenario.horizon(config.atol.max(1e-13))?;
    let times: Vec<f64> = (0..grid).map(|j| horizon * j as f64 / (grid - 1) as f64).collect();
    let [a, b] = scenario.members()?;
    let sa = integrate_at(&a, config, &times)?;
    let sb = integrate_at(&b, config, &times)?;
    if sa.len() != grid || sb.len() != grid {
        return Err(Error::Invalid("member flows left their validity domain before the grid end".into()));
    }
    let samples = sa
        .iter()
        .zip(&sb)
        .map(|(x, y)| (x.t, scenario.distance_sq(x.tau, y.tau)))
        .collect();
    Ok(DistanceCurve::from_samples(samples))
}

/// Passes iff every consecutive difference is `>= -tol·(1 + |D|)`.
pub fn check_monotone(curve: &DistanceCurve, tol: f64) -> MonotoneVerdict {
    monotone_verdict(&curve.samples, tol)
}

fn monotone_verdict(samples: &[(f64, f64)], tol: f64) -> MonotoneVerdict {
    let mut worst: f64 = 0.0;
    let mut first = None;
    for w in samples.windows(2) {
        let ((t0, d0), (t1, d1)) = (w[0], w[1]);
        let drop = d0 - d1;
        worst = worst.max(drop);
        if drop > tol * (1.0 + d0.abs()) && first.is_none() {
            first = Some((t0, t1));
        }
    }
    MonotoneVerdict { monotone: first.is_none(), worst_violation: worst, first_violation: first }
}

/// Fixed scenario catalogue for a spec on `n`-dimensional hypersurfaces.
pub fn catalogue(spec: &WeingartenSpec, n: usize) -> Result<Vec<PairScenario>> {
    let mut out = Vec::new();
    for eps in [Epsilon::Flat, Epsilon::Spherical, Epsilon::Hyperbolic] {
        let amb = AmbientSpace::space_form(eps, n + 1)?;
        let (outer, inner, d, r1, r2) = match eps {
            Epsilon::Spherical => (1.2, 0.6, 1.5, 0.5, 0.4),
            _ => (2.0, 1.0, 10.0, 1.0, 1.5),
        };
        out.push(PairScenario::new(PairKind::ConcentricSpheres { outer, inner }, amb, spec.clone())?);
        out.push(PairScenario::new(
            PairKind::CollinearDisjointSpheres { distance: d, first: r1, second: r2 },
            amb,
            spec.clone(),
        )?);
        if eps == Epsilon::Hyperbolic && spec.is_odd(n) {
            out.push(PairScenario::new(PairKind::SphereInsideHorosphere { radius: 1.0, gap: 0.5 }, amb, spec.clone())?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(n: usize) -> AmbientSpace {
        AmbientSpace::space_form(Epsilon::Flat, n + 1).unwrap()
    }

    fn h1() -> WeingartenSpec {
        WeingartenSpec::MeanCurvature(1)
    }

    #[test]
    fn concentric_euclidean_h1_matches_closed_form() {
        let sc = PairScenario::new(PairKind::ConcentricSpheres { outer: 2.0, inner: 1.0 }, euclid(2), h1()).unwrap();
        let curve = distance_curve(&sc, &SolverConfig::default(), 101).unwrap();
        assert!(curve.verdict.monotone);
        let last = curve.samples.last().unwrap().0;
        assert!((last - 0.99 * 0.25).abs() < 1e-12);
        for &(t, d) in &curve.samples {
            let exact = ((4.0 - 4.0 * t).sqrt() - (1.0 - 4.0 * t).sqrt()).powi(2);
            assert!((d - exact).abs() < 1e-8, "t={t} D={d} exact={exact}");
        }
        for w in curve.samples.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
    }

    #[test]
    fn collinear_euclidean_h1() {
        let kind = PairKind::CollinearDisjointSpheres { distance: 10.0, first: 1.0, second: 1.0 };
        let sc = PairScenario::new(kind, euclid(2), h1()).unwrap();
        let curve = distance_curve(&sc, &SolverConfig::default(), 50).unwrap();
        assert!(curve.verdict.monotone);
        for &(t, d) in &curve.samples {
            let exact = (10.0 - 2.0 * (1.0 - 4.0 * t).sqrt()).powi(2);
            assert!((d - exact).abs() < 1e-7);
        }
    }

    #[test]
    fn identical_spheres_have_zero_distance() {
        let sc = PairScenario::new(PairKind::ConcentricSpheres { outer: 1.0 + 1e-300, inner: 1.0 }, euclid(3), h1());
        // 1 + 1e-300 rounds to 1, so the pair is rejected as not disjoint
        assert!(sc.is_err());
        let sc = PairScenario::new(PairKind::ConcentricSpheres { outer: 1.5, inner: 1.0 }, euclid(3), h1()).unwrap();
        assert_eq!(sc.distance_sq(1.2, 1.2), 0.0);
    }

    #[test]
    fn parallel_horospheres_keep_their_distance() {
        let amb = AmbientSpace::space_form(Epsilon::Hyperbolic, 4).unwrap();
        let fam = IsoparametricFamily::new(amb, FamilyKind::Horosphere).unwrap();
        let a = FlowProblem::new(fam.clone(), h1(), 0.0, None).unwrap();
        let b = FlowProblem::new(fam, h1(), 1.5, None).unwrap();
        let times: Vec<f64> = (0..20).map(|i| 0.5 * i as f64).collect();
        let cfg = SolverConfig::default();
        let (sa, sb) = (integrate_at(&a, &cfg, &times).unwrap(), integrate_at(&b, &cfg, &times).unwrap());
        let curve = DistanceCurve::from_samples(sa.iter().zip(&sb).map(|(x, y)| (x.t, (y.tau - x.tau).powi(2))).collect());
        assert!(check_monotone(&curve, 1e-9).monotone);
    }

    #[test]
    fn checker_locates_decrease() {
        let curve = DistanceCurve::from_samples(vec![(0.0, 1.0), (1.0, 2.0), (2.0, 1.5), (3.0, 0.0)]);
        let v = check_monotone(&curve, 1e-9);
        assert!(!v.monotone);
        assert_eq!(v.first_violation, Some((1.0, 2.0)));
        assert_eq!(v.worst_violation, 1.5);
        let ok = DistanceCurve::from_samples(vec![(0.0, 1.0), (1.0, 1.0), (2.0, 3.0)]);
        assert!(check_monotone(&ok, 1e-9).monotone);
    }

    #[test]
    fn scenario_validation() {
        let s2 = AmbientSpace::space_form(Epsilon::Spherical, 3).unwrap();
        assert!(PairScenario::new(PairKind::ConcentricSpheres { outer: 1.6, inner: 1.0 }, s2, h1()).is_err());
        let kind = PairKind::CollinearDisjointSpheres { distance: 2.0, first: 1.0, second: 1.0 };
        assert!(PairScenario::new(kind, euclid(2), h1()).is_err());
        let hz = PairKind::SphereInsideHorosphere { radius: 1.0, gap: 0.5 };
        assert!(PairScenario::new(hz, euclid(2), h1()).is_err());
        let h3 = AmbientSpace::space_form(Epsilon::Hyperbolic, 4).unwrap();
        assert!(PairScenario::new(hz, h3, WeingartenSpec::SquaredNorm).is_err());
        let sc = PairScenario::new(PairKind::ConcentricSpheres { outer: 1.5, inner: 1.0 }, euclid(3), WeingartenSpec::SquaredNorm)
            .unwrap();
        assert_eq!(sc.justification(), Justification::InwardSpheres);
        let sc = PairScenario::new(hz, h3, WeingartenSpec::MeanCurvature(3)).unwrap();
        assert_eq!(sc.justification(), Justification::OddSpec);
        assert!(sc.is_extension());
    }

    #[test]
    fn hyperbolic_h1_against_explicit_radii() {
        // cosh τ(t) = e^{-nt} cosh τ₀ for the H_1 flow of spheres in H^{n+1}
        let amb = AmbientSpace::space_form(Epsilon::Hyperbolic, 3).unwrap();
        let sc = PairScenario::new(PairKind::ConcentricSpheres { outer: 2.0, inner: 1.0 }, amb, h1()).unwrap();
        let curve = distance_curve(&sc, &SolverConfig::default(), 40).unwrap();
        let radius = |r0: f64, t: f64| ((-2.0 * t).exp() * r0.cosh()).acosh();
        for &(t, d) in &curve.samples {
            let exact = (radius(2.0, t) - radius(1.0, t)).powi(2);
            assert!((d - exact).abs() < 1e-8, "t={t}");
        }
        assert!(curve.verdict.monotone);
    }

    #[test]
    fn catalogue_is_monotone_for_odd_specs() {
        for (spec, n) in [(h1(), 2), (h1(), 3), (WeingartenSpec::MeanCurvature(3), 3)] {
            for sc in catalogue(&spec, n).unwrap() {
                let curve = distance_curve(&sc, &SolverConfig::default(), 60).unwrap();
                assert!(curve.verdict.monotone, "{sc:?}");
                let d0 = curve.samples[0].1;
                let min = curve.samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
                assert!(min >= d0 - 1e-9);
            }
        }
    }
}
