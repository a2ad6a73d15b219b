//! Ambient spaces and their isoparametric families.
//!
//! Every family is parametrized by the focal parameter `τ` (the distance to
//! the focal set, or an arclength along the normal geodesics for families
//! without one) and exposes its principal curvatures as functions of `τ`
//! with the orientation that makes the convex members positively curved.

use std::f64::consts::PI;

use crate::epstrig::{cot, cot_eps, coth, Epsilon};
use crate::weingarten::{CurvatureProfile, WeingartenSpec};
use crate::{Error, Result};

/// Normed division algebra of a rank-one hyperbolic space `H_F^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl Field {
    pub const ALL: [Field; 4] = [Field::Real, Field::Complex, Field::Quaternion, Field::Octonion];

    pub fn real_dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
            Field::Quaternion => 4,
            Field::Octonion => 8,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
            Field::Quaternion => "K",
            Field::Octonion => "O",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AmbientSpace {
    /// `Q_ε^{dim}`; hypersurfaces have dimension `dim - 1`.
    SpaceForm { eps: Epsilon, dim: usize },
    HyperbolicField { field: Field, m: usize },
}

impl AmbientSpace {
    pub fn space_form(eps: Epsilon, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Invalid(format!("space form dimension must be at least 2, got {dim}")));
        }
        Ok(AmbientSpace::SpaceForm { eps, dim })
    }

    /// `H_F^m`. `m >= 2`, and the Cayley plane only exists for `m = 2`.
    pub fn hyperbolic_field(field: Field, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Invalid(format!("H_{}^m needs m >= 2, got {m}", field.symbol())));
        }
        if field == Field::Octonion && m != 2 {
            return Err(Error::Invalid(format!("the Cayley hyperbolic plane has m = 2, got {m}")));
        }
        Ok(AmbientSpace::HyperbolicField { field, m })
    }

    /// Real dimension `n + 1`.
    pub fn dim(&self) -> usize {
        match *self {
            AmbientSpace::SpaceForm { dim, .. } => dim,
            AmbientSpace::HyperbolicField { field, m } => m * field.real_dim(),
        }
    }

    /// Hypersurface dimension `n`.
    pub fn n(&self) -> usize {
        self.dim() - 1
    }

    /// Multiplicity of `coth τ` on geodesic spheres of `H_F^m`.
    pub fn q(&self) -> Option<usize> {
        match *self {
            AmbientSpace::SpaceForm { .. } => None,
            AmbientSpace::HyperbolicField { field, .. } => Some(match field {
                Field::Real => self.n(),
                Field::Complex => 1,
                Field::Quaternion => 3,
                Field::Octonion => 7,
            }),
        }
    }

    pub fn eps(&self) -> Option<Epsilon> {
        match *self {
            AmbientSpace::SpaceForm { eps, .. } => Some(eps),
            AmbientSpace::HyperbolicField { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            AmbientSpace::SpaceForm { eps: Epsilon::Flat, dim } => format!("R^{dim}"),
            AmbientSpace::SpaceForm { eps: Epsilon::Spherical, dim } => format!("S^{dim}"),
            AmbientSpace::SpaceForm { eps: Epsilon::Hyperbolic, dim } => format!("H^{dim}"),
            AmbientSpace::HyperbolicField { field, m } => format!("H_{}^{m}", field.symbol()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Horosphere,
    Equidistant,
    GeodesicSphere,
    /// Tube `Q_ε^{n-k} × S^k` around a totally geodesic `Q_ε^{n-k}`.
    GeneralizedCylinder { k: usize },
    /// Isoparametric family of `S^{n+1}` with `g` distinct principal curvatures.
    SphereMunzner { g: usize, multiplicities: Vec<usize> },
    HFGeodesicSphere,
    HFHorosphere,
}

/// Sign `δ` in `τ' = δ W(τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Drift {
    /// Members move toward the focal set at `τ = 0`.
    Decreasing,
    /// Horospheres advance into their horoball.
    Increasing,
}

impl Drift {
    pub fn sign(self) -> f64 {
        match self {
            Drift::Decreasing => -1.0,
            Drift::Increasing => 1.0,
        }
    }
}

/// What a flow reaches at an end of the τ-domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FocalEnd {
    /// Center of a geodesic sphere.
    Center,
    /// Totally geodesic core `Q_ε^{n-k}` of a generalized cylinder.
    Axis,
    /// Totally geodesic hyperplane `Π` of an equidistant family.
    Hyperplane,
    /// Münzner focal component at `τ = 0`.
    FocalPlus,
    /// Münzner focal component at `τ = π/g`.
    FocalMinus,
    /// Antipode of the center of a spherical geodesic sphere.
    Antipode,
    /// Unbounded end.
    Infinity,
}

impl FocalEnd {
    pub fn as_str(self) -> &'static str {
        match self {
            FocalEnd::Center => "center",
            FocalEnd::Axis => "axis",
            FocalEnd::Hyperplane => "hyperplane",
            FocalEnd::FocalPlus => "focal+",
            FocalEnd::FocalMinus => "focal-",
            FocalEnd::Antipode => "antipode",
            FocalEnd::Infinity => "infinity",
        }
    }
}

/// Open interval `(lo, hi)`, either end possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauDomain {
    pub lo: f64,
    pub hi: f64,
}

impl TauDomain {
    pub fn contains(&self, tau: f64) -> bool {
        tau > self.lo && tau < self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsoparametricFamily {
    ambient: AmbientSpace,
    kind: FamilyKind,
}

impl IsoparametricFamily {
    pub fn new(ambient: AmbientSpace, kind: FamilyKind) -> Result<Self> {
        use AmbientSpace::*;
        use FamilyKind::*;
        let n = ambient.n();
        let eps = ambient.eps();
        match (&kind, ambient) {
            (Horosphere | Equidistant, SpaceForm { eps: Epsilon::Hyperbolic, .. }) => {}
            (Horosphere | Equidistant, _) => {
                return Err(Error::Invalid(format!(
                    "{kind:?} needs a hyperbolic space form, got {}",
                    ambient.label()
                )))
            }
            (GeodesicSphere, SpaceForm { .. }) => {}
            (GeneralizedCylinder { k }, SpaceForm { .. }) => {
                if eps == Some(Epsilon::Spherical) {
                    return Err(Error::Invalid(
                        "generalized cylinders are defined for ε <= 0; use a Münzner family in the sphere".into(),
                    ));
                }
                if *k == 0 || *k >= n {
                    return Err(Error::Invalid(format!("cylinder needs 1 <= k <= n - 1 = {}, got {k}", n - 1)));
                }
            }
            (SphereMunzner { g, multiplicities }, SpaceForm { eps: Epsilon::Spherical, .. }) => {
                if ![1, 2, 3, 4, 6].contains(g) {
                    return Err(Error::Invalid(format!("g must be one of 1, 2, 3, 4, 6, got {g}")));
                }
                if multiplicities.len() != *g {
                    return Err(Error::Invalid(format!(
                        "expected {g} multiplicities, got {}",
                        multiplicities.len()
                    )));
                }
                if multiplicities.contains(&0) {
                    return Err(Error::Invalid("multiplicities must be positive".into()));
                }
                let total: usize = multiplicities.iter().sum();
                if total != n {
                    return Err(Error::Invalid(format!("multiplicities sum to {total}, expected n = {n}")));
                }
            }
            (HFGeodesicSphere | HFHorosphere, HyperbolicField { .. }) => {}
            _ => {
                return Err(Error::Invalid(format!(
                    "family {kind:?} is not defined in {}",
                    ambient.label()
                )))
            }
        }
        Ok(Self { ambient, kind })
    }

    pub fn ambient(&self) -> AmbientSpace {
        self.ambient
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.ambient.n()
    }

    pub fn tau_domain(&self) -> TauDomain {
        use FamilyKind::*;
        match &self.kind {
            Horosphere | HFHorosphere => TauDomain { lo: f64::NEG_INFINITY, hi: f64::INFINITY },
            SphereMunzner { g, .. } => TauDomain { lo: 0.0, hi: PI / *g as f64 },
            GeodesicSphere if self.ambient.eps() == Some(Epsilon::Spherical) => TauDomain { lo: 0.0, hi: PI },
            _ => TauDomain { lo: 0.0, hi: f64::INFINITY },
        }
    }

    pub fn drift(&self) -> Drift {
        match self.kind {
            FamilyKind::Horosphere | FamilyKind::HFHorosphere => Drift::Increasing,
            _ => Drift::Decreasing,
        }
    }

    /// True when the principal curvatures do not depend on `τ`.
    pub fn is_tau_independent(&self) -> bool {
        matches!(self.kind, FamilyKind::Horosphere | FamilyKind::HFHorosphere)
    }

    /// Label of the lower (`upper = false`) or upper end of the τ-domain.
    pub fn end_label(&self, upper: bool) -> FocalEnd {
        use FamilyKind::*;
        match (&self.kind, upper) {
            (Horosphere | HFHorosphere, _) => FocalEnd::Infinity,
            (SphereMunzner { .. }, false) => FocalEnd::FocalPlus,
            (SphereMunzner { .. }, true) => FocalEnd::FocalMinus,
            (GeodesicSphere, true) if self.ambient.eps() == Some(Epsilon::Spherical) => FocalEnd::Antipode,
            (_, true) => FocalEnd::Infinity,
            (GeodesicSphere | HFGeodesicSphere, false) => FocalEnd::Center,
            (GeneralizedCylinder { .. }, false) => FocalEnd::Axis,
            (Equidistant, false) => FocalEnd::Hyperplane,
        }
    }

    pub fn principal_curvatures(&self, tau: f64) -> Result<CurvatureProfile> {
        use FamilyKind::*;
        let dom = self.tau_domain();
        if !dom.contains(tau) {
            return Err(Error::OutOfDomain { tau, lo: dom.lo, hi: dom.hi });
        }
        let n = self.n();
        let blocks = match &self.kind {
            Horosphere => vec![(1.0, n)],
            Equidistant => vec![(tau.tanh(), n)],
            GeodesicSphere => vec![(cot_eps(self.eps(), tau)?, n)],
            GeneralizedCylinder { k } => {
                let flat = match self.eps() {
                    Epsilon::Hyperbolic => tau.tanh(),
                    _ => 0.0,
                };
                vec![(cot_eps(self.eps(), tau)?, *k), (flat, n - k)]
            }
            SphereMunzner { g, multiplicities } => {
                let step = PI / *g as f64;
                multiplicities
                    .iter()
                    .enumerate()
                    .map(|(i, &m)| Ok((cot(tau + i as f64 * step)?, m)))
                    .collect::<Result<Vec<_>>>()?
            }
            HFGeodesicSphere => {
                let q = self.q();
                let mut b = vec![(coth(tau)?, q)];
                if n > q {
                    b.push((0.5 * coth(0.5 * tau)?, n - q));
                }
                b
            }
            HFHorosphere => {
                let q = self.q();
                let mut b = vec![(1.0, q)];
                if n > q {
                    b.push((0.5, n - q));
                }
                b
            }
        };
        CurvatureProfile::new(blocks)
    }

    /// `W(τ)`: the Weingarten function of the member `f_τ`.
    pub fn speed(&self, spec: &WeingartenSpec, tau: f64) -> Result<f64> {
        spec.eval(&self.principal_curvatures(tau)?)
    }

    /// Human-readable principal-curvature formula.
    pub fn formula(&self) -> String {
        use FamilyKind::*;
        let n = self.n();
        match &self.kind {
            Horosphere => format!("k = 1 (mult {n}), tau in R"),
            Equidistant => format!("k = tanh(tau) (mult {n}), tau in (0, inf)"),
            GeodesicSphere => format!("k = cot_eps(tau) (mult {n}), eps = {}", self.eps()),
            GeneralizedCylinder { k } => format!(
                "k = cot_eps(tau) (mult {k}), {} (mult {}), eps = {}",
                if self.eps() == Epsilon::Hyperbolic { "tanh(tau)" } else { "0" },
                n - k,
                self.eps()
            ),
            SphereMunzner { g, multiplicities } => format!(
                "k_i = cot(tau + (i-1) pi/{g}), multiplicities {multiplicities:?}, tau in (0, pi/{g})"
            ),
            HFGeodesicSphere => {
                format!("k_1 = coth(tau) (mult {}), k_2 = coth(tau/2)/2 (mult {})", self.q(), n - self.q())
            }
            HFHorosphere => format!("k_1 = 1 (mult {}), k_2 = 1/2 (mult {})", self.q(), n - self.q()),
        }
    }

    fn eps(&self) -> Epsilon {
        self.ambient.eps().unwrap_or(Epsilon::Hyperbolic)
    }

    fn q(&self) -> usize {
        self.ambient.q().unwrap_or(self.n())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn sf(eps: i64, dim: usize) -> AmbientSpace {
        AmbientSpace::space_form(Epsilon::try_from(eps).unwrap(), dim).unwrap()
    }

    fn fam(amb: AmbientSpace, kind: FamilyKind) -> IsoparametricFamily {
        IsoparametricFamily::new(amb, kind).unwrap()
    }

    fn munzner(g: usize, m: Vec<usize>) -> IsoparametricFamily {
        let n: usize = m.iter().sum();
        fam(sf(1, n + 1), FamilyKind::SphereMunzner { g, multiplicities: m })
    }

    #[test]
    fn ambient_dimensions() {
        let c2 = AmbientSpace::hyperbolic_field(Field::Complex, 2).unwrap();
        assert_eq!((c2.dim(), c2.n(), c2.q()), (4, 3, Some(1)));
        let o2 = AmbientSpace::hyperbolic_field(Field::Octonion, 2).unwrap();
        assert_eq!((o2.dim(), o2.q()), (16, Some(7)));
        assert!(AmbientSpace::hyperbolic_field(Field::Octonion, 3).is_err());
        let r4 = AmbientSpace::hyperbolic_field(Field::Real, 4).unwrap();
        assert_eq!(r4.q(), Some(3));
        assert!(AmbientSpace::space_form(Epsilon::Flat, 1).is_err());
    }

    #[test]
    fn compatibility() {
        assert!(IsoparametricFamily::new(sf(0, 3), FamilyKind::Horosphere).is_err());
        assert!(IsoparametricFamily::new(sf(-1, 3), FamilyKind::SphereMunzner { g: 1, multiplicities: vec![2] }).is_err());
        assert!(IsoparametricFamily::new(sf(1, 5), FamilyKind::SphereMunzner { g: 2, multiplicities: vec![2, 1] }).is_err());
        assert!(IsoparametricFamily::new(sf(1, 5), FamilyKind::SphereMunzner { g: 5, multiplicities: vec![1; 4] }).is_err());
        assert!(IsoparametricFamily::new(sf(0, 4), FamilyKind::GeneralizedCylinder { k: 3 }).is_err());
        assert!(IsoparametricFamily::new(sf(1, 4), FamilyKind::GeneralizedCylinder { k: 1 }).is_err());
        let c2 = AmbientSpace::hyperbolic_field(Field::Complex, 2).unwrap();
        assert!(IsoparametricFamily::new(c2, FamilyKind::GeodesicSphere).is_err());
        assert!(IsoparametricFamily::new(sf(-1, 3), FamilyKind::HFHorosphere).is_err());
    }

    #[test]
    fn curvature_examples() {
        let f = munzner(2, vec![2, 2]);
        let k = f.principal_curvatures(FRAC_PI_4).unwrap();
        assert!((k.blocks()[0].0 - 1.0).abs() < 1e-15 && k.blocks()[0].1 == 2);
        assert!((k.blocks()[1].0 + 1.0).abs() < 1e-15 && k.blocks()[1].1 == 2);

        let k = fam(sf(0, 4), FamilyKind::GeodesicSphere).principal_curvatures(2.0).unwrap();
        assert_eq!(k.blocks(), &[(0.5, 3)]);

        let c2 = AmbientSpace::hyperbolic_field(Field::Complex, 2).unwrap();
        let k = fam(c2, FamilyKind::HFGeodesicSphere).principal_curvatures(1.0).unwrap();
        assert!((k.blocks()[0].0 - 1.3130352854993312).abs() < 1e-15);
        assert!((k.blocks()[1].0 - 1.0819767068693265).abs() < 1e-15);
        assert_eq!((k.blocks()[0].1, k.blocks()[1].1), (1, 2));
    }

    #[test]
    fn domains() {
        let d = munzner(4, vec![1, 1, 1, 1]).tau_domain();
        assert_eq!((d.lo, d.hi), (0.0, FRAC_PI_4));
        let d = fam(sf(-1, 3), FamilyKind::Horosphere).tau_domain();
        assert_eq!((d.lo, d.hi), (f64::NEG_INFINITY, f64::INFINITY));
        let d = fam(sf(1, 3), FamilyKind::GeodesicSphere).tau_domain();
        assert_eq!((d.lo, d.hi), (0.0, PI));
        let d = fam(sf(-1, 3), FamilyKind::Equidistant).tau_domain();
        assert_eq!((d.lo, d.hi), (0.0, f64::INFINITY));
        let f = fam(sf(0, 3), FamilyKind::GeodesicSphere);
        assert!(matches!(f.principal_curvatures(0.0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(f.principal_curvatures(-1.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn speed_examples() {
        let tau = 0.8;
        for eps in [-1, 0, 1] {
            let e = Epsilon::try_from(eps).unwrap();
            let f = fam(sf(eps, 5), FamilyKind::GeodesicSphere);
            let c = cot_eps(e, tau).unwrap();
            let a2 = f.speed(&WeingartenSpec::SquaredNorm, tau).unwrap();
            assert!((a2 - 4.0 * c * c).abs() < 1e-13);
            for r in 1..=4 {
                let hr = f.speed(&WeingartenSpec::MeanCurvature(r), tau).unwrap();
                let expected = crate::weingarten::binomial(4, r) * c.powi(r as i32);
                assert!((hr - expected).abs() < 1e-13 * expected.abs());
            }
        }
        for field in Field::ALL {
            let amb = AmbientSpace::hyperbolic_field(field, 2).unwrap();
            let (n, q) = (amb.n() as f64, amb.q().unwrap() as f64);
            let f = fam(amb, FamilyKind::HFGeodesicSphere);
            let h = f.speed(&WeingartenSpec::MeanCurvature(1), tau).unwrap();
            let expected = q / tau.tanh() + (n - q) / 2.0 / (tau / 2.0).tanh();
            assert!((h - expected).abs() < 1e-13 * expected);
        }
    }

    #[test]
    fn munzner_curvatures_decrease() {
        for (g, m) in [(2, vec![2, 3]), (3, vec![1, 1, 1]), (4, vec![2, 1, 2, 1]), (6, vec![1; 6])] {
            let f = munzner(g, m);
            let hi = f.tau_domain().hi;
            let h = 1e-6;
            for i in 1..100 {
                let tau = hi * i as f64 / 100.0;
                let a = f.principal_curvatures(tau - h).unwrap();
                let b = f.principal_curvatures(tau + h).unwrap();
                for (x, y) in a.blocks().iter().zip(b.blocks()) {
                    assert!(y.0 < x.0, "g={g} tau={tau}");
                }
            }
        }
    }

    #[test]
    fn blow_up_at_focal_end() {
        let cases = vec![
            (fam(sf(0, 4), FamilyKind::GeodesicSphere), 3),
            (fam(sf(1, 4), FamilyKind::GeodesicSphere), 3),
            (fam(sf(-1, 4), FamilyKind::GeodesicSphere), 3),
            (fam(sf(0, 5), FamilyKind::GeneralizedCylinder { k: 2 }), 2),
            (fam(sf(-1, 5), FamilyKind::GeneralizedCylinder { k: 3 }), 3),
            (fam(AmbientSpace::hyperbolic_field(Field::Quaternion, 2).unwrap(), FamilyKind::HFGeodesicSphere), 7),
        ];
        for (f, max_r) in cases {
            for r in 1..=max_r {
                let w = f.speed(&WeingartenSpec::MeanCurvature(r), 1e-6).unwrap();
                assert!(w > 1e5, "{:?} r={r} w={w}", f.kind());
            }
        }
    }

    #[test]
    fn horospheres_are_tau_independent() {
        let h = fam(sf(-1, 4), FamilyKind::Horosphere);
        let hf = fam(AmbientSpace::hyperbolic_field(Field::Complex, 3).unwrap(), FamilyKind::HFHorosphere);
        for f in [h, hf] {
            let k0 = f.principal_curvatures(0.0).unwrap();
            for tau in [-30.0, -1.5, 0.25, 7.0, 1e6] {
                assert_eq!(f.principal_curvatures(tau).unwrap(), k0);
            }
        }
    }

    #[test]
    fn equidistant_speed_vanishes_at_hyperplane() {
        let f = fam(sf(-1, 4), FamilyKind::Equidistant);
        for spec in [
            WeingartenSpec::MeanCurvature(1),
            WeingartenSpec::MeanCurvature(2),
            WeingartenSpec::SquaredNorm,
            WeingartenSpec::GaussK,
        ] {
            assert!(f.speed(&spec, 1e-9).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn hf_sphere_tends_to_horosphere() {
        for field in Field::ALL {
            let amb = AmbientSpace::hyperbolic_field(field, 2).unwrap();
            let s = fam(amb, FamilyKind::HFGeodesicSphere).principal_curvatures(20.0).unwrap();
            let h = fam(amb, FamilyKind::HFHorosphere).principal_curvatures(20.0).unwrap();
            assert_eq!(s.blocks().len(), h.blocks().len());
            for (a, b) in s.blocks().iter().zip(h.blocks()) {
                assert_eq!(a.1, b.1);
                assert!((a.0 - b.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn end_labels() {
        let f = munzner(2, vec![1, 1]);
        assert_eq!(f.end_label(false), FocalEnd::FocalPlus);
        assert_eq!(f.end_label(true), FocalEnd::FocalMinus);
        assert_eq!(fam(sf(-1, 3), FamilyKind::Equidistant).end_label(false), FocalEnd::Hyperplane);
        assert_eq!(fam(sf(0, 4), FamilyKind::GeneralizedCylinder { k: 1 }).end_label(false), FocalEnd::Axis);
        assert_eq!(fam(sf(-1, 3), FamilyKind::Horosphere).drift(), Drift::Increasing);
    }
}
