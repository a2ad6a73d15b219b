//! The `verify` suites: closed forms against quadrature, ODE against
//! quadrature, Weingarten axioms, qualitative flow behavior, and avoidance.

use std::f64::consts::FRAC_PI_4;
use std::io::Write;

use serde::{Deserialize, Serialize};
use wflow_core::avoidance::{catalogue, PairKind};
use wflow_core::{
    collapse_time, distance_curve, implicit_phi_residual, integrate, integrate_at, AmbientSpace, Epsilon, FamilyKind,
    Field, FlowProblem, FocalEnd, IsoparametricFamily, NonCollapseReason, PairScenario, SolverConfig, Verdict,
    WeingartenSpec,
};

use crate::record::{num, opt_num};

/// Quadrature tolerance used for reference collapse times.
pub const QUAD_TOL: f64 = 1e-13;
pub const CLOSED_FORM_REL_TOL: f64 = 1e-8;
pub const UNIT_K_ABS_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const AXIOM_SAMPLES: usize = 100;
pub const MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Oracle,
    Ode,
    Axioms,
    Theorems,
    Avoidance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub suite: String,
    pub case: String,
    pub value: Option<f64>,
    pub reference: Option<f64>,
    pub diff: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    fn compare(suite: &str, case: String, value: f64, reference: f64, tolerance: f64) -> Self {
        let diff = (value - reference).abs();
        Self {
            suite: suite.into(),
            case,
            value: Some(value),
            reference: Some(reference),
            diff: Some(diff),
            tolerance: Some(tolerance),
            pass: diff <= tolerance,
            detail: String::new(),
        }
    }

    fn flag(suite: &str, case: String, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            suite: suite.into(),
            case,
            value: None,
            reference: None,
            diff: None,
            tolerance: None,
            pass,
            detail: detail.into(),
        }
    }

    fn failed(suite: &str, case: String, err: impl std::fmt::Display) -> Self {
        Self::flag(suite, case, false, format!("error: {err}"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub lines: Vec<CheckLine>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.pass).count()
    }

    pub fn write_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for l in &self.lines {
            let mut s = format!("{} {:<9} {}", if l.pass { "PASS" } else { "FAIL" }, l.suite, l.case);
            if let (Some(v), Some(r), Some(d), Some(t)) = (l.value, l.reference, l.diff, l.tolerance) {
                s += &format!("  value={v:.16e} reference={r:.16e} diff={d:.3e} tol={t:.1e}");
            }
            if !l.detail.is_empty() {
                s += &format!("  {}", l.detail);
            }
            writeln!(out, "{s}")?;
        }
        writeln!(out, "{} checks, {} failed", self.lines.len(), self.failures())
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "suite,case,value,reference,diff,tolerance,pass,detail")?;
        for l in &self.lines {
            writeln!(
                out,
                "{},\"{}\",{},{},{},{},{},\"{}\"",
                l.suite,
                l.case,
                opt_num(l.value),
                opt_num(l.reference),
                opt_num(l.diff),
                l.tolerance.map(num).unwrap_or_default(),
                l.pass,
                l.detail.replace('"', "'")
            )?;
        }
        Ok(())
    }
}

/// A grid problem together with the tolerance its closed form is held to.
#[derive(Debug, Clone)]
pub struct GridCase {
    pub name: String,
    pub problem: FlowProblem,
    pub tolerance: Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Relative(f64),
    Absolute(f64),
}

impl Tolerance {
    pub fn bound(self, reference: f64) -> f64 {
        match self {
            Tolerance::Relative(r) => r * reference.abs(),
            Tolerance::Absolute(a) => a,
        }
    }
}

pub fn sphere(eps: Epsilon, n: usize, spec: WeingartenSpec, radius: f64) -> FlowProblem {
    let amb = AmbientSpace::space_form(eps, n + 1).expect("dimension >= 2");
    let fam = IsoparametricFamily::new(amb, FamilyKind::GeodesicSphere).expect("spheres exist in every space form");
    FlowProblem::new(fam, spec, radius, None).expect("grid radius in domain")
}

pub fn hf_sphere(field: Field, spec: WeingartenSpec, radius: f64) -> FlowProblem {
    let amb = AmbientSpace::hyperbolic_field(field, 2).expect("m = 2 is admissible for every field");
    let fam = IsoparametricFamily::new(amb, FamilyKind::HFGeodesicSphere).expect("valid family");
    FlowProblem::new(fam, spec, radius, None).expect("grid radius in domain")
}

pub fn munzner(g: usize, multiplicities: Vec<usize>, spec: WeingartenSpec, tau0: f64) -> FlowProblem {
    let n: usize = multiplicities.iter().sum();
    let amb = AmbientSpace::space_form(Epsilon::Spherical, n + 1).expect("dimension >= 2");
    let fam = IsoparametricFamily::new(amb, FamilyKind::SphereMunzner { g, multiplicities }).expect("valid family");
    FlowProblem::new(fam, spec, tau0, None).expect("grid tau0 in domain")
}

fn describe(p: &FlowProblem) -> String {
    let kind = match p.family().kind() {
        FamilyKind::Horosphere => "horosphere".to_string(),
        FamilyKind::Equidistant => "equidistant".to_string(),
        FamilyKind::GeodesicSphere => "sphere".to_string(),
        FamilyKind::GeneralizedCylinder { k } => format!("cylinder k={k}"),
        FamilyKind::SphereMunzner { g, multiplicities } => format!("munzner g={g} m={multiplicities:?}"),
        FamilyKind::HFGeodesicSphere => "hf-sphere".to_string(),
        FamilyKind::HFHorosphere => "hf-horosphere".to_string(),
    };
    format!("{} {kind} n={} {} tau0={}", p.family().ambient().label(), p.family().n(), p.spec().label(), p.tau0())
}

const RADII: [f64; 3] = [0.25, 0.5, 1.0];
const DIMS: [usize; 3] = [2, 3, 5];

/// Every problem with a closed-form collapse time that `verify` checks.
pub fn oracle_grid() -> Vec<GridCase> {
    use WeingartenSpec::*;
    let mut out = Vec::new();
    let mut push = |problem: FlowProblem, tolerance: Tolerance| {
        out.push(GridCase { name: describe(&problem), problem, tolerance });
    };
    let rel = Tolerance::Relative(CLOSED_FORM_REL_TOL);
    for n in DIMS {
        for r in RADII {
            push(sphere(Epsilon::Flat, n, SquaredNorm, r), rel);
            for k in 1..=n {
                push(sphere(Epsilon::Flat, n, MeanCurvature(k), r), rel);
            }
            for eps in [Epsilon::Spherical, Epsilon::Hyperbolic] {
                push(sphere(eps, n, MeanCurvature(1), r), rel);
                push(sphere(eps, n, MeanCurvature(2), r), rel);
                push(sphere(eps, n, SquaredNorm, r), rel);
            }
        }
        push(sphere(Epsilon::Spherical, n, MeanCurvature(1), FRAC_PI_4), rel);
        push(sphere(Epsilon::Spherical, n, MeanCurvature(2), FRAC_PI_4), rel);
    }
    push(sphere(Epsilon::Flat, 3, GaussK, 1.0), rel);
    for field in Field::ALL {
        for r in RADII {
            push(hf_sphere(field, MeanCurvature(1), r), rel);
        }
    }
    for tau0 in [0.3, 0.5, 0.6, 1.0, 1.4] {
        push(munzner(2, vec![2, 2], GaussK, tau0), Tolerance::Absolute(UNIT_K_ABS_TOL));
        push(munzner(2, vec![3, 2], GaussK, tau0), rel);
    }
    out
}

/// Problems without closed forms, exercising the remaining families and specs.
pub fn extra_grid() -> Vec<(String, FlowProblem)> {
    use WeingartenSpec::*;
    let mut out = Vec::new();
    let cyl = |eps: Epsilon, n: usize, k: usize, spec: WeingartenSpec, r: f64| {
        let amb = AmbientSpace::space_form(eps, n + 1).expect("dimension >= 2");
        let fam = IsoparametricFamily::new(amb, FamilyKind::GeneralizedCylinder { k }).expect("valid cylinder");
        FlowProblem::new(fam, spec, r, None).expect("radius in domain")
    };
    let problems = vec![
        cyl(Epsilon::Flat, 3, 1, MeanCurvature(1), 1.0),
        cyl(Epsilon::Flat, 3, 2, SquaredNorm, 0.5),
        cyl(Epsilon::Hyperbolic, 3, 1, MeanCurvature(1), 1.0),
        cyl(Epsilon::Hyperbolic, 4, 2, MeanCurvature(2), 0.8),
        sphere(Epsilon::Spherical, 3, MeanCurvature(3), 0.7),
        sphere(Epsilon::Hyperbolic, 3, GaussK, 0.7),
        sphere(Epsilon::Flat, 2, WeingartenSpec::power(MeanCurvature(1), 2.0), 1.0),
        sphere(Epsilon::Hyperbolic, 3, WeingartenSpec::power(MeanCurvature(2), 0.5), 1.0),
        munzner(2, vec![1, 3], MeanCurvature(1), 1.2),
        munzner(3, vec![1, 1, 1], MeanCurvature(1), 0.3),
        munzner(4, vec![1, 2, 1, 2], MeanCurvature(1), 0.2),
        hf_sphere(Field::Complex, SquaredNorm, 1.0),
        hf_sphere(Field::Quaternion, MeanCurvature(2), 0.5),
        hf_sphere(Field::Octonion, MeanCurvature(3), 0.5),
    ];
    for p in problems {
        out.push((describe(&p), p));
    }
    out
}

/// All problems compared by the ODE-vs-quadrature suite.
pub fn ode_grid() -> Vec<(String, FlowProblem)> {
    let mut out: Vec<(String, FlowProblem)> = oracle_grid().into_iter().map(|c| (c.name, c.problem)).collect();
    out.extend(extra_grid());
    out
}

pub fn run(suite: Suite, seed: u64) -> VerifyReport {
    let mut report = VerifyReport::default();
    let all = suite == Suite::All;
    if all || suite == Suite::Oracle {
        oracle_suite(&mut report);
    }
    if all || suite == Suite::Ode {
        ode_suite(&mut report, &SolverConfig::default());
    }
    if all || suite == Suite::Axioms {
        axiom_suite(&mut report, seed);
    }
    if all || suite == Suite::Theorems {
        theorem_suite(&mut report);
    }
    if all || suite == Suite::Avoidance {
        avoidance_suite(&mut report);
    }
    report
}

fn quadrature_t(p: &FlowProblem) -> wflow_core::Result<Option<f64>> {
    Ok(collapse_time(p, QUAD_TOL)?.verdict.collapse_time())
}

pub fn oracle_suite(report: &mut VerifyReport) {
    let cfg = SolverConfig::default();
    for case in oracle_grid() {
        let closed = wflow_core::closed_form_t(&case.problem).expect("grid cases have closed forms");
        match quadrature_t(&case.problem) {
            Ok(Some(t)) => report.lines.push(CheckLine::compare(
                "oracle",
                case.name.clone(),
                t,
                closed,
                case.tolerance.bound(closed),
            )),
            Ok(None) => report.lines.push(CheckLine::flag("oracle", case.name.clone(), false, "quadrature did not collapse")),
            Err(e) => report.lines.push(CheckLine::failed("oracle", case.name.clone(), e)),
        }
        match integrate(&case.problem, &cfg) {
            Ok(traj) => {
                let worst = traj
                    .samples
                    .iter()
                    .map(|s| implicit_phi_residual(&case.problem, s.t, s.phi).expect("closed form").abs())
                    .fold(0.0, f64::max);
                let mut line = CheckLine::compare("residual", case.name, worst, 0.0, RESIDUAL_TOL);
                line.detail = format!("{} samples", traj.samples.len());
                report.lines.push(line);
            }
            Err(e) => report.lines.push(CheckLine::failed("residual", case.name, e)),
        }
    }
}

/// `|T_quad - T_ode| <= 10 (rtol T + atol)` across [`ode_grid`].
pub fn ode_suite(report: &mut VerifyReport, cfg: &SolverConfig) {
    for (name, p) in ode_grid() {
        let line = match (quadrature_t(&p), integrate(&p, cfg)) {
            (Ok(Some(tq)), Ok(traj)) => match traj.terminal.verdict {
                Verdict::Collapsed { t, .. } => {
                    CheckLine::compare("ode", name, t, tq, 10.0 * (cfg.rtol * tq + cfg.atol))
                }
                v => CheckLine::flag("ode", name, false, format!("ODE verdict {}", v.name())),
            },
            (Ok(None), _) => CheckLine::flag("ode", name, false, "quadrature did not collapse"),
            (Err(e), _) | (_, Err(e)) => CheckLine::failed("ode", name, e),
        };
        report.lines.push(line);
    }
}

pub fn axiom_specs() -> Vec<WeingartenSpec> {
    use WeingartenSpec::*;
    vec![MeanCurvature(1), MeanCurvature(2), MeanCurvature(3), SquaredNorm, GaussK]
}

pub fn axiom_suite(report: &mut VerifyReport, seed: u64) {
    for n in [3, 5] {
        for spec in axiom_specs() {
            let r = spec.validate_axioms(n, AXIOM_SAMPLES, seed);
            for check in &r.checks {
                use wflow_core::weingarten::AxiomOutcome::*;
                let (pass, detail) = match &check.outcome {
                    Pass => (true, String::new()),
                    Skipped => (true, "skipped (not odd)".to_string()),
                    Fail { point, detail } => (false, format!("{detail} at {point:?}")),
                };
                let case = format!("{} n={n} {}", spec.label(), check.axiom.name());
                report.lines.push(CheckLine::flag("axioms", case, pass, detail));
            }
        }
    }
}

fn check(report: &mut VerifyReport, case: String, pass: bool, detail: String) {
    report.lines.push(CheckLine::flag("theorems", case, pass, detail));
}

/// Horosphere, equidistant and sphere behavior along integrated trajectories.
pub fn theorem_suite(report: &mut VerifyReport) {
    use WeingartenSpec::*;
    let cfg = SolverConfig::default();

    // horospheres move at constant speed forever
    let hyp = |n: usize| AmbientSpace::space_form(Epsilon::Hyperbolic, n + 1).expect("dimension >= 2");
    let mut horos = Vec::new();
    for n in [2, 3] {
        for spec in [MeanCurvature(1), SquaredNorm, MeanCurvature(2)] {
            let fam = IsoparametricFamily::new(hyp(n), FamilyKind::Horosphere).expect("valid");
            horos.push(FlowProblem::new(fam, spec, 0.0, Some(5.0)).expect("valid"));
        }
    }
    for field in Field::ALL {
        let amb = AmbientSpace::hyperbolic_field(field, 2).expect("valid");
        let fam = IsoparametricFamily::new(amb, FamilyKind::HFHorosphere).expect("valid");
        horos.push(FlowProblem::new(fam, MeanCurvature(1), 0.5, Some(5.0)).expect("valid"));
    }
    for p in horos {
        let name = describe(&p);
        let res = (|| -> wflow_core::Result<(bool, String)> {
            let c = collapse_time(&p, QUAD_TOL)?;
            let traj = integrate(&p, &cfg)?;
            let w = p.speed(p.tau0())?;
            let want = Verdict::NonCollapsing(NonCollapseReason::ConstantSpeedHorosphere);
            let worst = traj
                .samples
                .iter()
                .map(|s| (s.tau - (p.tau0() + w * s.t)).abs() / (1.0 + s.tau.abs()))
                .fold(0.0, f64::max);
            let ok = c.verdict == want && traj.terminal.verdict == want && worst <= 1e-12;
            Ok((ok, format!("verdict={} linear deviation={worst:.2e}", traj.terminal.verdict.name())))
        })();
        match res {
            Ok((ok, d)) => check(report, format!("horosphere {name}"), ok, d),
            Err(e) => report.lines.push(CheckLine::failed("theorems", name, e)),
        }
    }

    // equidistants creep toward the totally geodesic hyperplane
    for n in [2, 3] {
        for spec in [MeanCurvature(1), MeanCurvature(2), SquaredNorm] {
            let fam = IsoparametricFamily::new(hyp(n), FamilyKind::Equidistant).expect("valid");
            let p = FlowProblem::new(fam, spec, 1.0, Some(50.0)).expect("valid");
            let name = describe(&p);
            let res = (|| -> wflow_core::Result<(bool, String)> {
                let c = collapse_time(&p, QUAD_TOL)?;
                let times: Vec<f64> = (0..=500).map(|i| 0.1 * i as f64).collect();
                let s = integrate_at(&p, &cfg, &times)?;
                // φ = τ₀ - τ rounds to τ₀ once τ is tiny, so the shape is read off τ
                let tau: Vec<f64> = s.iter().map(|x| x.tau).collect();
                let increasing = tau.windows(2).all(|w| w[1] < w[0]);
                let concave = tau.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] >= -1e-12);
                let bounded = tau.iter().all(|&x| x > 0.0);
                let last_speed = s.last().expect("nonempty").speed;
                let ok = c.verdict == Verdict::NonCollapsing(NonCollapseReason::AsymptoticToPi)
                    && increasing
                    && concave
                    && bounded
                    && last_speed < 1e-3;
                Ok((
                    ok,
                    format!(
                        "verdict={} increasing={increasing} concave={concave} bounded={bounded} speed(50)={last_speed:.3e}",
                        c.verdict.name()
                    ),
                ))
            })();
            match res {
                Ok((ok, d)) => check(report, format!("equidistant {name}"), ok, d),
                Err(e) => report.lines.push(CheckLine::failed("theorems", name, e)),
            }
        }
    }

    // spheres collapse with φ increasing and strictly convex
    let mut spheres = Vec::new();
    for eps in [Epsilon::Flat, Epsilon::Spherical, Epsilon::Hyperbolic] {
        for spec in [MeanCurvature(1), MeanCurvature(2), SquaredNorm, GaussK] {
            spheres.push(sphere(eps, 3, spec, 1.0));
        }
    }
    for field in Field::ALL {
        spheres.push(hf_sphere(field, MeanCurvature(1), 1.0));
    }
    for p in spheres {
        let name = describe(&p);
        let res = (|| -> wflow_core::Result<(bool, String)> {
            let c = collapse_time(&p, QUAD_TOL)?;
            let Some(t) = c.verdict.collapse_time() else {
                return Ok((false, format!("verdict={}", c.verdict.name())));
            };
            let times: Vec<f64> = (0..200).map(|i| 0.99 * t * i as f64 / 199.0).collect();
            let s = integrate_at(&p, &cfg, &times)?;
            let phi: Vec<f64> = s.iter().map(|x| x.phi).collect();
            let increasing = phi.windows(2).all(|w| w[1] > w[0]);
            let convex = phi.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] > 0.0);
            Ok((increasing && convex, format!("T={t:.6e} increasing={increasing} convex={convex}")))
        })();
        match res {
            Ok((ok, d)) => check(report, format!("sphere {name}"), ok, d),
            Err(e) => report.lines.push(CheckLine::failed("theorems", name, e)),
        }
    }

    // Münzner end label follows the sign of W(τ₀)
    let cases = vec![
        munzner(2, vec![1, 3], MeanCurvature(1), 1.2),
        munzner(2, vec![1, 3], MeanCurvature(1), 0.3),
        munzner(2, vec![2, 2], GaussK, 0.6),
        munzner(3, vec![1, 1, 1], MeanCurvature(1), 0.3),
        munzner(3, vec![1, 1, 1], MeanCurvature(1), 0.8),
    ];
    for p in cases {
        let name = describe(&p);
        let res = (|| -> wflow_core::Result<(bool, String)> {
            let w = p.speed(p.tau0())?;
            let c = collapse_time(&p, QUAD_TOL)?;
            let traj = integrate(&p, &cfg)?;
            let want = if w > 0.0 { FocalEnd::FocalPlus } else { FocalEnd::FocalMinus };
            let ends = [c.verdict, traj.terminal.verdict].map(|v| match v {
                Verdict::Collapsed { end, .. } => Some(end),
                _ => None,
            });
            let ok = ends.iter().all(|e| *e == Some(want));
            Ok((ok, format!("W(tau0)={w:.3e} end={}", ends[0].map(|e| e.as_str()).unwrap_or("-"))))
        })();
        match res {
            Ok((ok, d)) => check(report, format!("end-sign {name}"), ok, d),
            Err(e) => report.lines.push(CheckLine::failed("theorems", name, e)),
        }
    }
}

/// Scenarios checked by the avoidance suite: the catalogues for `H_1`
/// (`n = 2, 3`) and `H_3` (`n = 3`), and `|A|^2` on inward spheres.
pub fn avoidance_scenarios() -> Vec<PairScenario> {
    use WeingartenSpec::*;
    let mut out = Vec::new();
    for (spec, n) in [(MeanCurvature(1), 2), (MeanCurvature(1), 3), (MeanCurvature(3), 3), (SquaredNorm, 2)] {
        out.extend(catalogue(&spec, n).expect("catalogue scenarios are valid"));
    }
    out
}

pub const AVOIDANCE_GRID: usize = 200;

fn describe_pair(s: &PairScenario) -> String {
    let kind = match s.kind() {
        PairKind::ConcentricSpheres { outer, inner } => format!("concentric {outer}/{inner}"),
        PairKind::CollinearDisjointSpheres { distance, first, second } => {
            format!("collinear d={distance} {first}+{second}")
        }
        PairKind::SphereInsideHorosphere { radius, gap } => format!("sphere-in-horoball r={radius} gap={gap}"),
    };
    format!("{} n={} {} {kind}", s.ambient().label(), s.ambient().n(), s.spec().label())
}

pub fn avoidance_suite(report: &mut VerifyReport) {
    let cfg = SolverConfig::default();
    for s in avoidance_scenarios() {
        let name = describe_pair(&s);
        match distance_curve(&s, &cfg, AVOIDANCE_GRID) {
            Ok(curve) => {
                let v = wflow_core::check_monotone(&curve, MONOTONE_TOL);
                let d0 = curve.samples[0].1;
                let min = curve.samples.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
                let pass = v.monotone && min >= d0 - MONOTONE_TOL;
                let mut detail = format!("worst drop={:.2e}", v.worst_violation);
                if s.is_extension() {
                    detail += " (extension)";
                }
                report.lines.push(CheckLine::flag("avoidance", name, pass, detail));
            }
            Err(e) => report.lines.push(CheckLine::failed("avoidance", name, e)),
        }
    }

    // closed-form distance for concentric Euclidean H_1 spheres
    let amb = AmbientSpace::space_form(Epsilon::Flat, 3).expect("valid");
    let s = PairScenario::new(PairKind::ConcentricSpheres { outer: 2.0, inner: 1.0 }, amb, WeingartenSpec::MeanCurvature(1))
        .expect("valid");
    let name = "concentric R^3 H_1 2/1 closed form".to_string();
    match distance_curve(&s, &cfg, AVOIDANCE_GRID) {
        Ok(curve) => {
            let worst = curve
                .samples
                .iter()
                .map(|&(t, d)| (d - ((4.0 - 4.0 * t).sqrt() - (1.0 - 4.0 * t).sqrt()).powi(2)).abs())
                .fold(0.0, f64::max);
            report.lines.push(CheckLine::compare("avoidance", name, worst, 0.0, 1e-8));
        }
        Err(e) => report.lines.push(CheckLine::failed("avoidance", name, e)),
    }
}
