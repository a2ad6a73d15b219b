//! The reduced flow `τ' = δ·W(τ)` and its collapse time.
//!
//! Two independent routes compute the collapse time:
//!
//! - [`integrate`] steps the ODE with an adaptive Dormand–Prince 5(4) pair
//!   and locates the time at which `τ` comes within `collapse_margin` of the
//!   focal end; the remaining sliver is closed by quadrature.
//! - [`collapse_time`] evaluates `T = ∫ dτ / |W(τ)|` over the traversed
//!   interval directly, splitting it into dyadic pieces toward the focal end.
//!
//! The displacement along the normal is `φ(t) = δ·(τ(t) - τ₀)`, so that
//! `φ' = W` and `φ(0) = 0`.

use std::f64::consts::FRAC_PI_2;

use crate::epstrig::Epsilon;
use crate::families::{Drift, FamilyKind, FocalEnd, IsoparametricFamily};
use crate::ode::{dopri5_step, ORDER};
use crate::quad;
use crate::weingarten::{CurvatureProfile, WeingartenSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FlowProblem {
    family: IsoparametricFamily,
    spec: WeingartenSpec,
    tau0: f64,
    t_max: Option<f64>,
}

impl FlowProblem {
    pub fn new(family: IsoparametricFamily, spec: WeingartenSpec, tau0: f64, t_max: Option<f64>) -> Result<Self> {
        spec.check(family.n())?;
        let dom = family.tau_domain();
        if !dom.contains(tau0) {
            return Err(Error::OutOfDomain { tau: tau0, lo: dom.lo, hi: dom.hi });
        }
        if family.kind() == &FamilyKind::GeodesicSphere
            && family.ambient().eps() == Some(Epsilon::Spherical)
            && tau0 >= FRAC_PI_2
        {
            return Err(Error::Invalid(format!(
                "spherical geodesic spheres must start strictly convex (tau0 < pi/2), got {tau0}"
            )));
        }
        if let Some(t) = t_max {
            if !(t > 0.0) {
                return Err(Error::Invalid(format!("t_max must be positive, got {t}")));
            }
        }
        let w = family.speed(&spec, tau0)?;
        if !w.is_finite() {
            return Err(Error::NonFinite(tau0));
        }
        Ok(Self { family, spec, tau0, t_max })
    }

    pub fn family(&self) -> &IsoparametricFamily {
        &self.family
    }

    pub fn spec(&self) -> &WeingartenSpec {
        &self.spec
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn t_max(&self) -> Option<f64> {
        self.t_max
    }

    pub fn with_t_max(mut self, t_max: Option<f64>) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn drift(&self) -> Drift {
        self.family.drift()
    }

    pub fn speed(&self, tau: f64) -> Result<f64> {
        let w = self.family.speed(&self.spec, tau)?;
        if w.is_finite() {
            Ok(w)
        } else {
            Err(Error::NonFinite(tau))
        }
    }

    /// Direction of travel in `τ` and the boundary the flow heads to.
    fn heading(&self) -> Result<Heading> {
        let w0 = self.speed(self.tau0)?;
        if w0 == 0.0 {
            return Err(Error::Stall(self.tau0));
        }
        let dir = (self.drift().sign() * w0).signum();
        let dom = self.family.tau_domain();
        let upper = dir > 0.0;
        Ok(Heading {
            dir,
            end: if upper { dom.hi } else { dom.lo },
            label: self.family.end_label(upper),
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Heading {
    dir: f64,
    end: f64,
    label: FocalEnd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    /// Distance to a finite τ-boundary at which the ODE route hands over to quadrature.
    pub collapse_margin: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_step: 0.1, collapse_margin: 1e-6 }
    }
}

impl SolverConfig {
    pub fn check(&self) -> Result<()> {
        let unit = |x: f64| x > 0.0 && x < 1.0;
        if !unit(self.rtol) || !unit(self.atol) {
            return Err(Error::Invalid(format!(
                "rtol and atol must lie in (0, 1), got {} and {}",
                self.rtol, self.atol
            )));
        }
        if !(self.max_step > 0.0) || !(self.collapse_margin > 0.0) {
            return Err(Error::Invalid("max_step and collapse_margin must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonCollapseReason {
    /// Horospheres: τ-independent speed, the flow moves forever.
    ConstantSpeedHorosphere,
    /// The speed vanishes at the end the flow approaches (equidistants to `Π`).
    AsymptoticToPi,
}

impl NonCollapseReason {
    pub fn as_str(self) -> &'static str {
        match self {
            NonCollapseReason::ConstantSpeedHorosphere => "constant-speed-horosphere",
            NonCollapseReason::AsymptoticToPi => "asymptotic-to-pi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Collapsed { t: f64, end: FocalEnd },
    NonCollapsing(NonCollapseReason),
    Truncated { t_max: f64 },
}

impl Verdict {
    pub fn collapse_time(&self) -> Option<f64> {
        match self {
            Verdict::Collapsed { t, .. } => Some(*t),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Collapsed { .. } => "collapsed",
            Verdict::NonCollapsing(_) => "non-collapsing",
            Verdict::Truncated { .. } => "truncated",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseResult {
    pub verdict: Verdict,
    pub error_estimate: f64,
    /// Whether `|W|` was observed nondecreasing along the traversed interval
    /// (the monotone-speed hypothesis for Münzner families). `None` when not sampled.
    pub speed_increasing: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub tau: f64,
    pub phi: f64,
    pub speed: f64,
    pub curvatures: CurvatureProfile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrajectory {
    pub samples: Vec<Sample>,
    pub terminal: CollapseResult,
}

impl FlowTrajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }

    /// Least-squares rate `λ` in `|τ - τ_end| ~ e^{-λt}` over the second half
    /// of the samples. Only meaningful for flows creeping toward a boundary.
    pub fn empirical_decay_rate(&self, boundary: f64) -> Option<f64> {
        let tail: Vec<(f64, f64)> = self.samples[self.samples.len() / 2..]
            .iter()
            .filter(|s| s.t > 0.0 && (s.tau - boundary).abs() > 0.0)
            .map(|s| (s.t, (s.tau - boundary).abs().ln()))
            .collect();
        if tail.len() < 3 {
            return None;
        }
        let m = tail.len() as f64;
        let (st, sy) = tail.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mt, my) = (st / m, sy / m);
        let (num, den) = tail.iter().fold((0.0, 0.0), |a, p| {
            (a.0 + (p.0 - mt) * (p.1 - my), a.1 + (p.0 - mt) * (p.0 - mt))
        });
        (den > 0.0).then(|| -num / den)
    }
}

fn sample(problem: &FlowProblem, t: f64, tau: f64) -> Result<Sample> {
    let curvatures = problem.family.principal_curvatures(tau)?;
    let speed = problem.spec.eval(&curvatures)?;
    // + 0.0 turns -0 into 0 at t = 0
    let phi = problem.drift().sign() * (tau - problem.tau0) + 0.0;
    Ok(Sample { t, tau, phi, speed, curvatures })
}

/// Stage failures caused by a trial step leaving the τ-domain shrink the step
/// instead of aborting.
fn is_domain_error(e: &Error) -> bool {
    matches!(e, Error::OutOfDomain { .. } | Error::Pole { .. } | Error::NonFinite(_))
}

/// Integrates the flow until collapse, `t_max`, or step-size underflow.
pub fn integrate(problem: &FlowProblem, config: &SolverConfig) -> Result<FlowTrajectory> {
    config.check()?;
    let t_max = match problem.t_max {
        Some(t) => t,
        None => {
            let probe = collapse_time(problem, config.atol.max(1e-12))?;
            if !matches!(probe.verdict, Verdict::Collapsed { .. }) {
                return Err(Error::UnboundedHorizon);
            }
            f64::INFINITY
        }
    };
    let (samples, terminal) = drive(problem, config, t_max, None)?;
    Ok(FlowTrajectory { samples, terminal })
}

/// Integrates the flow and returns samples exactly at `times` (ascending,
/// nonnegative). Fails if the flow collapses before the last requested time.
pub fn integrate_at(problem: &FlowProblem, config: &SolverConfig, times: &[f64]) -> Result<Vec<Sample>> {
    config.check()?;
    if times.is_empty() {
        return Ok(vec![]);
    }
    if times[0] < 0.0 || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Invalid("output times must be nonnegative and ascending".into()));
    }
    let last = *times.last().expect("nonempty");
    let (samples, terminal) = drive(problem, config, last, Some(times))?;
    if let Verdict::Collapsed { t, .. } = terminal.verdict {
        return Err(Error::Invalid(format!("flow collapses at t = {t} before requested time {last}")));
    }
    Ok(samples)
}

/// Fraction of the requested local tolerance the step controller aims for,
/// so that accumulated global error stays within a small multiple of it.
const LOCAL_SAFETY: f64 = 0.05;

fn drive(
    problem: &FlowProblem,
    config: &SolverConfig,
    t_end: f64,
    outputs: Option<&[f64]>,
) -> Result<(Vec<Sample>, CollapseResult)> {
    let heading = problem.heading()?;
    let delta = problem.drift().sign();
    let mut rhs = |tau: f64| -> Result<f64> { Ok(delta * problem.speed(tau)?) };

    let tau0 = problem.tau0;
    let tau_stop = heading.end - heading.dir * config.collapse_margin;
    // a finite end that the flow only approaches asymptotically is not an event
    let collapsing = heading.end.is_finite()
        && matches!(tail_integral(problem, &heading, tau_stop, config.atol)?, Tail::Converged { .. });
    let h_floor = 1e-14 * tau0.abs().max(1.0);

    let mut samples = Vec::new();
    let mut rec = Recorder { outputs, next: 0 };

    let mut t = 0.0;
    let mut tau = tau0;
    let mut f = rhs(tau)?;
    rec.record(problem, &mut samples, t, tau, false)?;

    let mut err_sum = 0.0;

    if collapsing && heading.dir * (tau - tau_stop) >= 0.0 {
        return finish_collapse(problem, &heading, samples, t, tau, config, err_sum);
    }

    let mut h = (1e-3 * tau0.abs().max(1.0) / f.abs()).min(config.max_step);
    loop {
        if t >= t_end {
            let verdict = if problem.family.is_tau_independent() {
                Verdict::NonCollapsing(NonCollapseReason::ConstantSpeedHorosphere)
            } else {
                Verdict::Truncated { t_max: t_end }
            };
            return Ok((samples, CollapseResult { verdict, error_estimate: 0.0, speed_increasing: None }));
        }
        let mut h_try = h.min(config.max_step).min(t_end - t);
        let mut clip_to = None;
        if let Some(next) = rec.pending() {
            if t + h_try >= next {
                h_try = next - t;
                clip_to = Some(next);
            }
        }
        let clipped = clip_to.is_some();
        if h_try < h_floor && !(clipped || t + h_try >= t_end) {
            if collapsing {
                return finish_collapse(problem, &heading, samples, t, tau, config, err_sum);
            }
            return Err(Error::StepUnderflow { t, tau, h: h_try });
        }

        let step = match dopri5_step(&mut rhs, tau, f, h_try) {
            Ok(s) => s,
            Err(e) if is_domain_error(&e) => {
                h = 0.25 * h_try;
                if h < h_floor {
                    if collapsing {
                        return finish_collapse(problem, &heading, samples, t, tau, config, err_sum);
                    }
                    return Err(Error::StepUnderflow { t, tau, h });
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        let scale = LOCAL_SAFETY * (config.atol + config.rtol * tau.abs().max(step.y.abs()));
        let err_norm = step.error / scale;
        if !(err_norm <= 1.0) {
            let shrink = if err_norm.is_finite() { (0.9 * err_norm.powf(-1.0 / ORDER)).max(0.2) } else { 0.2 };
            h = shrink * h_try;
            if h < h_floor {
                // stiff approach to the focal end: close the remainder by quadrature
                if collapsing {
                    return finish_collapse(problem, &heading, samples, t, tau, config, err_sum);
                }
                return Err(Error::StepUnderflow { t, tau, h });
            }
            continue;
        }

        if collapsing && heading.dir * (step.y - tau_stop) >= 0.0 {
            let h_event = locate(&mut rhs, tau, f, h_try, tau_stop, heading.dir)?;
            let t_event = t + h_event;
            err_sum += step.error;
            rec.record(problem, &mut samples, t_event, tau_stop, true)?;
            return finish_collapse(problem, &heading, samples, t_event, tau_stop, config, err_sum);
        }

        t = match clip_to {
            Some(next) => next,
            None if t + h_try >= t_end => t_end,
            None => t + h_try,
        };
        tau = step.y;
        f = step.f_new;
        err_sum += step.error;
        rec.record(problem, &mut samples, t, tau, false)?;

        if !clipped {
            let grow = if err_norm > 0.0 { 0.9 * err_norm.powf(-1.0 / ORDER) } else { 5.0 };
            h = h_try * grow.clamp(0.2, 5.0);
        }
    }
}

/// Collects every accepted point, or only the requested output times.
struct Recorder<'a> {
    outputs: Option<&'a [f64]>,
    next: usize,
}

impl Recorder<'_> {
    fn pending(&self) -> Option<f64> {
        self.outputs.and_then(|o| o.get(self.next).copied())
    }

    fn record(&mut self, problem: &FlowProblem, samples: &mut Vec<Sample>, t: f64, tau: f64, force: bool) -> Result<()> {
        match self.outputs {
            None => samples.push(sample(problem, t, tau)?),
            Some(times) => {
                while self.next < times.len() && times[self.next] <= t {
                    if times[self.next] == t || force {
                        samples.push(sample(problem, t, tau)?);
                    }
                    self.next += 1;
                }
            }
        }
        Ok(())
    }
}

/// Step length `h* ∈ (0, h]` with `τ(h*) = target`, by the Illinois variant
/// of regula falsi on the single-step map.
fn locate<F>(rhs: &mut F, tau: f64, f: f64, h: f64, target: f64, dir: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut g = |hh: f64| -> Result<f64> { Ok(dir * (dopri5_step(rhs, tau, f, hh)?.y - target)) };
    let (mut a, mut ga) = (0.0, dir * (tau - target));
    let (mut b, mut gb) = (h, g(h)?);
    let tol = 1e-15 * target.abs().max(1.0);
    let mut side = 0;
    for _ in 0..200 {
        let c = if gb != ga { (a * gb - b * ga) / (gb - ga) } else { 0.5 * (a + b) };
        let c = if c > a && c < b { c } else { 0.5 * (a + b) };
        let gc = match g(c) {
            Ok(v) => v,
            Err(e) if is_domain_error(&e) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        if gc.abs() <= tol || (b - a) <= 1e-16 * b {
            return Ok(c);
        }
        if gc < 0.0 {
            a = c;
            ga = gc;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        } else {
            b = c;
            gb = if gc.is_finite() { gc } else { gb };
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}

fn finish_collapse(
    problem: &FlowProblem,
    heading: &Heading,
    samples: Vec<Sample>,
    t: f64,
    tau: f64,
    config: &SolverConfig,
    err_sum: f64,
) -> Result<(Vec<Sample>, CollapseResult)> {
    let tail = tail_integral(problem, heading, tau, config.atol)?;
    let Tail::Converged { value, error } = tail else {
        return Err(Error::Quadrature(format!(
            "remaining integral from tau = {tau} to the focal end diverges"
        )));
    };
    let w = problem.speed(tau)?.abs();
    let verdict = Verdict::Collapsed { t: t + value, end: heading.label };
    Ok((samples, CollapseResult { verdict, error_estimate: error + err_sum / w, speed_increasing: None }))
}

enum Tail {
    Converged { value: f64, error: f64 },
    Diverged,
}

/// `∫ dτ/|W|` from `from` to the heading's end.
fn tail_integral(problem: &FlowProblem, heading: &Heading, from: f64, tol: f64) -> Result<Tail> {
    let span = (heading.end - from).abs();
    let point = |s: f64| heading.end - heading.dir * s;
    let piece_at = |k: i32| -> (f64, f64) {
        if heading.end.is_finite() {
            (span * 2f64.powi(-(k + 1)), span * 2f64.powi(-k))
        } else {
            (2f64.powi(k) - 1.0, 2f64.powi(k + 1) - 1.0)
        }
    };
    let integrand = |x: f64| -> Result<f64> {
        let tau = if heading.end.is_finite() { point(x) } else { from + heading.dir * x };
        Ok(1.0 / problem.speed(tau)?.abs())
    };

    let max_pieces = if heading.end.is_finite() { 1000 } else { 64 };
    let divergence_bound = 1e6 * problem.tau0.abs().max(1.0);
    let mut total = 0.0;
    let mut error = 0.0;
    let mut ratios: Vec<f64> = Vec::new();
    let mut prev: Option<f64> = None;

    for k in 0..max_pieces {
        let (lo, hi) = piece_at(k);
        if heading.end.is_finite() && (point(lo) == heading.end || lo == 0.0) {
            // the next piece is below the resolution of τ near the end
            return Ok(match ratios.last() {
                Some(&r) if r < 0.9 => {
                    let rest = prev.unwrap_or(0.0) * r / (1.0 - r);
                    Tail::Converged { value: total + rest, error: error + rest }
                }
                _ => Tail::Diverged,
            });
        }
        let piece_tol = 0.15 * tol / f64::from((k + 1) * (k + 1));
        let q = quad::integrate(integrand, lo, hi, piece_tol, 1e-13, 400)?;
        total += q.value;
        error += q.error;
        if let Some(p) = prev {
            ratios.push(if p > 0.0 { q.value / p } else { f64::INFINITY });
        }
        prev = Some(q.value);

        if total > divergence_bound {
            return Ok(Tail::Diverged);
        }
        let n = ratios.len();
        if n >= 2 {
            let (r1, r2) = (ratios[n - 2], ratios[n - 1]);
            if r1 < 0.9 && r2 < 0.9 {
                let rest = q.value * r2 / (1.0 - r2);
                if rest <= 0.25 * tol {
                    return Ok(Tail::Converged { value: total + rest, error: error + rest });
                }
            }
        }
        if n >= 6 && ratios[n - 6..].iter().all(|&r| r >= 0.95) {
            return Ok(Tail::Diverged);
        }
    }
    Ok(Tail::Diverged)
}

/// Collapse time by quadrature of `dτ/|W(τ)|` from `τ₀` to the focal end.
pub fn collapse_time(problem: &FlowProblem, tol: f64) -> Result<CollapseResult> {
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let heading = problem.heading()?;
    let w0 = problem.speed(problem.tau0)?;

    // scan the traversed interval for sign changes and the monotone-speed hypothesis
    const SCAN: usize = 64;
    let reach = if heading.end.is_finite() { (heading.end - problem.tau0).abs() } else { SCAN as f64 };
    let mut last = w0.abs();
    let mut increasing = true;
    for j in 1..SCAN {
        let tau = problem.tau0 + heading.dir * reach * j as f64 / SCAN as f64;
        let w = problem.speed(tau)?;
        if w == 0.0 || w.signum() != w0.signum() {
            return Err(Error::Stall(tau));
        }
        if w.abs() < last * (1.0 - 1e-12) {
            increasing = false;
        }
        last = w.abs();
    }

    let verdict_error = match tail_integral(problem, &heading, problem.tau0, tol)? {
        Tail::Converged { value, error } => (Verdict::Collapsed { t: value, end: heading.label }, error),
        Tail::Diverged => {
            let reason = if problem.family.is_tau_independent() {
                NonCollapseReason::ConstantSpeedHorosphere
            } else {
                NonCollapseReason::AsymptoticToPi
            };
            (Verdict::NonCollapsing(reason), 0.0)
        }
    };
    Ok(CollapseResult { verdict: verdict_error.0, error_estimate: verdict_error.1, speed_increasing: Some(increasing) })
}

/// `φ(t)` by monotone cubic Hermite interpolation of the samples, using the
/// sampled speeds as slopes (Fritsch–Carlson limited).
pub fn phi_of_t(trajectory: &FlowTrajectory, t: f64) -> Result<f64> {
    let s = &trajectory.samples;
    let end = trajectory.last().t;
    if !(t >= 0.0 && t <= end) {
        return Err(Error::TimeOutOfRange { t, end });
    }
    let i = s.partition_point(|x| x.t <= t);
    if i == 0 {
        return Ok(s[0].phi);
    }
    if i >= s.len() {
        return Ok(s[s.len() - 1].phi);
    }
    let (a, b) = (&s[i - 1], &s[i]);
    let h = b.t - a.t;
    let delta = (b.phi - a.phi) / h;
    let (mut ma, mut mb) = (a.speed, b.speed);
    if delta == 0.0 {
        ma = 0.0;
        mb = 0.0;
    } else {
        let (mut alpha, mut beta) = (ma / delta, mb / delta);
        alpha = alpha.max(0.0);
        beta = beta.max(0.0);
        let r = alpha.hypot(beta);
        if r > 3.0 {
            alpha *= 3.0 / r;
            beta *= 3.0 / r;
        }
        ma = alpha * delta;
        mb = beta * delta;
    }
    let x = (t - a.t) / h;
    let (x2, x3) = (x * x, x * x * x);
    let h00 = 2.0 * x3 - 3.0 * x2 + 1.0;
    let h10 = x3 - 2.0 * x2 + x;
    let h01 = -2.0 * x3 + 3.0 * x2;
    let h11 = x3 - x2;
    Ok(h00 * a.phi + h10 * h * ma + h01 * b.phi + h11 * h * mb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{AmbientSpace, Field};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn sf(eps: i64, dim: usize) -> AmbientSpace {
        AmbientSpace::space_form(Epsilon::try_from(eps).unwrap(), dim).unwrap()
    }

    fn problem(amb: AmbientSpace, kind: FamilyKind, spec: WeingartenSpec, tau0: f64, t_max: Option<f64>) -> FlowProblem {
        FlowProblem::new(IsoparametricFamily::new(amb, kind).unwrap(), spec, tau0, t_max).unwrap()
    }

    fn collapsed(r: &CollapseResult) -> (f64, FocalEnd) {
        match r.verdict {
            Verdict::Collapsed { t, end } => (t, end),
            v => panic!("expected collapse, got {v:?}"),
        }
    }

    #[test]
    fn problem_validation() {
        let fam = IsoparametricFamily::new(sf(1, 3), FamilyKind::GeodesicSphere).unwrap();
        assert!(FlowProblem::new(fam.clone(), WeingartenSpec::MeanCurvature(1), 2.0, None).is_err());
        assert!(FlowProblem::new(fam.clone(), WeingartenSpec::MeanCurvature(3), 1.0, None).is_err());
        assert!(FlowProblem::new(fam.clone(), WeingartenSpec::MeanCurvature(1), 0.0, None).is_err());
        assert!(FlowProblem::new(fam, WeingartenSpec::MeanCurvature(1), 1.0, Some(-1.0)).is_err());
        let bad = SolverConfig { rtol: 0.0, ..SolverConfig::default() };
        assert!(bad.check().is_err());
    }

    #[test]
    fn horosphere_moves_linearly() {
        let p = problem(sf(-1, 4), FamilyKind::Horosphere, WeingartenSpec::MeanCurvature(1), 0.0, Some(5.0));
        let traj = integrate(&p, &SolverConfig::default()).unwrap();
        assert_eq!(traj.terminal.verdict, Verdict::NonCollapsing(NonCollapseReason::ConstantSpeedHorosphere));
        for s in &traj.samples {
            assert!((s.tau - 3.0 * s.t).abs() <= 1e-12 * (1.0 + s.tau.abs()));
        }
        assert!((phi_of_t(&traj, 2.0).unwrap() - 6.0).abs() < 1e-12);
        assert_eq!(phi_of_t(&traj, 0.0).unwrap(), 0.0);
        let c = collapse_time(&p, 1e-10).unwrap();
        assert_eq!(c.verdict, Verdict::NonCollapsing(NonCollapseReason::ConstantSpeedHorosphere));
    }

    #[test]
    fn euclidean_squared_norm_sphere() {
        let p = problem(sf(0, 3), FamilyKind::GeodesicSphere, WeingartenSpec::SquaredNorm, 1.0, None);
        let traj = integrate(&p, &SolverConfig::default()).unwrap();
        let (t, end) = collapsed(&traj.terminal);
        assert_eq!(end, FocalEnd::Center);
        assert!((t - 1.0 / 6.0).abs() < 1e-9);
        for &tt in &[0.01, 0.05, 1.0 / 12.0, 0.12, 0.16] {
            let phi = phi_of_t(&traj, tt).unwrap();
            let exact = 1.0 - (1.0 - 6.0 * tt).cbrt();
            assert!((phi - exact).abs() < 1e-6, "t={tt} phi={phi} exact={exact}");
        }
        assert!(phi_of_t(&traj, 1.0).is_err());
    }

    #[test]
    fn quadrature_examples() {
        let p = problem(sf(1, 3), FamilyKind::GeodesicSphere, WeingartenSpec::MeanCurvature(1), FRAC_PI_4, None);
        let (t, _) = collapsed(&collapse_time(&p, 1e-13).unwrap());
        assert!((t - 2f64.ln() / 4.0).abs() < 1e-12);

        let m = FamilyKind::SphereMunzner { g: 2, multiplicities: vec![2, 2] };
        let p = problem(sf(1, 5), m, WeingartenSpec::GaussK, 0.6, None);
        let r = collapse_time(&p, 1e-13).unwrap();
        let (t, end) = collapsed(&r);
        assert!((t - 0.6).abs() < 1e-12);
        assert_eq!(end, FocalEnd::FocalPlus);
        assert_eq!(r.speed_increasing, Some(true));

        let c2 = AmbientSpace::hyperbolic_field(Field::Complex, 2).unwrap();
        let p = problem(c2, FamilyKind::HFGeodesicSphere, WeingartenSpec::MeanCurvature(1), 1.0, None);
        let (t, _) = collapsed(&collapse_time(&p, 1e-13).unwrap());
        // mpmath quadrature of 1/H over (0, 1) at 30 digits
        assert!((t - 0.1544968378881353).abs() < 1e-12);
    }

    #[test]
    fn equidistant_does_not_collapse() {
        let p = problem(sf(-1, 3), FamilyKind::Equidistant, WeingartenSpec::MeanCurvature(1), 1.0, Some(10.0));
        let c = collapse_time(&p, 1e-10).unwrap();
        assert_eq!(c.verdict, Verdict::NonCollapsing(NonCollapseReason::AsymptoticToPi));
        assert_eq!(c.speed_increasing, Some(false));
        let traj = integrate(&p, &SolverConfig::default()).unwrap();
        assert_eq!(traj.terminal.verdict, Verdict::Truncated { t_max: 10.0 });
        let last = traj.last();
        assert!(last.tau > 0.0 && last.tau < 1e-6);
        // τ(t) = asinh(sinh(1) e^{-2t})
        let exact = (1f64.sinh() * (-20f64).exp()).asinh();
        assert!((last.tau - exact).abs() < 1e-10 * exact.max(1e-12) + 1e-14);
        let rate = traj.empirical_decay_rate(0.0).unwrap();
        assert!((rate - 2.0).abs() < 1e-3, "rate {rate}");
        let unbounded = p.clone().with_t_max(None);
        assert_eq!(integrate(&unbounded, &SolverConfig::default()), Err(Error::UnboundedHorizon));

        let p2 = problem(sf(-1, 3), FamilyKind::Equidistant, WeingartenSpec::SquaredNorm, 0.5, None);
        let c = collapse_time(&p2, 1e-10).unwrap();
        assert_eq!(c.verdict, Verdict::NonCollapsing(NonCollapseReason::AsymptoticToPi));
    }

    #[test]
    fn munzner_negative_speed_heads_to_focal_minus() {
        // H_1 on g = 2, m = (1, 3) near π/2: 1·cot τ - 3 tan τ < 0
        let m = FamilyKind::SphereMunzner { g: 2, multiplicities: vec![1, 3] };
        let p = problem(sf(1, 5), m, WeingartenSpec::MeanCurvature(1), 1.2, None);
        assert!(p.speed(1.2).unwrap() < 0.0);
        let r = collapse_time(&p, 1e-12).unwrap();
        let (t, end) = collapsed(&r);
        assert_eq!(end, FocalEnd::FocalMinus);
        let traj = integrate(&p, &SolverConfig::default()).unwrap();
        let (t_ode, end_ode) = collapsed(&traj.terminal);
        assert_eq!(end_ode, FocalEnd::FocalMinus);
        assert!((t - t_ode).abs() < 1e-8);
        // φ runs negative toward τ₀ - π/2
        let last = traj.last();
        assert!(last.phi < 0.0);
        assert!(last.tau > 1.2);
        assert!((last.phi - (1.2 - PI / 2.0)).abs() < 2e-6);
    }

    #[test]
    fn stall_is_reported() {
        // H_2 on g = 2, m = (2, 3) changes sign at τ ≈ 0.402 and τ ≈ 0.929;
        // from τ₀ = 1.2 it is positive and drives τ down into the zero
        let m = FamilyKind::SphereMunzner { g: 2, multiplicities: vec![2, 3] };
        let p = problem(sf(1, 6), m, WeingartenSpec::MeanCurvature(2), 1.2, None);
        assert!(p.speed(1.2).unwrap() > 0.0);
        assert!(matches!(collapse_time(&p, 1e-10), Err(Error::Stall(_))));
        let stuck = p.with_t_max(Some(1e3));
        let r = integrate(&stuck, &SolverConfig::default()).unwrap();
        // the ODE creeps toward the zero of W and never reaches it
        assert!(matches!(r.terminal.verdict, Verdict::Truncated { .. }));
        assert!(r.last().tau > 0.92);
    }

    #[test]
    fn ode_and_quadrature_agree_on_spheres() {
        let cfg = SolverConfig::default();
        for eps in [-1, 0, 1] {
            for spec in [WeingartenSpec::MeanCurvature(1), WeingartenSpec::MeanCurvature(2), WeingartenSpec::SquaredNorm] {
                let p = problem(sf(eps, 4), FamilyKind::GeodesicSphere, spec, 0.7, None);
                let (tq, _) = collapsed(&collapse_time(&p, 1e-13).unwrap());
                let (to, _) = collapsed(&integrate(&p, &cfg).unwrap().terminal);
                assert!((tq - to).abs() <= 10.0 * (cfg.rtol * tq + cfg.atol), "eps={eps} {tq} {to}");
            }
        }
    }

    #[test]
    fn sampled_output_times() {
        let p = problem(sf(0, 3), FamilyKind::GeodesicSphere, WeingartenSpec::MeanCurvature(1), 2.0, None);
        let times: Vec<f64> = (0..11).map(|i| 0.09 * i as f64).collect();
        let s = integrate_at(&p, &SolverConfig::default(), &times).unwrap();
        assert_eq!(s.len(), times.len());
        for (smp, &t) in s.iter().zip(&times) {
            assert_eq!(smp.t, t);
            let exact = (4.0 - 4.0 * t).sqrt();
            assert!((smp.tau - exact).abs() < 1e-9, "t={t} err={:e}", smp.tau - exact);
        }
        assert!(integrate_at(&p, &SolverConfig::default(), &[0.0, 2.0]).is_err());
    }
}
