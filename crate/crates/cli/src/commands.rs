//! Subcommand implementations.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use wflow_core::avoidance::Justification;
use wflow_core::{
    check_monotone, closed_form_t, collapse_time, distance_curve, integrate, integrate_at, AmbientSpace, Epsilon,
    FamilyKind, Field, FlowProblem, FlowTrajectory, IsoparametricFamily, Sample, SolverConfig, Verdict,
};

use crate::config::{from_value, parse_document, set_pointer, set_pointer_value, ConfigError, Format, RunConfig};
use crate::record::{num, write_record_csv, write_trajectory_csv, CollapseRecord, SampleRecord, TrajectoryRecord};
use crate::scenario::ScenarioConfig;
use crate::{sweep, verify, AppError, Cli, Command};

pub fn dispatch(cli: &Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Simulate => simulate(cli),
        Command::Collapse => collapse(cli),
        Command::Verify { suite } => run_verify(cli, *suite),
        Command::Sweep { ranges } => sweep::run(cli, ranges),
        Command::Avoidance => avoidance(cli),
        Command::Families { n } => families(cli, *n),
    }
}

/// The configuration document with all command-line overrides applied.
pub fn load_document(cli: &Cli) -> Result<Value, AppError> {
    let mut doc = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
            parse_document(&text)?
        }
        None => Value::Object(Default::default()),
    };
    for item in &cli.set {
        let (pointer, raw) = item
            .split_once('=')
            .ok_or_else(|| ConfigError::new(item.as_str(), "override must look like /json/pointer=value"))?;
        set_pointer(&mut doc, pointer, raw)?;
    }
    let fields = [("/tau0", cli.tau0), ("/solver/rtol", cli.rtol), ("/solver/atol", cli.atol), ("/solver/t_max", cli.t_max)];
    for (pointer, v) in fields {
        if let Some(v) = v {
            set_pointer_value(&mut doc, pointer, Value::from(v))?;
        }
    }
    if let Some(k) = cli.samples {
        set_pointer_value(&mut doc, "/output/samples", Value::from(k))?;
    }
    Ok(doc)
}

pub fn open_output(cli: &Cli, configured: Option<&str>) -> Result<Box<dyn Write>, AppError> {
    let path = cli.output.as_deref().or(configured.map(Path::new));
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn wall_time(cli: &Cli, start: Instant) -> Option<f64> {
    (!cli.deterministic).then(|| start.elapsed().as_secs_f64())
}

fn echo<T: Serialize>(cfg: &T) -> Value {
    serde_json::to_value(cfg).expect("configurations serialize")
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), AppError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

/// `count` equally spaced samples over the integrated time span.
pub fn resample(problem: &FlowProblem, solver: &SolverConfig, traj: &FlowTrajectory, count: usize) -> wflow_core::Result<Vec<Sample>> {
    let end = match traj.terminal.verdict {
        // stop just short of the event so the resampled run does not reach it
        Verdict::Collapsed { .. } => traj.last().t * (1.0 - 1e-9),
        _ => traj.last().t,
    };
    if count == 1 {
        return integrate_at(problem, solver, &[0.0]);
    }
    let times: Vec<f64> = (0..count).map(|i| end * i as f64 / (count - 1) as f64).collect();
    integrate_at(problem, solver, &times)
}

fn simulate(cli: &Cli) -> Result<(), AppError> {
    let doc = load_document(cli)?;
    let cfg: RunConfig = from_value(&doc)?;
    if cfg.output.samples == Some(0) {
        return Err(ConfigError::new("output.samples", "must be at least 1").into());
    }
    let (problem, solver) = cfg.build()?;
    let start = Instant::now();
    let traj = integrate(&problem, &solver).map_err(|e| match e {
        wflow_core::Error::UnboundedHorizon => AppError::Config(ConfigError::new(
            "solver.t_max",
            "the flow does not collapse; set a finite horizon",
        )),
        e => e.into(),
    })?;
    let samples = match cfg.output.samples {
        Some(k) => resample(&problem, &solver, &traj, k)?,
        None => traj.samples.clone(),
    };
    let record = CollapseRecord::new(echo(&cfg), &traj.terminal, closed_form_t(&problem), wall_time(cli, start));
    let mut out = open_output(cli, cfg.output.path.as_deref())?;
    match cli.format.unwrap_or(cfg.output.format) {
        Format::Csv => write_trajectory_csv(&mut out, &samples)?,
        Format::Json => {
            let full = TrajectoryRecord { terminal: record.clone(), samples: samples.iter().map(SampleRecord::from).collect() };
            write_json(&mut out, &full)?;
        }
    }
    out.flush()?;
    eprintln!("{}", record.summary());
    Ok(())
}

fn collapse(cli: &Cli) -> Result<(), AppError> {
    let doc = load_document(cli)?;
    let cfg: RunConfig = from_value(&doc)?;
    let (problem, solver) = cfg.build()?;
    let start = Instant::now();
    let result = collapse_time(&problem, solver.atol)?;
    let record = CollapseRecord::new(echo(&cfg), &result, closed_form_t(&problem), wall_time(cli, start));
    let mut out = open_output(cli, cfg.output.path.as_deref())?;
    match cli.format {
        Some(Format::Csv) => write_record_csv(&mut out, &record)?,
        _ => write_json(&mut out, &record)?,
    }
    out.flush()?;
    Ok(())
}

fn run_verify(cli: &Cli, suite: verify::Suite) -> Result<(), AppError> {
    let start = Instant::now();
    let report = verify::run(suite, cli.seed);
    let mut out = open_output(cli, None)?;
    match cli.format {
        None => {
            report.write_text(&mut out)?;
            if let Some(t) = wall_time(cli, start) {
                writeln!(out, "wall time {t:.2} s")?;
            }
        }
        Some(Format::Csv) => report.write_csv(&mut out)?,
        Some(Format::Json) => write_json(&mut out, &report)?,
    }
    out.flush()?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(AppError::CheckFailed(format!("{} of {} checks failed", report.failures(), report.lines.len())))
    }
}

#[derive(Debug, Serialize, serde::Deserialize, PartialEq)]
pub struct AvoidanceRecord {
    pub config_echo: Value,
    pub justification: String,
    pub extension: bool,
    pub monotone: bool,
    pub worst_violation: f64,
    pub first_violation: Option<(f64, f64)>,
    pub wall_time_s: Option<f64>,
    pub samples: Vec<(f64, f64)>,
}

fn avoidance(cli: &Cli) -> Result<(), AppError> {
    let doc = load_document(cli)?;
    let cfg: ScenarioConfig = from_value(&doc)?;
    let scenario = cfg.build()?;
    let solver = cfg.solver.build()?;
    let start = Instant::now();
    let curve = distance_curve(&scenario, &solver, cfg.grid)?;
    let verdict = check_monotone(&curve, cfg.tol);
    let record = AvoidanceRecord {
        config_echo: echo(&cfg),
        justification: match scenario.justification() {
            Justification::OddSpec => "odd-spec",
            Justification::InwardSpheres => "inward-spheres",
        }
        .into(),
        extension: scenario.is_extension(),
        monotone: verdict.monotone,
        worst_violation: verdict.worst_violation,
        first_violation: verdict.first_violation,
        wall_time_s: wall_time(cli, start),
        samples: curve.samples,
    };
    let mut out = open_output(cli, cfg.output.path.as_deref())?;
    match cli.format.unwrap_or(cfg.output.format) {
        Format::Csv => {
            writeln!(out, "t,D")?;
            for &(t, d) in &record.samples {
                writeln!(out, "{},{}", num(t), num(d))?;
            }
        }
        Format::Json => write_json(&mut out, &record)?,
    }
    out.flush()?;
    let mut summary = format!(
        "monotone={} worst_violation={:.3e} justification={}",
        record.monotone, record.worst_violation, record.justification
    );
    if record.extension {
        summary += " (extension)";
    }
    if let Some((a, b)) = record.first_violation {
        summary += &format!(" first_violation=[{a}, {b}]");
    }
    eprintln!("{summary}");
    if record.monotone {
        Ok(())
    } else {
        Err(AppError::CheckFailed("distance curve decreases".into()))
    }
}

#[derive(Debug, Serialize)]
struct FamilyRow {
    ambient: String,
    family: String,
    tau_domain: (f64, f64),
    drift: String,
    lower_end: String,
    upper_end: String,
    formula: String,
}

fn family_name(kind: &FamilyKind) -> String {
    match kind {
        FamilyKind::Horosphere => "horosphere".into(),
        FamilyKind::Equidistant => "equidistant".into(),
        FamilyKind::GeodesicSphere => "geodesic_sphere".into(),
        FamilyKind::GeneralizedCylinder { k } => format!("generalized_cylinder k={k}"),
        FamilyKind::SphereMunzner { g, multiplicities } => format!("munzner g={g} m={multiplicities:?}"),
        FamilyKind::HFGeodesicSphere => "hf_geodesic_sphere".into(),
        FamilyKind::HFHorosphere => "hf_horosphere".into(),
    }
}

fn families(cli: &Cli, n: usize) -> Result<(), AppError> {
    if n < 1 {
        return Err(ConfigError::new("n", "must be at least 1").into());
    }
    let mut ambients = Vec::new();
    for eps in [Epsilon::Hyperbolic, Epsilon::Flat, Epsilon::Spherical] {
        ambients.push(AmbientSpace::space_form(eps, n + 1).map_err(|e| ConfigError::new("n", e.to_string()))?);
    }
    for field in Field::ALL {
        ambients.push(AmbientSpace::hyperbolic_field(field, 2)?);
    }
    let mut rows = Vec::new();
    for amb in ambients {
        let m = amb.n();
        let mut kinds = vec![FamilyKind::Horosphere, FamilyKind::Equidistant, FamilyKind::GeodesicSphere];
        kinds.extend((1..m).map(|k| FamilyKind::GeneralizedCylinder { k }));
        kinds.push(FamilyKind::SphereMunzner { g: 1, multiplicities: vec![m] });
        if m >= 2 {
            kinds.push(FamilyKind::SphereMunzner { g: 2, multiplicities: vec![1, m - 1] });
        }
        kinds.extend([FamilyKind::HFGeodesicSphere, FamilyKind::HFHorosphere]);
        for kind in kinds {
            let Ok(fam) = IsoparametricFamily::new(amb, kind) else { continue };
            let d = fam.tau_domain();
            rows.push(FamilyRow {
                ambient: amb.label(),
                family: family_name(fam.kind()),
                tau_domain: (d.lo, d.hi),
                drift: format!("{:?}", fam.drift()).to_lowercase(),
                lower_end: fam.end_label(false).as_str().into(),
                upper_end: fam.end_label(true).as_str().into(),
                formula: fam.formula(),
            });
        }
    }
    let mut out = open_output(cli, None)?;
    match cli.format {
        Some(Format::Json) => write_json(&mut out, &rows)?,
        _ => {
            for r in &rows {
                writeln!(
                    out,
                    "{:<8} {:<28} tau in ({}, {}) {:<10} ends {}/{}  {}",
                    r.ambient, r.family, r.tau_domain.0, r.tau_domain.1, r.drift, r.lower_end, r.upper_end, r.formula
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
