//! Result records and their CSV/JSON serializations.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use wflow_core::{CollapseResult, Sample, Verdict};

/// One collapse computation, as written by `collapse`, `simulate` (JSON) and `sweep`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollapseRecord {
    pub config_echo: Value,
    pub verdict: String,
    pub reason: Option<String>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub end: Option<String>,
    pub t_max: Option<f64>,
    pub error_estimate: f64,
    pub closed_form: Option<f64>,
    pub abs_diff: Option<f64>,
    pub speed_increasing: Option<bool>,
    pub wall_time_s: Option<f64>,
}

impl CollapseRecord {
    pub fn new(config_echo: Value, result: &CollapseResult, closed_form: Option<f64>, wall_time_s: Option<f64>) -> Self {
        let (reason, t, end, t_max) = match result.verdict {
            Verdict::Collapsed { t, end } => (None, Some(t), Some(end.as_str().to_string()), None),
            Verdict::NonCollapsing(r) => (Some(r.as_str().to_string()), None, None, None),
            Verdict::Truncated { t_max } => (None, None, None, Some(t_max)),
        };
        let abs_diff = match (t, closed_form) {
            (Some(a), Some(b)) => Some((a - b).abs()),
            _ => None,
        };
        Self {
            config_echo,
            verdict: result.verdict.name().to_string(),
            reason,
            t,
            end,
            t_max,
            error_estimate: result.error_estimate,
            closed_form,
            abs_diff,
            speed_increasing: result.speed_increasing,
            wall_time_s,
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let mut s = format!("verdict={}", self.verdict);
        if let Some(r) = &self.reason {
            s += &format!(" reason={r}");
        }
        if let Some(t) = self.t {
            s += &format!(" T={t:.16e}");
        }
        if let Some(e) = &self.end {
            s += &format!(" end={e}");
        }
        if let Some(t) = self.t_max {
            s += &format!(" t_max={t}");
        }
        if let Some(c) = self.closed_form {
            s += &format!(" closed_form={c:.16e}");
        }
        if let Some(d) = self.abs_diff {
            s += &format!(" abs_diff={d:.3e}");
        }
        s
    }
}

/// Full-precision float for CSV cells (17 significant digits).
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub const RECORD_COLUMNS: [&str; 9] =
    ["verdict", "reason", "T", "end", "t_max", "error_estimate", "closed_form", "abs_diff", "speed_increasing"];

pub fn record_cells(r: &CollapseRecord) -> Vec<String> {
    vec![
        r.verdict.clone(),
        r.reason.clone().unwrap_or_default(),
        opt_num(r.t),
        r.end.clone().unwrap_or_default(),
        opt_num(r.t_max),
        num(r.error_estimate),
        opt_num(r.closed_form),
        opt_num(r.abs_diff),
        r.speed_increasing.map(|b| b.to_string()).unwrap_or_default(),
    ]
}

pub fn write_record_csv(out: &mut dyn Write, r: &CollapseRecord) -> std::io::Result<()> {
    writeln!(out, "{}", RECORD_COLUMNS.join(","))?;
    writeln!(out, "{}", record_cells(r).join(","))
}

/// Writes `t,tau,phi,speed,k1_m*,...`. Block layout is taken from the first sample.
pub fn write_trajectory_csv(out: &mut dyn Write, samples: &[Sample]) -> std::io::Result<()> {
    let mut header = vec!["t".to_string(), "tau".into(), "phi".into(), "speed".into()];
    if let Some(first) = samples.first() {
        for (i, (_, m)) in first.curvatures.blocks().iter().enumerate() {
            header.push(format!("k{}_m{}", i + 1, m));
        }
    }
    writeln!(out, "{}", header.join(","))?;
    for s in samples {
        let mut row = vec![num(s.t), num(s.tau), num(s.phi), num(s.speed)];
        row.extend(s.curvatures.blocks().iter().map(|(k, _)| num(*k)));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    pub t: f64,
    pub tau: f64,
    pub phi: f64,
    pub speed: f64,
    /// `(k, multiplicity)` blocks.
    pub curvatures: Vec<(f64, usize)>,
}

impl From<&Sample> for SampleRecord {
    fn from(s: &Sample) -> Self {
        Self { t: s.t, tau: s.tau, phi: s.phi, speed: s.speed, curvatures: s.curvatures.blocks().to_vec() }
    }
}

/// JSON output of `simulate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    #[serde(flatten)]
    pub terminal: CollapseRecord,
    pub samples: Vec<SampleRecord>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use wflow_core::{CurvatureProfile, FocalEnd, NonCollapseReason};

    fn result(verdict: Verdict) -> CollapseResult {
        CollapseResult { verdict, error_estimate: 1e-14, speed_increasing: Some(true) }
    }

    #[test]
    fn record_fields() {
        let r = CollapseRecord::new(Value::Null, &result(Verdict::Collapsed { t: 0.25, end: FocalEnd::Center }), Some(0.25), None);
        assert_eq!(r.abs_diff, Some(0.0));
        assert_eq!(r.end.as_deref(), Some("center"));
        let r = CollapseRecord::new(Value::Null, &result(Verdict::NonCollapsing(NonCollapseReason::AsymptoticToPi)), Some(1.0), None);
        assert_eq!(r.abs_diff, None);
        assert_eq!(r.reason.as_deref(), Some("asymptotic-to-pi"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"T\":null"));
        assert_eq!(serde_json::from_str::<CollapseRecord>(&json).unwrap(), r);
    }

    #[test]
    fn csv_layout() {
        let k = CurvatureProfile::new(vec![(0.5, 2), (2.0, 1)]).unwrap();
        let s = Sample { t: 0.1, tau: 1.0 / 3.0, phi: 0.0, speed: 3.0, curvatures: k };
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &[s]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,tau,phi,speed,k1_m2,k2_m1");
        let row: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(row[1], 1.0 / 3.0);
        assert_eq!(row.len(), 6);
    }
}
