//! Parameter sweeps: one collapse record per cell of a Cartesian product.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use wflow_core::{closed_form_t, collapse_time};

use crate::commands::{load_document, open_output};
use crate::config::{from_value, set_pointer_value, ConfigError, Format, RunConfig};
use crate::record::{record_cells, CollapseRecord, RECORD_COLUMNS};
use crate::{AppError, Cli};

/// One swept parameter and its values.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub pointer: String,
    pub values: Vec<Value>,
}

/// Parses `POINTER=start:stop:count` (inclusive linspace) or `POINTER=v1,v2,...`.
pub fn parse_range(spec: &str) -> Result<Range, ConfigError> {
    let (pointer, body) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::new(spec, "range must look like /pointer=start:stop:count or /pointer=v1,v2"))?;
    if !pointer.starts_with('/') {
        return Err(ConfigError::new(pointer, "JSON pointer must start with '/'"));
    }
    let bad = |msg: String| ConfigError::new(pointer, msg);
    let values = if body.contains(':') {
        let parts: Vec<&str> = body.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(bad(format!("linspace needs start:stop:count, got '{body}'")));
        };
        let a: f64 = a.trim().parse().map_err(|_| bad(format!("bad start '{a}'")))?;
        let b: f64 = b.trim().parse().map_err(|_| bad(format!("bad stop '{b}'")))?;
        let n: usize = n.trim().parse().map_err(|_| bad(format!("bad count '{n}'")))?;
        match n {
            0 => return Err(bad("count must be positive".into())),
            1 => vec![Value::from(a)],
            _ => (0..n).map(|i| Value::from(a + (b - a) * i as f64 / (n - 1) as f64)).collect(),
        }
    } else {
        body.split(',')
            .map(|v| serde_json::from_str(v.trim()).unwrap_or_else(|_| Value::String(v.trim().to_string())))
            .collect()
    };
    if values.is_empty() {
        return Err(bad("empty range".into()));
    }
    Ok(Range { pointer: pointer.to_string(), values })
}

/// All cells in row-major order (last range varies fastest).
pub fn cells(ranges: &[Range]) -> Vec<Vec<Value>> {
    let mut out = vec![vec![]];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                r.values.iter().map(move |v| {
                    let mut c = prefix.clone();
                    c.push(v.clone());
                    c
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Vec<(String, Value)>,
    pub record: Option<CollapseRecord>,
    pub error: Option<String>,
}

pub fn run(cli: &Cli, specs: &[String]) -> Result<(), AppError> {
    let base = load_document(cli)?;
    let ranges = specs.iter().map(|s| parse_range(s)).collect::<Result<Vec<_>, _>>()?;

    // validate every cell before running any of them
    let mut jobs = Vec::new();
    for cell in cells(&ranges) {
        let mut doc = base.clone();
        for (r, v) in ranges.iter().zip(&cell) {
            set_pointer_value(&mut doc, &r.pointer, v.clone())?;
        }
        let cfg: RunConfig = from_value(&doc)?;
        let (problem, solver) = cfg.build()?;
        jobs.push((cell, cfg, problem, solver));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| ConfigError::new("jobs", e.to_string()))?;
    let deterministic = cli.deterministic;
    let rows: Vec<SweepRow> = pool.install(|| {
        jobs.par_iter()
            .map(|(cell, cfg, problem, solver)| {
                let start = Instant::now();
                let params = ranges.iter().map(|r| r.pointer.clone()).zip(cell.iter().cloned()).collect();
                match collapse_time(problem, solver.atol) {
                    Ok(result) => {
                        let wall = (!deterministic).then(|| start.elapsed().as_secs_f64());
                        let echo = serde_json::to_value(cfg).expect("configurations serialize");
                        let record = CollapseRecord::new(echo, &result, closed_form_t(problem), wall);
                        SweepRow { params, record: Some(record), error: None }
                    }
                    Err(e) => SweepRow { params, record: None, error: Some(e.to_string()) },
                }
            })
            .collect()
    });

    let mut out = open_output(cli, None)?;
    match cli.format {
        Some(Format::Json) => {
            serde_json::to_writer_pretty(&mut out, &rows).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        _ => {
            let mut header: Vec<String> = ranges.iter().map(|r| r.pointer.clone()).collect();
            header.extend(RECORD_COLUMNS.iter().map(|s| s.to_string()));
            header.push("error".into());
            writeln!(out, "{}", header.join(","))?;
            for row in &rows {
                let mut cells: Vec<String> = row.params.iter().map(|(_, v)| csv_value(v)).collect();
                match &row.record {
                    Some(r) => cells.extend(record_cells(r)),
                    None => cells.extend(std::iter::repeat_n(String::new(), RECORD_COLUMNS.len())),
                }
                cells.push(row.error.as_deref().map(|e| format!("\"{}\"", e.replace('"', "'"))).unwrap_or_default());
                writeln!(out, "{}", cells.join(","))?;
            }
        }
    }
    out.flush()?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        return Err(AppError::Numerical(wflow_core::Error::Invalid(format!("{failed} sweep cells failed"))));
    }
    Ok(())
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map(crate::record::num).unwrap_or_else(|| n.to_string()),
        Value::String(s) => s.clone(),
        other => format!("\"{}\"", other.to_string().replace('"', "'")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn linspace_and_lists() {
        let r = parse_range("/tau0=0.5:1.5:3").unwrap();
        assert_eq!(r.pointer, "/tau0");
        assert_eq!(r.values, vec![json!(0.5), json!(1.0), json!(1.5)]);
        let r = parse_range("/weingarten/kind=mean,squared_norm").unwrap();
        assert_eq!(r.values, vec![json!("mean"), json!("squared_norm")]);
        let r = parse_range("/ambient/eps=-1,0,1").unwrap();
        assert_eq!(r.values, vec![json!(-1), json!(0), json!(1)]);
        assert!(parse_range("tau0=1,2").is_err());
        assert!(parse_range("/tau0=1:2").is_err());
        assert!(parse_range("/tau0=1:2:0").is_err());
    }

    #[test]
    fn product_order() {
        let a = Range { pointer: "/a".into(), values: vec![json!(1), json!(2)] };
        let b = Range { pointer: "/b".into(), values: vec![json!("x"), json!("y"), json!("z")] };
        let c = cells(&[a, b]);
        assert_eq!(c.len(), 6);
        assert_eq!(c[0], vec![json!(1), json!("x")]);
        assert_eq!(c[1], vec![json!(1), json!("y")]);
        assert_eq!(c[3], vec![json!(2), json!("x")]);
    }
}
