//! Configuration for the `avoidance` command.

use serde::{Deserialize, Serialize};
use wflow_core::avoidance::{PairKind, DEFAULT_MONOTONE_TOL};
use wflow_core::PairScenario;

use crate::config::{AmbientConfig, ConfigError, OutputSection, SolverSection, SpecConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairName {
    Concentric,
    Collinear,
    SphereInsideHorosphere,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub kind: PairName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap: Option<f64>,
}

fn default_grid() -> usize {
    200
}

fn default_tol() -> f64 {
    DEFAULT_MONOTONE_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub ambient: AmbientConfig,
    pub weingarten: SpecConfig,
    pub pair: PairConfig,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl ScenarioConfig {
    pub fn build(&self) -> Result<PairScenario, ConfigError> {
        let ambient = self.ambient.build()?;
        let spec = self.weingarten.build(ambient.n())?;
        let p = &self.pair;
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| ConfigError::new(format!("pair.{name}"), "missing field"));
        let kind = match p.kind {
            PairName::Concentric => PairKind::ConcentricSpheres { outer: need(p.outer, "outer")?, inner: need(p.inner, "inner")? },
            PairName::Collinear => PairKind::CollinearDisjointSpheres {
                distance: need(p.distance, "distance")?,
                first: need(p.first, "first")?,
                second: need(p.second, "second")?,
            },
            PairName::SphereInsideHorosphere => {
                PairKind::SphereInsideHorosphere { radius: need(p.radius, "radius")?, gap: need(p.gap, "gap")? }
            }
        };
        if self.grid < 2 {
            return Err(ConfigError::new("grid", format!("need at least 2 points, got {}", self.grid)));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(ConfigError::new("tol", format!("must be nonnegative, got {}", self.tol)));
        }
        PairScenario::new(kind, ambient, spec).map_err(|e| ConfigError::new("pair", e.to_string()))
    }
}
