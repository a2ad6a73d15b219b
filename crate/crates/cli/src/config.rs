//! JSON run configuration, overrides, and conversion to core problem types.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use wflow_core::{AmbientSpace, Epsilon, FamilyKind, Field, FlowProblem, IsoparametricFamily, SolverConfig, WeingartenSpec};

/// A configuration error tied to the field that caused it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbientKind {
    SpaceForm,
    HyperbolicField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldName {
    R,
    C,
    H,
    O,
}

impl From<FieldName> for Field {
    fn from(f: FieldName) -> Self {
        match f {
            FieldName::R => Field::Real,
            FieldName::C => Field::Complex,
            FieldName::H => Field::Quaternion,
            FieldName::O => Field::Octonion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientConfig {
    pub kind: AmbientKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Horosphere,
    Equidistant,
    GeodesicSphere,
    GeneralizedCylinder,
    Munzner,
    HfGeodesicSphere,
    HfHorosphere,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    pub kind: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecName {
    Mean,
    SquaredNorm,
    Gauss,
    Power,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecConfig {
    pub kind: SpecName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<SpecConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub collapse_margin: f64,
    pub t_max: Option<f64>,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self { rtol: d.rtol, atol: d.atol, max_step: d.max_step, collapse_margin: d.collapse_margin, t_max: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub path: Option<String>,
    pub format: Format,
    /// Number of equally spaced samples; `None` keeps every accepted step.
    pub samples: Option<usize>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { path: None, format: Format::Csv, samples: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub ambient: AmbientConfig,
    pub family: FamilyConfig,
    pub weingarten: SpecConfig,
    pub tau0: f64,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// Parses a typed document, reporting the failing field as a dotted path.
pub fn from_value<T: serde::de::DeserializeOwned>(value: &Value) -> Result<T, ConfigError> {
    let text = value.to_string();
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::new(path, e.into_inner().to_string())
    })
}

pub fn parse_document(text: &str) -> Result<Value, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::new("", format!("invalid JSON: {e}")))
}

/// Sets the value at a JSON pointer, creating intermediate objects.
/// `raw` is read as JSON when it parses, as a string otherwise.
pub fn set_pointer(doc: &mut Value, pointer: &str, raw: &str) -> Result<(), ConfigError> {
    let new = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    set_pointer_value(doc, pointer, new)
}

pub fn set_pointer_value(doc: &mut Value, pointer: &str, new: Value) -> Result<(), ConfigError> {
    let Some(rest) = pointer.strip_prefix('/') else {
        return Err(ConfigError::new(pointer, "JSON pointer must start with '/'"));
    };
    let mut cur = doc;
    let tokens: Vec<String> = rest.split('/').map(|t| t.replace("~1", "/").replace("~0", "~")).collect();
    for (i, tok) in tokens.iter().enumerate() {
        let last = i + 1 == tokens.len();
        if cur.is_null() {
            *cur = Value::Object(Default::default());
        }
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(tok.clone(), new);
                    return Ok(());
                }
                map.entry(tok.clone()).or_insert(Value::Null)
            }
            Value::Array(items) => {
                let idx: usize = tok
                    .parse()
                    .map_err(|_| ConfigError::new(pointer, format!("'{tok}' is not an array index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| ConfigError::new(pointer, format!("index {idx} out of range for length {len}")))?;
                if last {
                    *slot = new;
                    return Ok(());
                }
                slot
            }
            _ => return Err(ConfigError::new(pointer, format!("cannot descend into scalar at '{tok}'"))),
        };
    }
    *cur = new;
    Ok(())
}

fn require<T: Copy>(v: Option<T>, path: &str) -> Result<T, ConfigError> {
    v.ok_or_else(|| ConfigError::new(path, "missing field"))
}

impl AmbientConfig {
    pub fn build(&self) -> Result<AmbientSpace, ConfigError> {
        match self.kind {
            AmbientKind::SpaceForm => {
                let eps = require(self.eps, "ambient.eps")?;
                let eps = Epsilon::try_from(eps).map_err(|e| ConfigError::new("ambient.eps", e.to_string()))?;
                let dim = require(self.dim, "ambient.dim")?;
                AmbientSpace::space_form(eps, dim).map_err(|e| ConfigError::new("ambient.dim", e.to_string()))
            }
            AmbientKind::HyperbolicField => {
                let field = require(self.field, "ambient.field")?;
                let m = require(self.m, "ambient.m")?;
                AmbientSpace::hyperbolic_field(field.into(), m).map_err(|e| ConfigError::new("ambient.m", e.to_string()))
            }
        }
    }
}

impl FamilyConfig {
    pub fn build(&self, ambient: AmbientSpace) -> Result<IsoparametricFamily, ConfigError> {
        let kind = match self.kind {
            FamilyName::Horosphere => FamilyKind::Horosphere,
            FamilyName::Equidistant => FamilyKind::Equidistant,
            FamilyName::GeodesicSphere => FamilyKind::GeodesicSphere,
            FamilyName::GeneralizedCylinder => FamilyKind::GeneralizedCylinder { k: require(self.k, "family.k")? },
            FamilyName::Munzner => {
                let g = require(self.g, "family.g")?;
                let multiplicities = self
                    .multiplicities
                    .clone()
                    .ok_or_else(|| ConfigError::new("family.multiplicities", "missing field"))?;
                if multiplicities.len() != g {
                    return Err(ConfigError::new(
                        "family.multiplicities",
                        format!("expected {g} entries, got {}", multiplicities.len()),
                    ));
                }
                let total: usize = multiplicities.iter().sum();
                if total != ambient.n() || multiplicities.contains(&0) {
                    return Err(ConfigError::new(
                        "family.multiplicities",
                        format!("positive multiplicities must sum to n = {}, got {total}", ambient.n()),
                    ));
                }
                FamilyKind::SphereMunzner { g, multiplicities }
            }
            FamilyName::HfGeodesicSphere => FamilyKind::HFGeodesicSphere,
            FamilyName::HfHorosphere => FamilyKind::HFHorosphere,
        };
        IsoparametricFamily::new(ambient, kind).map_err(|e| ConfigError::new("family", e.to_string()))
    }
}

impl SpecConfig {
    pub fn build(&self, n: usize) -> Result<WeingartenSpec, ConfigError> {
        self.build_at("weingarten", n)
    }

    fn build_at(&self, path: &str, n: usize) -> Result<WeingartenSpec, ConfigError> {
        let spec = match self.kind {
            SpecName::Mean => {
                let r = require(self.r, &format!("{path}.r"))?;
                if r == 0 || r > n {
                    return Err(ConfigError::new(format!("{path}.r"), format!("need 1 <= r <= n = {n}, got {r}")));
                }
                WeingartenSpec::MeanCurvature(r)
            }
            SpecName::SquaredNorm => WeingartenSpec::SquaredNorm,
            SpecName::Gauss => WeingartenSpec::GaussK,
            SpecName::Power => {
                let base = self.base.as_ref().ok_or_else(|| ConfigError::new(format!("{path}.base"), "missing field"))?;
                let p = require(self.p, &format!("{path}.p"))?;
                if !(p > 0.0 && p.is_finite()) {
                    return Err(ConfigError::new(format!("{path}.p"), format!("power must be positive and finite, got {p}")));
                }
                WeingartenSpec::power(base.build_at(&format!("{path}.base"), n)?, p)
            }
        };
        spec.check(n).map_err(|e| ConfigError::new(path, e.to_string()))?;
        Ok(spec)
    }

    pub fn from_spec(spec: &WeingartenSpec) -> Self {
        let blank = |kind| Self { kind, r: None, base: None, p: None };
        match spec {
            WeingartenSpec::MeanCurvature(r) => Self { r: Some(*r), ..blank(SpecName::Mean) },
            WeingartenSpec::SquaredNorm => blank(SpecName::SquaredNorm),
            WeingartenSpec::GaussK => blank(SpecName::Gauss),
            WeingartenSpec::Power { base, p } => {
                Self { base: Some(Box::new(Self::from_spec(base))), p: Some(*p), ..blank(SpecName::Power) }
            }
        }
    }
}

impl SolverSection {
    pub fn build(&self) -> Result<SolverConfig, ConfigError> {
        let unit = |v: f64, path: &str| {
            if v > 0.0 && v < 1.0 {
                Ok(v)
            } else {
                Err(ConfigError::new(path, format!("must lie in (0, 1), got {v}")))
            }
        };
        let positive = |v: f64, path: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(ConfigError::new(path, format!("must be positive, got {v}")))
            }
        };
        if let Some(t) = self.t_max {
            positive(t, "solver.t_max")?;
        }
        Ok(SolverConfig {
            rtol: unit(self.rtol, "solver.rtol")?,
            atol: unit(self.atol, "solver.atol")?,
            max_step: positive(self.max_step, "solver.max_step")?,
            collapse_margin: positive(self.collapse_margin, "solver.collapse_margin")?,
        })
    }
}

impl RunConfig {
    /// The flow problem and solver settings described by this configuration.
    pub fn build(&self) -> Result<(FlowProblem, SolverConfig), ConfigError> {
        let ambient = self.ambient.build()?;
        let family = self.family.build(ambient)?;
        let spec = self.weingarten.build(family.n())?;
        let solver = self.solver.build()?;
        let problem = FlowProblem::new(family, spec, self.tau0, self.solver.t_max)
            .map_err(|e| ConfigError::new("tau0", e.to_string()))?;
        Ok((problem, solver))
    }
}
