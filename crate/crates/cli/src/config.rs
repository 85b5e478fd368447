//! Run configuration and command-line literal parsing.

use std::path::Path;

use serde::{Deserialize, Serialize};
use zjtangent::materials::Model;
use zjtangent::path::{MotionPath, PathKind};
use zjtangent::tensor::Tensor2;
use zjtangent::verify::{GridSpec, Scheme};

/// Configuration problems; reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl From<zjtangent::Error> for ConfigError {
    fn from(e: zjtangent::Error) -> Self {
        ConfigError(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Relative symmetry residual accepted for ℍ^ZJ_τ.
    pub sym: f64,
    /// Relative difference between tangent constructions that involve the
    /// direct logarithmic form.
    pub cross: f64,
    /// Relative difference between the absolute and Lagrangian constructions.
    pub cross_exact: f64,
    pub bridge: f64,
    pub bridge_1d: f64,
    pub integration: f64,
    pub rate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sym: 1e-9,
            cross: 1e-6,
            cross_exact: 1e-11,
            bridge: 1e-12,
            bridge_1d: 1e-8,
            integration: 1e-8,
            rate: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: Option<Format>,
    pub path: Option<String>,
}

/// Path given either by name (with `range` as its endpoints) or in full.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PathSpec {
    Named(String),
    Full(MotionPath),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Literal(String),
    Rows([[f64; 3]; 3]),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    pub model: Option<Model>,
    #[serde(rename = "F")]
    pub f: Option<MatrixSpec>,
    pub path: Option<PathSpec>,
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub output: Option<OutputSpec>,
    pub scheme: Option<Scheme>,
    pub steps: Option<usize>,
    pub samples: Option<usize>,
    pub law: Option<String>,
}

/// Parses JSON, keeping serde's line/column position in the message.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError(format!("invalid {what}: {e}")))
}

/// Inline JSON when the argument starts with `{`, otherwise a file name.
pub fn json_arg<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, ConfigError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('"') {
        return parse_json(trimmed, what);
    }
    let text = std::fs::read_to_string(Path::new(arg))
        .map_err(|e| ConfigError(format!("cannot read {what} file `{arg}`: {e}")))?;
    parse_json(&text, &format!("{what} file `{arg}`"))
}

pub fn parse_model(arg: &str) -> Result<Model, ConfigError> {
    let m: Model = match arg {
        "hencky" => Model::hencky(1.0, 1.0),
        "hencky_incompressible" => Model::HenckyIncompressible { mu: 1.0 },
        "svk" => Model::Svk { mu: 1.0, lambda: 1.0 },
        _ => json_arg(arg, "model")?,
    };
    m.validate()?;
    Ok(m)
}

fn parse_scalar(s: &str) -> Result<f64, ConfigError> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    let v = match body {
        "e" => std::f64::consts::E,
        _ => body.parse::<f64>().map_err(|_| ConfigError(format!("not a number: `{s}`")))?,
    };
    Ok(if neg { -v } else { v })
}

/// `diag(a, b, c)` or nine comma-separated entries in row-major order; `e`
/// stands for Euler's number.
pub fn parse_matrix(s: &str) -> Result<Tensor2, ConfigError> {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        let v = inner.split(',').map(parse_scalar).collect::<Result<Vec<_>, _>>()?;
        if v.len() != 3 {
            return Err(ConfigError(format!("diag() takes 3 entries, got {}", v.len())));
        }
        return Ok(Tensor2::diag(v[0], v[1], v[2]));
    }
    let inner = t.trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let v = inner.split(',').map(parse_scalar).collect::<Result<Vec<_>, _>>()?;
    if v.len() != 9 {
        return Err(ConfigError(format!("matrix literal needs 9 entries or diag(a,b,c), got {}", v.len())));
    }
    Ok(Tensor2::from_fn(|i, j| v[3 * i + j]))
}

pub fn matrix_from_spec(m: &MatrixSpec) -> Result<Tensor2, ConfigError> {
    match m {
        MatrixSpec::Literal(s) => parse_matrix(s),
        MatrixSpec::Rows(r) => Ok(Tensor2::new(*r)),
    }
}

/// `a:b` or `a:b:c`.
pub fn parse_range(s: &str) -> Result<(f64, f64, Option<f64>), ConfigError> {
    let parts = s.split(':').map(parse_scalar).collect::<Result<Vec<_>, _>>()?;
    match parts[..] {
        [a, b] => Ok((a, b, None)),
        [a, b, c] => Ok((a, b, Some(c))),
        _ => Err(ConfigError(format!("range must be a:b or a:b:step, got `{s}`"))),
    }
}

pub const PATH_NAMES: &str =
    "uniaxial, uniaxial_isochoric, equibiaxial, equibiaxial_isochoric, planar, simple_shear, rigid_rotation";

/// Named path with endpoints `range` (defaults per path).
pub fn named_path(name: &str, range: Option<(f64, f64)>) -> Result<MotionPath, ConfigError> {
    let stretch = range.unwrap_or((1.0, 2.0));
    let kind = match name {
        "uniaxial" => PathKind::Uniaxial { from: stretch.0, to: stretch.1 },
        "uniaxial_isochoric" => PathKind::UniaxialIsochoric { from: stretch.0, to: stretch.1 },
        "equibiaxial" => PathKind::Equibiaxial { from: stretch.0, to: stretch.1 },
        "equibiaxial_isochoric" => PathKind::EquibiaxialIsochoric { from: stretch.0, to: stretch.1 },
        "planar" => PathKind::Planar { from: stretch.0, to: stretch.1 },
        "simple_shear" => {
            let (from, to) = range.unwrap_or((0.0, 1.0));
            PathKind::SimpleShear { from, to }
        }
        "rigid_rotation" => {
            // range, if given, is the rotation angle swept over the unit time span
            let omega = range.map_or(1.3, |(a, b)| b - a);
            PathKind::RigidRotation { omega, axis: [0.0, 0.0, 1.0], base: Tensor2::diag(1.3, 0.9, 1.1) }
        }
        _ => return Err(ConfigError(format!("unknown path `{name}` (expected one of {PATH_NAMES})"))),
    };
    let p = MotionPath::new(name, kind);
    p.validate()?;
    Ok(p)
}

pub fn path_from_arg(arg: &str, range: Option<(f64, f64)>) -> Result<MotionPath, ConfigError> {
    if arg.trim_start().starts_with('{') || arg.ends_with(".json") {
        let p: MotionPath = json_arg(arg, "path")?;
        p.validate()?;
        return Ok(p);
    }
    named_path(arg, range)
}

pub fn path_from_spec(spec: &PathSpec, range: Option<(f64, f64)>) -> Result<MotionPath, ConfigError> {
    match spec {
        PathSpec::Named(n) => path_from_arg(n, range),
        PathSpec::Full(p) => {
            p.validate()?;
            Ok(p.clone())
        }
    }
}
