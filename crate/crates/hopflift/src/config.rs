//! Run configuration shared by the CLI, the FFI surface and the test
//! suites. Plain-text config files use one `key = value` pair per line;
//! CLI flags override file values.

use std::collections::BTreeMap;

use crate::expr::{Binding, Domain};
use crate::fields::SampleConfig;
use crate::lift::Section;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Relative fixed-point tolerance for convergence detection.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Abort threshold on the total tree node count of an iterate.
    pub node_budget: u64,
    pub sample_count: usize,
    pub box_min: [f64; 3],
    pub box_max: [f64; 3],
    pub rng_seed: u64,
    /// Enables simplification rules valid on the positive octant.
    pub positive_domain: bool,
    pub eps_mag: f64,
    pub eps_sec: f64,
    /// Residual pass threshold for verification.
    pub threshold: f64,
    /// Named constants bound during evaluation (e.g. kappa).
    pub params: BTreeMap<String, f64>,
    pub section: Section,
    /// Quadrature node count for holonomy integrals.
    pub quadrature_nodes: usize,
    /// Finite-difference step for the planar Liouville residual.
    pub fd_step: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: 1e-9,
            max_iterations: 10,
            node_budget: 200_000,
            sample_count: 100,
            box_min: [0.3; 3],
            box_max: [1.7; 3],
            rng_seed: 42,
            positive_domain: true,
            eps_mag: 1e-8,
            eps_sec: 1e-6,
            threshold: 1e-8,
            params: BTreeMap::new(),
            section: Section::NorthRegular,
            quadrature_nodes: 1024,
            fd_step: 1e-4,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("config line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("config field '{field}' must be positive, got {value}")]
    NotPositive { field: &'static str, value: f64 },
}

impl RunConfig {
    pub fn domain(&self) -> Domain {
        if self.positive_domain {
            Domain::Positive
        } else {
            Domain::Unrestricted
        }
    }

    pub fn sample_config(&self) -> SampleConfig {
        SampleConfig {
            box_min: self.box_min,
            box_max: self.box_max,
            count: self.sample_count,
            rng_seed: self.rng_seed,
            eps_mag: self.eps_mag,
            eps_sec: self.eps_sec,
        }
    }

    /// Parameter bindings (pi plus declared constants).
    pub fn binding(&self) -> Binding {
        let mut b = Binding::new();
        for (k, v) in &self.params {
            b.set_real(k, *v);
        }
        b
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let checks: [(&'static str, f64); 7] = [
            ("tolerance", self.tolerance),
            ("max_iterations", self.max_iterations as f64),
            ("node_budget", self.node_budget as f64),
            ("sample_count", self.sample_count as f64),
            ("eps_mag", self.eps_mag),
            ("eps_sec", self.eps_sec),
            ("threshold", self.threshold),
        ];
        for (field, value) in checks {
            if !(value > 0.0) {
                return Err(ConfigError::NotPositive { field, value });
            }
        }
        Ok(())
    }

    /// Apply `key = value` lines from a config file. Unknown keys are
    /// errors; `param.NAME = value` declares a named constant.
    pub fn apply_file(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let (key, value) = stripped.split_once('=').ok_or(ConfigError::Line {
                line,
                message: "expected 'key = value'".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |message: String| ConfigError::Line { line, message };
            let parse_f64 = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| bad(format!("invalid number '{v}'")))
            };
            match key {
                "tolerance" => self.tolerance = parse_f64(value)?,
                "max_iterations" => {
                    self.max_iterations = value
                        .parse()
                        .map_err(|_| bad(format!("invalid integer '{value}'")))?
                }
                "node_budget" => {
                    self.node_budget = value
                        .parse()
                        .map_err(|_| bad(format!("invalid integer '{value}'")))?
                }
                "sample_count" => {
                    self.sample_count = value
                        .parse()
                        .map_err(|_| bad(format!("invalid integer '{value}'")))?
                }
                "box_min" => self.box_min = [parse_f64(value)?; 3],
                "box_max" => self.box_max = [parse_f64(value)?; 3],
                "rng_seed" => {
                    self.rng_seed = value
                        .parse()
                        .map_err(|_| bad(format!("invalid integer '{value}'")))?
                }
                "positive_domain" => {
                    self.positive_domain = value
                        .parse()
                        .map_err(|_| bad(format!("invalid bool '{value}'")))?
                }
                "eps_mag" => self.eps_mag = parse_f64(value)?,
                "eps_sec" => self.eps_sec = parse_f64(value)?,
                "threshold" => self.threshold = parse_f64(value)?,
                "quadrature_nodes" => {
                    self.quadrature_nodes = value
                        .parse()
                        .map_err(|_| bad(format!("invalid integer '{value}'")))?
                }
                "fd_step" => self.fd_step = parse_f64(value)?,
                "section" => {
                    self.section = match value {
                        "north" => Section::NorthRegular,
                        "south" => Section::SouthRegular,
                        other => return Err(bad(format!("unknown section '{other}'"))),
                    }
                }
                _ => {
                    if let Some(name) = key.strip_prefix("param.") {
                        let v = parse_f64(value)?;
                        self.params.insert(name.trim().to_string(), v);
                    } else {
                        return Err(bad(format!("unknown config key '{key}'")));
                    }
                }
            }
        }
        Ok(())
    }
}
