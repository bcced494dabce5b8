//! TOML pipeline configuration. Every field is optional; omitted fields take
//! the defaults of [`PipelineConfig`].
//!
//! ```toml
//! interval = "0,1"
//! epsilon = "1/48"
//! pair = "gamma-dyadic"        # or pair_file = "pair.json"
//! max_core_len = 12
//!
//! [campaign]
//! radius = 2
//! exhaustive_max = 2
//! random_count = 10000
//! random_max = 8
//! egs_count = 1000
//! seed = 7
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pwproj_core::number::{format_rational, parse_rational, Rational};
use pwproj_core::pipeline::{CampaignPlan, PipelineConfig};
use pwproj_core::projective::ClosedInterval;
use pwproj_core::word::{stock_pair, stock_pairs, GeneratorPair};

use crate::format::{from_json, to_value};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub interval: Option<String>,
    pub epsilon: Option<String>,
    pub pair: Option<String>,
    pub pair_file: Option<PathBuf>,
    pub max_core_len: Option<usize>,
    pub campaign: Option<PlanFile>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanFile {
    pub radius: Option<usize>,
    pub exhaustive_max: Option<usize>,
    pub random_count: Option<usize>,
    pub random_max: Option<usize>,
    pub egs_count: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{field}: {message}")]
    Field { field: &'static str, message: String },
}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field,
        message: message.into(),
    }
}

/// `lo,hi` with rational endpoints.
pub fn parse_interval(s: &str) -> Result<ClosedInterval, String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let lo = parse_rational(lo.trim()).map_err(|e| e.to_string())?;
    let hi = parse_rational(hi.trim()).map_err(|e| e.to_string())?;
    ClosedInterval::rational(lo, hi).ok_or_else(|| "need lo < hi".to_string())
}

pub fn parse_epsilon(s: &str) -> Result<Rational, String> {
    let e = parse_rational(s.trim()).map_err(|e| e.to_string())?;
    if e <= Rational::from_integer(0.into()) || e >= Rational::from_integer(1.into()) {
        return Err(format!("epsilon must lie in (0, 1), got {}", format_rational(&e)));
    }
    Ok(e)
}

pub fn lookup_pair(name: &str) -> Result<GeneratorPair, String> {
    stock_pair(name).ok_or_else(|| {
        let names: Vec<String> = stock_pairs().into_iter().map(|p| p.name).collect();
        format!("unknown pair {name:?}; shipped pairs: {}", names.join(", "))
    })
}

pub fn read_pair_file(path: &Path) -> Result<GeneratorPair, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_json(&text).map_err(|e| ConfigError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

impl ConfigFile {
    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: ConfigFile = toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        // pair files are relative to the config file
        if let (Some(p), Some(dir)) = (&cfg.pair_file, path.parent()) {
            if p.is_relative() {
                cfg.pair_file = Some(dir.join(p));
            }
        }
        Ok(cfg)
    }

    pub fn resolve(&self) -> Result<PipelineConfig, ConfigError> {
        let mut cfg = PipelineConfig::default();
        if let Some(s) = &self.interval {
            cfg.interval = parse_interval(s).map_err(|m| field("interval", m))?;
        }
        if let Some(s) = &self.epsilon {
            cfg.epsilon = parse_epsilon(s).map_err(|m| field("epsilon", m))?;
        }
        match (&self.pair, &self.pair_file) {
            (Some(_), Some(_)) => return Err(field("pair", "give pair or pair_file, not both")),
            (Some(name), None) => cfg.pair = lookup_pair(name).map_err(|m| field("pair", m))?,
            (None, Some(path)) => cfg.pair = read_pair_file(path)?,
            (None, None) => {}
        }
        if let Some(n) = self.max_core_len {
            cfg.max_core_len = n;
        }
        if let Some(p) = &self.campaign {
            let plan = &mut cfg.plan;
            plan.radius = p.radius.unwrap_or(plan.radius);
            plan.exhaustive_max = p.exhaustive_max.unwrap_or(plan.exhaustive_max);
            plan.random_count = p.random_count.unwrap_or(plan.random_count);
            plan.random_max = p.random_max.unwrap_or(plan.random_max);
            plan.egs_count = p.egs_count.unwrap_or(plan.egs_count);
            plan.seed = p.seed.unwrap_or(plan.seed);
        }
        if cfg.plan.random_count > 0 && cfg.plan.random_max == 0 {
            return Err(field("campaign.random_max", "must be positive when random_count is"));
        }
        Ok(cfg)
    }
}

/// The fully resolved configuration, as logged and stored in bundles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub interval: String,
    pub epsilon: String,
    pub pair: String,
    pub pair_matrices: serde_json::Value,
    pub max_core_len: usize,
    pub campaign: ResolvedPlan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedPlan {
    pub radius: usize,
    pub exhaustive_max: usize,
    pub random_count: usize,
    pub random_max: usize,
    pub egs_count: usize,
    pub seed: u64,
}

impl From<&CampaignPlan> for ResolvedPlan {
    fn from(p: &CampaignPlan) -> Self {
        ResolvedPlan {
            radius: p.radius,
            exhaustive_max: p.exhaustive_max,
            random_count: p.random_count,
            random_max: p.random_max,
            egs_count: p.egs_count,
            seed: p.seed,
        }
    }
}

pub fn resolved(cfg: &PipelineConfig) -> Resolved {
    Resolved {
        interval: format!("{},{}", cfg.interval.lo(), cfg.interval.hi()),
        epsilon: format_rational(&cfg.epsilon),
        pair: cfg.pair.name.clone(),
        pair_matrices: to_value(&cfg.pair),
        max_core_len: cfg.max_core_len,
        campaign: (&cfg.plan).into(),
    }
}

pub fn render(cfg: &PipelineConfig) -> String {
    serde_json::to_string(&resolved(cfg)).expect("serializes")
}
