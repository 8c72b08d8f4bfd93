//! Run configuration, read from JSON.
//!
//! ```json
//! {
//!   "label_column": "species",
//!   "id_column": "id",
//!   "attributes": ["petal_length", "petal_width"],
//!   "relation": { "family": "similarity", "gamma": 2.0 },
//!   "triplet": { "kind": "lukasiewicz", "isomorphism": "identity" },
//!   "loss": "mse",
//!   "seed": 0,
//!   "alpha_level": 0.5,
//!   "relabel_threshold": 0.5
//! }
//! ```
//!
//! `relation.family` is `similarity` or `dominance` (with `gamma`), or
//! `metric` with `metric` in `euclidean`, `manhattan`, `mahalanobis`, the
//! scale `a`, an optional `sigma` (rows of `Σ`, Mahalanobis only) and
//! `scale` for min-max scaling. Tolerances can be set under `tolerances`
//! (`law`, `iso`, `rel`, `feas`, `kkt`) and are overridden in turn by the
//! environment variables `GRANAPPROX_EPS_LAW`, `GRANAPPROX_EPS_ISO`,
//! `GRANAPPROX_EPS_REL`, `GRANAPPROX_EPS_FEAS` and `GRANAPPROX_EPS_KKT`.

use std::path::Path;

use granapprox_core::pipeline::{MetricSpec, PipelineConfig, RelationFamily};
use granapprox_core::relations::Mahalanobis;
use granapprox_core::tolerance::{
    DEFAULT_FEAS, DEFAULT_ISO, DEFAULT_KKT, DEFAULT_LAW, DEFAULT_REL,
};
use granapprox_core::{LossKind, ResidualTriplet, Tolerances};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub label_column: String,
    #[serde(default)]
    pub id_column: Option<String>,
    /// Attribute columns; every remaining column when absent.
    #[serde(default)]
    pub attributes: Option<Vec<String>>,
    pub relation: RelationConfig,
    #[serde(default)]
    pub triplet: TripletConfig,
    pub loss: LossName,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "half")]
    pub alpha_level: f64,
    #[serde(default = "half")]
    pub relabel_threshold: f64,
    #[serde(default)]
    pub experimental_asymmetric: bool,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum RelationConfig {
    Similarity {
        gamma: f64,
    },
    Dominance {
        gamma: f64,
    },
    Metric {
        metric: MetricName,
        a: f64,
        #[serde(default)]
        sigma: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        scale: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricName {
    Euclidean,
    Manhattan,
    Mahalanobis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripletConfig {
    pub kind: String,
    #[serde(default = "identity")]
    pub isomorphism: String,
}

fn identity() -> String {
    "identity".into()
}

impl Default for TripletConfig {
    fn default() -> Self {
        TripletConfig {
            kind: "lukasiewicz".into(),
            isomorphism: identity(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossName {
    Mae,
    Mse,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    pub law: Option<f64>,
    pub iso: Option<f64>,
    pub rel: Option<f64>,
    pub feas: Option<f64>,
    pub kkt: Option<f64>,
}

impl ToleranceConfig {
    /// Config values, then environment overrides, then the library defaults.
    pub fn resolve(&self) -> CliResult<Tolerances<f64>> {
        let pick = |name: &str, own: Option<f64>, default: f64| -> CliResult<f64> {
            let var = format!("GRANAPPROX_EPS_{name}");
            let value = match std::env::var(&var) {
                Ok(s) => s
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::Config(format!("{var}={s}: {e}")))?,
                Err(_) => own.unwrap_or(default),
            };
            if !(value > 0.0 && value.is_finite()) {
                return Err(CliError::Config(format!(
                    "tolerance {} must be positive, got {value}",
                    name.to_ascii_lowercase()
                )));
            }
            Ok(value)
        };
        Ok(Tolerances::new(
            pick("LAW", self.law, DEFAULT_LAW)?,
            pick("ISO", self.iso, DEFAULT_ISO)?,
            pick("REL", self.rel, DEFAULT_REL)?,
            pick("FEAS", self.feas, DEFAULT_FEAS)?,
            pick("KKT", self.kkt, DEFAULT_KKT)?,
        ))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(path.display(), e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn triplet(&self) -> CliResult<ResidualTriplet<f64>> {
        Ok(ResidualTriplet::from_names(
            &self.triplet.kind,
            &self.triplet.isomorphism,
        )?)
    }

    /// Library configuration; `n_attributes` sizes and checks `Σ`.
    pub fn pipeline(&self, n_attributes: usize) -> CliResult<PipelineConfig<f64>> {
        let relation = match &self.relation {
            RelationConfig::Similarity { gamma } => {
                RelationFamily::TriangularSimilarity { gamma: *gamma }
            }
            RelationConfig::Dominance { gamma } => {
                RelationFamily::TriangularDominance { gamma: *gamma }
            }
            RelationConfig::Metric {
                metric,
                a,
                sigma,
                scale,
            } => {
                let metric = match (metric, sigma) {
                    (MetricName::Euclidean, None) => MetricSpec::Euclidean,
                    (MetricName::Manhattan, None) => MetricSpec::Manhattan,
                    (MetricName::Mahalanobis, Some(rows)) => {
                        if rows.len() != n_attributes
                            || rows.iter().any(|r| r.len() != n_attributes)
                        {
                            return Err(CliError::Config(format!(
                                "sigma must be {n_attributes}×{n_attributes}"
                            )));
                        }
                        let flat = rows.concat();
                        Mahalanobis::new(n_attributes, flat.clone())
                            .map_err(|e| CliError::Config(format!("sigma: {e}")))?;
                        MetricSpec::Mahalanobis(flat)
                    }
                    (MetricName::Mahalanobis, None) => {
                        return Err(CliError::Config("mahalanobis metric needs sigma".into()))
                    }
                    (_, Some(_)) => {
                        return Err(CliError::Config(
                            "sigma is only used by the mahalanobis metric".into(),
                        ))
                    }
                };
                RelationFamily::Metric {
                    metric,
                    a: *a,
                    scale: *scale,
                }
            }
        };
        let loss = match self.loss {
            LossName::Mae => LossKind::Mae,
            LossName::Mse => LossKind::Mse,
        };
        let mut cfg = PipelineConfig::new(relation, self.triplet()?, loss);
        cfg.options.tolerances = self.tolerances.resolve()?;
        cfg.options.experimental_asymmetric = self.experimental_asymmetric;
        cfg.alpha_level = self.alpha_level;
        cfg.relabel_threshold = self.relabel_threshold;
        cfg.validate()?;
        Ok(cfg)
    }
}
