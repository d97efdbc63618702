use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use locsko::sim::{DemoOptions, JumpSpec, OdeSpec};
use locsko::tightness::{EnsembleSampler, PathFamily};
use locsko::timechange::{GSpec, RegularizeOptions};
use locsko::{Exhaustion, MetricKind};
use serde::Deserialize;

/// Run configuration.  Every section is optional; a command reads the
/// shared settings and its own section.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub metric: MetricKind,
    pub exhaustion: Exhaustion,
    /// terms kept in the local metric series
    pub n_terms: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub compactness: Option<CompactnessConfig>,
    pub tight: Option<TightConfig>,
    pub simulate: Option<SimulateConfig>,
    pub demo: Option<DemoConfig>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            metric: MetricKind::EuclideanTruncated,
            exhaustion: Exhaustion::default(),
            n_terms: 12,
            seed: 0,
            out: None,
            compactness: None,
            tight: None,
            simulate: None,
            demo: None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactnessConfig {
    pub family: PathFamily,
    pub t: Vec<f64>,
    /// radii of the centered balls `K`
    pub radii: Vec<f64>,
    pub deltas: Vec<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_tol() -> f64 {
    1e-3
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TightStatistic {
    #[default]
    OmegaPrime,
    RestrictedAlpha,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TightConfig {
    pub samplers: Vec<EnsembleSampler>,
    #[serde(default)]
    pub statistic: TightStatistic,
    pub epsilon: f64,
    pub t: f64,
    /// radius of the centered ball used as `K` (or `U`)
    pub radius: f64,
    pub deltas: Vec<f64>,
    pub n_mc: usize,
    /// hitting-time indices scanned by the restricted statistic
    #[serde(default = "default_max_index")]
    pub max_index: usize,
}

fn default_max_index() -> usize {
    16
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SimulateConfig {
    Ode { spec: OdeSpec },
    Levy { spec: JumpSpec },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Straddle {
    pub lo: f64,
    pub hi: f64,
    pub tol: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemoConfig {
    #[serde(default)]
    pub template: OdeSpec,
    /// explicit initial values; neighbours are compared
    #[serde(default)]
    pub x0: Vec<f64>,
    /// alternatively a pair around the explosion threshold
    #[serde(default)]
    pub straddle: Option<Straddle>,
    /// fixed rate function; when absent a regularizing one is built from the family
    #[serde(default)]
    pub g: Option<GSpec>,
    #[serde(default)]
    pub regularize: RegularizeOptions,
    #[serde(default)]
    pub options: DemoOptions,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: Config = serde_json::from_str(&text).with_context(|| format!("config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        Exhaustion::new(self.exhaustion.base, self.exhaustion.ratio)?;
        if self.n_terms == 0 {
            bail!("n_terms must be at least 1");
        }
        Ok(())
    }
}
