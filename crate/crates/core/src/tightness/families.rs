use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::StepPath;

/// Deterministic path families used as compactness fixtures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PathFamily {
    /// `x^n = 1{[1/n, ∞)}` for `n = 1..=count`; the jumps pile up at 0
    AccumulatingJumps { count: usize },
    /// `sin(2π s)` sampled on the grid `2^{-m}` over `[0, 1]` and held
    /// afterwards, for `m = 1..=levels`
    Refinement { levels: usize },
    Explicit { paths: Vec<StepPath> },
}

impl PathFamily {
    pub fn build(&self) -> Result<Vec<StepPath>> {
        match self {
            PathFamily::AccumulatingJumps { count } => (1..=*count)
                .map(|n| StepPath::scalar(&[(0.0, 0.0), (1.0 / n as f64, 1.0)], f64::INFINITY))
                .collect(),
            PathFamily::Refinement { levels } => (1..=*levels)
                .map(|m| {
                    let n = 1usize << m;
                    let jumps: Vec<(f64, f64)> = (0..=n)
                        .map(|i| {
                            let s = i as f64 / n as f64;
                            (s, (2.0 * std::f64::consts::PI * s).sin())
                        })
                        .collect();
                    StepPath::new(1, jumps.into_iter().map(|(s, v)| (s, vec![v])).collect(), f64::INFINITY)
                        .map(|p| p.canonical())
                })
                .collect(),
            PathFamily::Explicit { paths } => {
                if paths.is_empty() {
                    return Err(Error::InvalidArgument("explicit family is empty".into()));
                }
                Ok(paths.clone())
            }
        }
    }
}
