use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::StepPath;

/// Law of a single jump displacement (applied to every coordinate).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum JumpLaw {
    Normal { mean: f64, sd: f64 },
    Uniform { lo: f64, hi: f64 },
    /// jumps of `+size` or `-size` with equal probability
    Symmetric { size: f64 },
    Fixed { size: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSpec {
    pub intensity: f64,
    pub law: JumpLaw,
    /// coordinates are clamped to `[-clamp, clamp]`
    #[serde(default)]
    pub clamp: Option<f64>,
    pub horizon: f64,
    #[serde(default = "one")]
    pub dim: usize,
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
}

fn one() -> usize {
    1
}

impl JumpSpec {
    pub fn new(intensity: f64, law: JumpLaw, horizon: f64) -> Self {
        Self { intensity, law, clamp: None, horizon, dim: 1, x0: None }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.intensity > 0.0) || !self.intensity.is_finite() {
            return bad(format!("intensity must be positive, got {}", self.intensity));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        if self.dim == 0 || self.x0.as_ref().is_some_and(|v| v.len() != self.dim) {
            return bad("x0 does not match dim".into());
        }
        if self.clamp.is_some_and(|c| !(c >= 0.0)) {
            return bad("clamp must be nonnegative".into());
        }
        match self.law {
            JumpLaw::Normal { sd, .. } if !(sd >= 0.0) => bad("sd must be nonnegative".into()),
            JumpLaw::Uniform { lo, hi } if !(lo <= hi) => bad("uniform law needs lo <= hi".into()),
            _ => Ok(()),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self.law {
            JumpLaw::Normal { mean, sd } => Normal::new(mean, sd).expect("validated").sample(rng),
            JumpLaw::Uniform { lo, hi } => {
                if lo == hi {
                    lo
                } else {
                    rng.random_range(lo..hi)
                }
            }
            JumpLaw::Symmetric { size } => {
                if rng.random::<bool>() {
                    size
                } else {
                    -size
                }
            }
            JumpLaw::Fixed { size } => size,
        }
    }
}

/// Compound-Poisson step path on `[0, horizon]`; never explodes.
///
/// Jumps that leave the value unchanged (after clamping) are dropped.
pub fn levy_step_path(spec: &JumpSpec, seed: u64) -> Result<StepPath> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let wait = Exp::new(spec.intensity).expect("validated");
    let mut v = spec.x0.clone().unwrap_or_else(|| vec![0.0; spec.dim]);
    let mut jumps = vec![(0.0, v.clone())];
    let mut t = 0.0;
    loop {
        t += wait.sample(&mut rng);
        if t > spec.horizon {
            break;
        }
        let next: Vec<f64> = v
            .iter()
            .map(|c| {
                let y = c + spec.draw(&mut rng);
                spec.clamp.map_or(y, |m| y.clamp(-m, m))
            })
            .collect();
        if next != v && t > jumps.last().expect("nonempty").0 {
            jumps.push((t, next.clone()));
            v = next;
        }
    }
    StepPath::new(spec.dim, jumps, f64::INFINITY)
}
