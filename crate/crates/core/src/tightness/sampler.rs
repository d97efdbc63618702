use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::StepPath;
use crate::sim::{levy_step_path, JumpLaw, JumpSpec};

/// A draw from a law on paths.  `Cemetery` is the path that is dead from
/// time 0 on (`ξ = 0`), which a [`StepPath`] cannot represent.
#[derive(Clone, Debug, PartialEq)]
pub enum SampledPath {
    Cemetery,
    Path(StepPath),
}

impl SampledPath {
    pub fn path(&self) -> Option<&StepPath> {
        match self {
            SampledPath::Cemetery => None,
            SampledPath::Path(p) => Some(p),
        }
    }
}

/// How paths are generated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SamplerKind {
    /// always the same path
    Fixed { path: StepPath },
    /// compound Poisson with intensity uniform in `[rate_lo, rate_hi]`
    CompoundPoisson {
        rate_lo: f64,
        rate_hi: f64,
        law: JumpLaw,
        horizon: f64,
        #[serde(default)]
        clamp: Option<f64>,
    },
    /// `0` before a uniform time in `[t_lo, t_hi)`, `size` after
    SingleJump { size: f64, t_lo: f64, t_hi: f64 },
    /// jumps of `size` at `T` and `T + gap`, `T` uniform in `[t_lo, t_hi)`
    TwoJumps { size: f64, gap: f64, t_lo: f64, t_hi: f64 },
}

/// A seeded generator of step paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSampler {
    pub label: String,
    pub family: SamplerKind,
    /// probability of emitting the cemetery path
    #[serde(default)]
    pub p_dead: f64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `i`-th draw of stream `stream` under the master seed.
pub fn stream_seed(seed: u64, stream: u64, i: u64) -> u64 {
    splitmix(splitmix(seed ^ splitmix(stream)).wrapping_add(i))
}

impl EnsembleSampler {
    pub fn new(label: impl Into<String>, family: SamplerKind) -> Self {
        Self { label: label.into(), family, p_dead: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("sampler {:?}: {m}", self.label)));
        if !(0.0..=1.0).contains(&self.p_dead) {
            return bad("p_dead must lie in [0, 1]");
        }
        match &self.family {
            SamplerKind::Fixed { .. } => Ok(()),
            SamplerKind::CompoundPoisson { rate_lo, rate_hi, law, horizon, clamp } => {
                if !(*rate_lo > 0.0 && rate_lo <= rate_hi && rate_hi.is_finite()) {
                    return bad("rates must satisfy 0 < rate_lo <= rate_hi");
                }
                JumpSpec { clamp: *clamp, ..JumpSpec::new(*rate_lo, law.clone(), *horizon) }.validate()
            }
            SamplerKind::SingleJump { size, t_lo, t_hi } | SamplerKind::TwoJumps { size, t_lo, t_hi, .. } => {
                if !size.is_finite() || !(*t_lo > 0.0 && t_lo <= t_hi && t_hi.is_finite()) {
                    return bad("need finite size and 0 < t_lo <= t_hi");
                }
                if let SamplerKind::TwoJumps { gap, .. } = &self.family {
                    if !(*gap > 0.0) || !gap.is_finite() {
                        return bad("gap must be positive");
                    }
                }
                Ok(())
            }
        }
    }

    /// Draw from a seed; the same seed always gives the same path.
    pub fn sample(&self, seed: u64) -> Result<SampledPath> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if self.p_dead > 0.0 && rng.random::<f64>() < self.p_dead {
            return Ok(SampledPath::Cemetery);
        }
        let uniform = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| if lo < hi { rng.random_range(lo..hi) } else { lo };
        let p = match &self.family {
            SamplerKind::Fixed { path } => path.clone(),
            SamplerKind::CompoundPoisson { rate_lo, rate_hi, law, horizon, clamp } => {
                let rate = uniform(&mut rng, *rate_lo, *rate_hi);
                let spec = JumpSpec { clamp: *clamp, ..JumpSpec::new(rate, law.clone(), *horizon) };
                levy_step_path(&spec, rng.random())?
            }
            SamplerKind::SingleJump { size, t_lo, t_hi } => {
                let t = uniform(&mut rng, *t_lo, *t_hi);
                StepPath::scalar(&[(0.0, 0.0), (t, *size)], f64::INFINITY)?
            }
            SamplerKind::TwoJumps { size, gap, t_lo, t_hi } => {
                let t = uniform(&mut rng, *t_lo, *t_hi);
                StepPath::scalar(&[(0.0, 0.0), (t, *size), (t + gap, 2.0 * size)], f64::INFINITY)?
            }
        };
        Ok(SampledPath::Path(p))
    }

    /// `n` draws of stream `stream`, generated in parallel and returned in order.
    pub fn sample_many(&self, seed: u64, stream: u64, n: usize) -> Result<Vec<SampledPath>> {
        self.validate()?;
        (0..n as u64).into_par_iter().map(|i| self.sample(stream_seed(seed, stream, i))).collect()
    }
}
