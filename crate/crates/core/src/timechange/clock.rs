use super::gfunc::GFunction;
use crate::error::Result;
use crate::path::StepPath;

/// The additive functional `A_t = ∫_0^t du / g(x_u)` of a step path, exact up
/// to `τ_∞ = τ^{g≠0} ∧ ξ` and `+inf` after it.
#[derive(Clone, Debug, PartialEq)]
pub struct Clock {
    /// starts of the segments before `τ_∞`
    pub starts: Vec<f64>,
    /// `A` at each start
    pub a_values: Vec<f64>,
    /// `g` on each segment before `τ_∞`
    pub rates: Vec<f64>,
    pub tau_inf: f64,
    pub a_tau_inf: f64,
    /// first segment on which `g` vanishes
    pub zero_hit: Option<usize>,
    /// `A_{τ_∞} = ∞`
    pub hits_infinity: bool,
}

impl Clock {
    pub fn new(g: &GFunction, x: &StepPath) -> Result<Self> {
        let mut starts = Vec::new();
        let mut a_values = Vec::new();
        let mut rates = Vec::new();
        let mut zero_hit = None;
        let mut acc = 0.0;
        for (i, v) in x.values().iter().enumerate() {
            let rate = g.eval(v)?;
            if rate == 0.0 {
                zero_hit = Some(i);
                break;
            }
            starts.push(x.times()[i]);
            a_values.push(acc);
            rates.push(rate);
            acc += (x.segment_end(i) - x.times()[i]) / rate;
        }
        let tau_inf = match zero_hit {
            Some(z) => x.times()[z],
            None => x.xi(),
        };
        Ok(Self { starts, a_values, rates, tau_inf, a_tau_inf: acc, zero_hit, hits_infinity: acc.is_infinite() })
    }

    /// `A_t`.
    pub fn a(&self, t: f64) -> f64 {
        if t > self.tau_inf {
            return f64::INFINITY;
        }
        if t == self.tau_inf {
            return self.a_tau_inf;
        }
        let i = self.starts.partition_point(|&s| s <= t) - 1;
        self.a_values[i] + (t - self.starts[i]) / self.rates[i]
    }

    /// `τ_s = inf{t >= 0 : A_t >= s}`; sticks at `τ_∞` once `s > A_{τ_∞}`.
    pub fn tau(&self, s: f64) -> f64 {
        if s >= self.a_tau_inf {
            return self.tau_inf;
        }
        if s <= 0.0 {
            return 0.0;
        }
        let i = self.a_values.partition_point(|&a| a <= s) - 1;
        self.starts[i] + (s - self.a_values[i]) * self.rates[i]
    }
}
