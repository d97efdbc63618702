use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::omega_prime_at_most;
use crate::path::StepPath;
use crate::space::{CompactSet, MetricKind, StateSpace};

/// The open set `U = {g ≠ 0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Region {
    /// all of `S`; `g` vanishes only at Δ
    Whole,
    /// open ball `B(center, radius)`
    Ball { center: Vec<f64>, radius: f64 },
}

impl Region {
    /// Chordal distance from `a` to `S^Δ \ U`.
    pub fn dist_to_outside(&self, a: &[f64]) -> f64 {
        let sp = StateSpace::new(a.len(), MetricKind::Chordal).expect("nonempty point");
        match self {
            Region::Whole => sp.dist_to_cemetery(a),
            Region::Ball { center, radius } => {
                sp.dist_to_complement(a, &CompactSet::Ball { center: center.clone(), radius: *radius })
            }
        }
    }
}

/// `g(a) = φ(d(a, S^Δ \ U))` with `φ` piecewise linear through `(0, 0)` and
/// the breakpoints, constant after the last one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GProfile {
    pub region: Region,
    /// `(r, φ(r))`, `r` increasing and `φ` nondecreasing
    pub breakpoints: Vec<(f64, f64)>,
    /// the `η_n` the profile was built from, if any
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eta: Vec<f64>,
}

impl GProfile {
    pub fn validated(self) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("radial profile: {m}")));
        if self.breakpoints.is_empty() {
            return bad("no breakpoints");
        }
        let mut prev = (0.0, 0.0);
        for (i, &(r, v)) in self.breakpoints.iter().enumerate() {
            if !r.is_finite() || !v.is_finite() {
                return bad(&format!("breakpoints[{i}] is not finite"));
            }
            if r <= prev.0 || v < prev.1 || (i == 0 && v <= 0.0) {
                return bad(&format!("breakpoints[{i}] breaks monotonicity"));
            }
            prev = (r, v);
        }
        if let Region::Ball { radius, .. } = &self.region {
            if !(*radius > 0.0) {
                return bad("region radius must be positive");
            }
        }
        Ok(self)
    }

    pub fn phi(&self, r: f64) -> f64 {
        let b = &self.breakpoints;
        let i = b.partition_point(|&(s, _)| s <= r);
        if i == b.len() {
            return b[i - 1].1;
        }
        let (r0, v0) = if i == 0 { (0.0, 0.0) } else { b[i - 1] };
        let (r1, v1) = b[i];
        v0 + (v1 - v0) * (r - r0) / (r1 - r0)
    }

    pub fn eval(&self, a: &[f64]) -> f64 {
        self.phi(self.region.dist_to_outside(a))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegularizeOptions {
    /// `η_n` is computed for `n = 0..=n_max`
    pub n_max: usize,
    /// search grid `2^{-1}, .., 2^{-j_max}`
    pub j_max: u32,
}

impl Default for RegularizeOptions {
    fn default() -> Self {
        Self { n_max: 16, j_max: 50 }
    }
}

/// A rate function that makes the global topology of `S^Δ` agree with the
/// local one on `{g·x : x ∈ D}`.
///
/// For each `n`, `η_n` is the largest `2^{-j}` with
/// `sup_D ω′_{2^n, K, x}(η_n) < 2^{-n-2}` where `K` is the complement of the
/// chordal ball `B(Δ, 2^{-n-2})`.  Then `φ(2^{-n}) = 2^{-n} η_n`.
pub fn build_regularizing_g(d: &[StepPath], region: &Region, opts: &RegularizeOptions) -> Result<GProfile> {
    let Some(first) = d.first() else {
        return Err(Error::InvalidArgument("empty family".into()));
    };
    let dim = first.dim();
    if d.iter().any(|x| x.dim() != dim) {
        return Err(Error::InvalidArgument("paths of mixed dimension".into()));
    }
    let sp = StateSpace::new(dim, MetricKind::Chordal)?;
    let mut eta: Vec<f64> = Vec::with_capacity(opts.n_max + 1);
    for n in 0..=opts.n_max {
        let r = 0.5f64.powi(n as i32 + 2);
        let k = CompactSet::centered_ball(dim, (4.0 / (r * r) - 1.0).sqrt());
        let t = 2f64.powi(n as i32);
        let c = r.next_down();
        let ok = |j: u32| d.iter().all(|x| omega_prime_at_most(x, t, &k, 0.5f64.powi(j as i32), c, &sp));
        // ω′ is nondecreasing in δ: find the least j that works
        if !ok(opts.j_max) {
            return Err(Error::NotCompact(format!(
                "sup ω′ stays above {r} at δ = 2^-{} (n = {n})",
                opts.j_max
            )));
        }
        let (mut lo, mut hi) = (1u32, opts.j_max);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let e = 0.5f64.powi(hi as i32);
        eta.push(eta.last().map_or(e, |&p: &f64| p.min(e)));
    }
    let mut breakpoints: Vec<(f64, f64)> = (0..=opts.n_max)
        .rev()
        .map(|n| {
            let r = 0.5f64.powi(n as i32);
            (r, r * eta[n])
        })
        .collect();
    breakpoints.dedup_by(|a, b| a.0 == b.0);
    GProfile { region: region.clone(), breakpoints, eta }.validated()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_interpolates() {
        let p = GProfile { region: Region::Whole, breakpoints: vec![(0.5, 0.1), (1.0, 0.3)], eta: vec![] }
            .validated()
            .unwrap();
        assert_eq!(p.phi(0.0), 0.0);
        assert!((p.phi(0.25) - 0.05).abs() < 1e-15);
        assert!((p.phi(0.75) - 0.2).abs() < 1e-15);
        assert_eq!(p.phi(1.7), 0.3);
        assert!(p.eval(&[1e9]) < 1e-9);
        assert!(p.eval(&[0.0]) == 0.3);
    }

    #[test]
    fn constant_family() {
        let x = StepPath::scalar(&[(0.0, 1.0)], f64::INFINITY).unwrap();
        let p = build_regularizing_g(&[x], &Region::Whole, &RegularizeOptions { n_max: 6, j_max: 50 }).unwrap();
        assert_eq!(p.eta, vec![0.5; 7]);
        assert!(p.eval(&[1.0]) > 0.0);
    }

    #[test]
    fn bounded_on_shells() {
        let x = StepPath::scalar(&[(0.0, 0.0), (0.3, 2.0), (0.35, 40.0), (0.37, 900.0)], 0.375).unwrap();
        let opts = RegularizeOptions { n_max: 8, j_max: 50 };
        let p = build_regularizing_g(&[x], &Region::Whole, &opts).unwrap();
        assert!(p.eta.windows(2).all(|w| w[1] <= w[0]));
        for n in 0..=opts.n_max {
            let r = 0.5f64.powi(n as i32);
            for s in [0.999 * r, 0.5 * r, 0.01 * r] {
                assert!(p.phi(s) <= r * p.eta[n] * (1.0 + 1e-12));
            }
        }
    }
}
