use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{EnsembleSampler, SampledPath};
use super::stopping::{hitting_stopping_times, r_functional};
use crate::error::{Error, Result};
use crate::metrics::omega_prime;
use crate::path::StepPath;
use crate::space::{CompactSet, StateSpace};

/// Two-sided 95% normal quantile used for the half-widths.
pub const Z95: f64 = 1.96;

pub fn half_width(p: f64, n: usize) -> f64 {
    Z95 * (p * (1.0 - p) / n as f64).sqrt()
}

/// Which probability a report estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    /// `P(ω′_{t,K,X}(δ) >= ε)`
    OmegaPrime,
    /// `P(R >= ε)` maximised over the hitting-time triples only: a lower
    /// bound for the supremum over all stopping times
    RestrictedAlpha,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub sampler_label: String,
    pub epsilon: f64,
    pub t: f64,
    pub region: String,
    pub delta: f64,
    pub estimate: f64,
    pub half_width: f64,
    pub n_mc: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightnessReport {
    pub statistic: Statistic,
    /// one row per sampler and `δ`, then rows labelled `sup` (max over samplers)
    pub rows: Vec<ReportRow>,
    pub caveat: Option<String>,
}

impl TightnessReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sampler_label,epsilon,t,region,delta,estimate,half_width,n_mc\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:?},{:?},{},{:?},{:?},{:?},{}\n",
                r.sampler_label, r.epsilon, r.t, r.region, r.delta, r.estimate, r.half_width, r.n_mc
            ));
        }
        out
    }

    /// Rows of one sampler (or `sup`), in `δ`-grid order.
    pub fn curve(&self, label: &str) -> Vec<&ReportRow> {
        self.rows.iter().filter(|r| r.sampler_label == label).collect()
    }
}

pub fn region_label(k: &CompactSet) -> String {
    let join = |v: &[f64]| v.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>().join(" ");
    match k {
        CompactSet::Ball { center, radius } => format!("ball([{}] r={radius:?})", join(center)),
        CompactSet::Box { lo, hi } => format!("box([{}] [{}])", join(lo), join(hi)),
        CompactSet::Everything => "everything".into(),
    }
}

fn check(eps: f64, delta_grid: &[f64], n_mc: usize) -> Result<()> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    if delta_grid.is_empty() || delta_grid.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::InvalidArgument("delta grid must be nonempty and positive".into()));
    }
    if n_mc == 0 {
        return Err(Error::InvalidArgument("n_mc must be at least 1".into()));
    }
    Ok(())
}

/// Monte-Carlo estimates from per-sample indicator rows (one per `δ`).
fn assemble(
    statistic: Statistic,
    samplers: &[EnsembleSampler],
    hits: Vec<Vec<usize>>,
    eps: f64,
    t: f64,
    region: String,
    delta_grid: &[f64],
    n_mc: usize,
    caveat: Option<String>,
) -> TightnessReport {
    let row = |label: &str, di: usize, count: usize| {
        let p = count as f64 / n_mc as f64;
        ReportRow {
            sampler_label: label.to_string(),
            epsilon: eps,
            t,
            region: region.clone(),
            delta: delta_grid[di],
            estimate: p,
            half_width: half_width(p, n_mc),
            n_mc,
        }
    };
    let mut rows = Vec::new();
    for (s, counts) in samplers.iter().zip(&hits) {
        for (di, &c) in counts.iter().enumerate() {
            rows.push(row(&s.label, di, c));
        }
    }
    for di in 0..delta_grid.len() {
        let c = hits.iter().map(|h| h[di]).max().unwrap_or(0);
        rows.push(row("sup", di, c));
    }
    TightnessReport { statistic, rows, caveat }
}

/// `ω′_{t,K,x}(δ)` for each `δ`; the cemetery path has `ω′ = 0`.
pub fn omega_curve(x: &SampledPath, t: f64, k: &CompactSet, delta_grid: &[f64], space: &StateSpace) -> Vec<f64> {
    match x {
        SampledPath::Cemetery => vec![0.0; delta_grid.len()],
        SampledPath::Path(p) => delta_grid.iter().map(|&d| omega_prime(p, t, k, d, space)).collect(),
    }
}

/// `P(ω′_{t,K,X}(δ) >= ε)` for each sampler and `δ`, and the sup over samplers.
#[allow(clippy::too_many_arguments)]
pub fn tightness_statistic(
    samplers: &[EnsembleSampler],
    t: f64,
    k: &CompactSet,
    eps: f64,
    delta_grid: &[f64],
    n_mc: usize,
    seed: u64,
    space: &StateSpace,
) -> Result<TightnessReport> {
    check(eps, delta_grid, n_mc)?;
    let mut hits = Vec::with_capacity(samplers.len());
    for (si, s) in samplers.iter().enumerate() {
        let draws = s.sample_many(seed, si as u64, n_mc)?;
        let per: Vec<Vec<bool>> = draws
            .par_iter()
            .map(|x| omega_curve(x, t, k, delta_grid, space).into_iter().map(|w| w >= eps).collect())
            .collect();
        hits.push((0..delta_grid.len()).map(|di| per.iter().filter(|v| v[di]).count()).collect());
    }
    Ok(assemble(Statistic::OmegaPrime, samplers, hits, eps, t, region_label(k), delta_grid, n_mc, None))
}

/// Index patterns `(i, j, k)` relative to `n`: consecutive hitting times,
/// with `τ_1 = τ_2` or `τ_2 = τ_3` allowed.
const PATTERNS: [(usize, usize, usize); 4] = [(0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 1, 2)];

/// `R` for the stopping times `τ_i`, `τ_j`, `τ_k` (from the hitting family),
/// each truncated at `(τ_1 + δ) ∧ t ∧ τ^U`.
fn r_for_triple(x: &StepPath, taus: &[f64], idx: (usize, usize, usize), delta: f64, t: f64, exit: f64, space: &StateSpace) -> f64 {
    let at = |m: usize| taus[m.min(taus.len() - 1)];
    let stop = t.min(exit);
    let t1 = at(idx.0).min(stop);
    let cap = (t1 + delta).min(stop);
    let t2 = at(idx.1).min(cap);
    let t3 = at(idx.2).min(cap);
    r_functional(x, t1, t2, t3, space)
}

/// Restricted version of `α(ε, t, U, δ)`: for each triple of the hitting
/// family (consecutive indices from `τ_n`, `n < max_index`) the probability
/// `P(R >= ε)` is estimated, and the largest one is reported.
#[allow(clippy::too_many_arguments)]
pub fn aldous_statistic(
    samplers: &[EnsembleSampler],
    eps: f64,
    t: f64,
    u: &CompactSet,
    delta_grid: &[f64],
    n_mc: usize,
    seed: u64,
    max_index: usize,
    space: &StateSpace,
) -> Result<TightnessReport> {
    check(eps, delta_grid, n_mc)?;
    let n_triples = max_index * PATTERNS.len();
    let mut hits = Vec::with_capacity(samplers.len());
    for (si, s) in samplers.iter().enumerate() {
        let draws = s.sample_many(seed, si as u64, n_mc)?;
        // per draw: for each δ, the set of triples with R >= ε
        let per: Vec<Vec<Vec<bool>>> = draws
            .par_iter()
            .map(|draw| match draw {
                // τ_1 = ξ = 0: R = 0 for every triple
                SampledPath::Cemetery => vec![vec![false; n_triples]; delta_grid.len()],
                SampledPath::Path(x) => {
                    let taus = hitting_stopping_times(x, eps, t, u, space);
                    let exit = x.exit_time(u);
                    delta_grid
                        .iter()
                        .map(|&d| {
                            (0..max_index)
                                .flat_map(|n| PATTERNS.iter().map(move |p| (n + p.0, n + p.1, n + p.2)))
                                .map(|idx| r_for_triple(x, &taus, idx, d, t, exit, space) >= eps)
                                .collect()
                        })
                        .collect()
                }
            })
            .collect();
        let counts: Vec<usize> = (0..delta_grid.len())
            .map(|di| (0..n_triples).map(|q| per.iter().filter(|v| v[di][q]).count()).max().unwrap_or(0))
            .collect();
        hits.push(counts);
    }
    let caveat = "restricted-alpha lower bound: stopping times limited to the hitting-time family".to_string();
    Ok(assemble(Statistic::RestrictedAlpha, samplers, hits, eps, t, region_label(u), delta_grid, n_mc, Some(caveat)))
}

/// `δ ↦ sup_{x ∈ D} ω′_{t,K,x}(δ)` for one `(t, K)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompactnessCurve {
    pub t: f64,
    pub region: String,
    pub deltas: Vec<f64>,
    pub sup_omega: Vec<f64>,
    /// the value at the smallest `δ` is below the tolerance
    pub relatively_compact: bool,
}

pub fn compactness_report(
    d: &[StepPath],
    t_list: &[f64],
    k_list: &[CompactSet],
    delta_grid: &[f64],
    tol: f64,
    space: &StateSpace,
) -> Vec<CompactnessCurve> {
    let mut out = Vec::new();
    for &t in t_list {
        for k in k_list {
            let sup_omega: Vec<f64> = delta_grid
                .iter()
                .map(|&delta| d.par_iter().map(|x| omega_prime(x, t, k, delta, space)).reduce(|| 0.0, f64::max))
                .collect();
            let smallest = delta_grid
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| sup_omega[i]);
            out.push(CompactnessCurve {
                t,
                region: region_label(k),
                deltas: delta_grid.to_vec(),
                relatively_compact: smallest.is_some_and(|v| v < tol),
                sup_omega,
            });
        }
    }
    out
}
