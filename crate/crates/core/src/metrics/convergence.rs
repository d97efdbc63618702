use serde::Serialize;

use super::{global_rho_with_warp, TimeWarp};
use crate::path::StepPath;
use crate::space::StateSpace;

/// Which characterisation of local convergence applies to the limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `ξ(x) < ∞` with relatively compact range: compare up to `ξ(x)` and
    /// require `x^k` to be near Δ at `λ^k(ξ(x))`.
    Explosive,
    /// Otherwise: compare on `[0, t]` for each tested `t < ξ(x)`.
    Open,
}

/// Convergence terms for one index `k` at one horizon.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessTerm {
    pub k: usize,
    pub t: f64,
    pub sup_distance: f64,
    pub warp_deviation: f64,
    pub log_slope: f64,
    /// `d(x^k_{λ(ξ(x))}, Δ)` in the explosive branch
    pub cemetery_distance: Option<f64>,
    /// `λ(t) < ξ(x^k)` (open branch) or `λ(ξ(x)) <= ξ(x^k)` (explosive branch)
    pub alive: bool,
    #[serde(skip)]
    pub warp: TimeWarp,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub branch: Branch,
    pub tol: f64,
    pub terms: Vec<WitnessTerm>,
    /// all terms (with `‖log λ'‖`) below `tol` on the tail of the sequence
    pub converges: bool,
    /// same with `‖λ - id‖` in place of `‖log λ'‖`
    pub converges_deviation_form: bool,
}

/// `sup_{s < t}` (or `s <= t` with `closed`) of `d(x_s, y_{λ(s)})`, computed
/// exactly from the breakpoints of both paths and of the warp.
pub(crate) fn warped_sup_distance(x: &StepPath, y: &StepPath, w: &TimeWarp, t: f64, closed: bool, space: &StateSpace) -> f64 {
    let mut marks: Vec<f64> = x.times().to_vec();
    marks.extend(y.times().iter().map(|&r| w.inverse(r)));
    if y.xi().is_finite() {
        marks.push(w.inverse(y.xi()));
    }
    if x.xi().is_finite() {
        marks.push(x.xi());
    }
    marks.retain(|&s| s < t || (closed && s <= t));
    if closed {
        marks.push(t);
    }
    marks
        .iter()
        .map(|&s| space.dist_opt(x.eval_coords(s), y.eval_coords(w.eval(s))))
        .fold(0.0, f64::max)
}

/// Builds warps `λ^k` matching `xs[k]` to `x` and evaluates the terms of the
/// convergence characterisation.
///
/// Each warp comes from the global matching of the two paths (cemetery
/// included) up to a horizon past every tested time.  The explosive branch is
/// used whenever `ξ(x)` is finite, since step paths have finite range.
pub fn convergence_witness(xs: &[StepPath], x: &StepPath, ts: &[f64], tol: f64, space: &StateSpace) -> ConvergenceReport {
    let branch = if x.xi().is_finite() { Branch::Explosive } else { Branch::Open };
    let horizons: Vec<f64> = match branch {
        Branch::Explosive => vec![x.xi()],
        Branch::Open => ts.iter().copied().filter(|&t| t < x.xi()).collect(),
    };
    let reach = horizons.iter().copied().fold(0.0, f64::max) + 1.0;
    let mut terms = Vec::new();
    for (k, xk) in xs.iter().enumerate() {
        let (_, w) = global_rho_with_warp(x, xk, reach, space);
        for &t in &horizons {
            let (sup_distance, cemetery_distance, alive) = match branch {
                Branch::Explosive => {
                    let end = w.eval(t);
                    let sup = warped_sup_distance(x, xk, &w, t, false, space);
                    let cem = space.dist_opt(xk.eval_coords(end), None);
                    (sup, Some(cem), end <= xk.xi())
                }
                Branch::Open => {
                    let sup = warped_sup_distance(x, xk, &w, t, true, space);
                    (sup, None, w.eval(t) < xk.xi())
                }
            };
            terms.push(WitnessTerm {
                k,
                t,
                sup_distance,
                warp_deviation: w.deviation(t),
                log_slope: w.log_slope(t),
                cemetery_distance,
                alive,
                warp: w.clone(),
            });
        }
    }
    let tail_start = xs.len() - xs.len().div_ceil(4).min(xs.len());
    let tail: Vec<&WitnessTerm> = terms.iter().filter(|tm| tm.k >= tail_start).collect();
    let common = |tm: &WitnessTerm| tm.alive && tm.sup_distance < tol && tm.cemetery_distance.is_none_or(|c| c < tol);
    let converges = !tail.is_empty() && tail.iter().all(|tm| common(tm) && tm.log_slope < tol);
    let converges_deviation_form = !tail.is_empty() && tail.iter().all(|tm| common(tm) && tm.warp_deviation < tol);
    ConvergenceReport { branch, tol, terms, converges, converges_deviation_form }
}
