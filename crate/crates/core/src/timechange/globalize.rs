use serde::Serialize;

use super::gfunc::GFunction;
use super::time_change;
use crate::error::Result;
use crate::metrics::{global_metric, local_metric, MetricInterval};
use crate::path::StepPath;
use crate::space::{Exhaustion, StateSpace};

/// Facts about `g·x` relevant to its two readings, in `D_loc(S)` and `D(S^Δ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalizeReport {
    /// explosion time of `g·x` (`None` for `+inf`)
    pub explosion_time: Option<f64>,
    /// `(g·x)_{ξ−}` when the explosion time is finite
    pub left_limit_at_explosion: Option<Vec<f64>>,
    /// `g·x` is a valid element of `D_loc(S)`
    pub in_local_space: bool,
    /// `g·x` sits at Δ from its explosion time on, with a left limit there
    pub in_global_space: bool,
}

pub fn globalize(x: &StepPath, g: &GFunction) -> Result<(StepPath, GlobalizeReport)> {
    let y = time_change(g, x)?;
    let xi = y.xi();
    let left = if xi.is_finite() { y.left_limit_coords(xi).map(<[f64]>::to_vec) } else { None };
    let report = GlobalizeReport {
        explosion_time: xi.is_finite().then_some(xi),
        in_local_space: true,
        in_global_space: !xi.is_finite() || (left.is_some() && y.eval_coords(xi).is_none()),
        left_limit_at_explosion: left,
    };
    Ok((y, report))
}

/// One line of [`compare_sequence`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub k: usize,
    pub local: MetricInterval,
    pub global_before: MetricInterval,
    pub global_after: MetricInterval,
}

/// Local distance `d(x^k, x)`, and global distances on `S^Δ` before and
/// after the time change by `g`.
pub fn compare_sequence(
    xs: &[StepPath],
    x: &StepPath,
    g: &GFunction,
    exhaustion: &Exhaustion,
    n_terms: usize,
    space: &StateSpace,
) -> Result<Vec<ComparisonRow>> {
    let gx = time_change(g, x)?;
    xs.iter()
        .enumerate()
        .map(|(k, xk)| {
            let gxk = time_change(g, xk)?;
            Ok(ComparisonRow {
                k,
                local: local_metric(xk, x, exhaustion, n_terms, space),
                global_before: global_metric(xk, x, n_terms, space),
                global_after: global_metric(&gxk, &gx, n_terms, space),
            })
        })
        .collect()
}
