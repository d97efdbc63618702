use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ode::{ode_path, OdeSpec};
use crate::error::Result;
use crate::metrics::{global_metric, local_metric, MetricInterval};
use crate::path::StepPath;
use crate::space::{Exhaustion, MetricKind, StateSpace};
use crate::timechange::{time_change, GFunction};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DemoOptions {
    pub metric: MetricKind,
    pub exhaustion: Exhaustion,
    /// terms kept in the metric series
    pub n_terms: usize,
}

impl Default for DemoOptions {
    fn default() -> Self {
        Self { metric: MetricKind::Chordal, exhaustion: Exhaustion::default(), n_terms: 10 }
    }
}

/// Distances between the ODE paths started at two neighbouring `x0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoRow {
    pub x0_a: f64,
    pub x0_b: f64,
    pub xi_a: f64,
    pub xi_b: f64,
    pub local: MetricInterval,
    pub global_before: MetricInterval,
    pub global_after: MetricInterval,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoReport {
    pub rows: Vec<DemoRow>,
}

impl DemoReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "x0_a,x0_b,xi_a,xi_b,local_lower,local_upper,global_before_lower,global_before_upper,global_after_lower,global_after_upper\n",
        );
        for r in &self.rows {
            let cells = [
                r.x0_a,
                r.x0_b,
                r.xi_a,
                r.xi_b,
                r.local.lower,
                r.local.upper,
                r.global_before.lower,
                r.global_before.upper,
                r.global_after.lower,
                r.global_after.upper,
            ];
            let line: Vec<String> = cells.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// The ODE paths for each `x0`, with the template's other parameters.
pub fn ode_family(x0_list: &[f64], template: &OdeSpec) -> Result<Vec<StepPath>> {
    x0_list.iter().map(|&x0| ode_path(&OdeSpec { x0, ..template.clone() })).collect()
}

/// Local and global distances for neighbouring initial values, before and
/// after the time change by `g`.
pub fn continuity_demo(x0_list: &[f64], template: &OdeSpec, g: &GFunction, opts: &DemoOptions) -> Result<DemoReport> {
    let space = StateSpace::new(1, opts.metric)?;
    let paths = ode_family(x0_list, template)?;
    let changed: Vec<StepPath> = paths.iter().map(|p| time_change(g, p)).collect::<Result<_>>()?;
    let rows = (0..paths.len().saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            let (a, b) = (&paths[i], &paths[i + 1]);
            DemoRow {
                x0_a: x0_list[i],
                x0_b: x0_list[i + 1],
                xi_a: a.xi(),
                xi_b: b.xi(),
                local: local_metric(a, b, &opts.exhaustion, opts.n_terms, &space),
                global_before: global_metric(a, b, opts.n_terms, &space),
                global_after: global_metric(&changed[i], &changed[i + 1], opts.n_terms, &space),
            }
        })
        .collect();
    Ok(DemoReport { rows })
}

/// Two initial values `gap` apart on either side of the explosion threshold
/// of `template` (searched in `[lo, hi]` to `tol`).
pub fn straddle_pair(template: &OdeSpec, lo: f64, hi: f64, tol: f64, gap: f64) -> Result<(f64, f64)> {
    if !(gap > 2.0 * tol) {
        return Err(crate::Error::InvalidArgument(format!("gap {gap} must exceed twice the tolerance {tol}")));
    }
    let th = super::ode::explosion_threshold(template, lo, hi, tol)?;
    Ok((th - 0.5 * gap, th + 0.5 * gap))
}
