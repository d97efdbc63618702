//! Moduli, Skorokhod-type pseudo-metrics and convergence witnesses.

mod convergence;
mod matching;
mod modulus;
mod net;
mod warp;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

pub use convergence::{convergence_witness, Branch, ConvergenceReport, WitnessTerm};
pub use modulus::{
    omega_double_prime, omega_plain, omega_prime, omega_prime_at_most, omega_prime_oracle, omega_prime_subdivision,
};
pub use net::{approximate_by_net, nearest_in};
pub use warp::TimeWarp;

use crate::path::StepPath;
use crate::space::{CompactSet, Exhaustion, StateSpace};
use matching::{solve, solve_capped, Problem, Track};
use rayon::prelude::*;

/// The pair in a fixed order.  The feasibility tests clip polygons with a
/// small tolerance, so evaluating `(x, y)` and `(y, x)` can differ in the
/// last digits; a fixed order makes every distance exactly symmetric.
fn ordered<'p>(x: &'p StepPath, y: &'p StepPath) -> (&'p StepPath, &'p StepPath, bool) {
    let floats = |a: &[f64], b: &[f64]| {
        a.iter().zip(b).map(|(u, v)| u.total_cmp(v)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    };
    let order = y
        .dim()
        .cmp(&x.dim())
        .then(y.len().cmp(&x.len()))
        .then_with(|| floats(y.times(), x.times()))
        .then_with(|| floats(&y.values().concat(), &x.values().concat()))
        .then(y.xi().total_cmp(&x.xi()));
    if order.is_lt() {
        (y, x, true)
    } else {
        (x, y, false)
    }
}

/// `ρ̃_{t,K}(x, y)`: warps only pay through `‖λ - id‖`.
pub fn rho_tilde(x: &StepPath, y: &StepPath, t: f64, k: &CompactSet, space: &StateSpace) -> f64 {
    let (x, y, _) = ordered(x, y);
    solve(&Problem::new(Track::local(x), Track::local(y), t, k, space, false))
}

/// `ρ_{t,K}(x, y)`: warps additionally pay through `‖log λ'‖`.
pub fn rho(x: &StepPath, y: &StepPath, t: f64, k: &CompactSet, space: &StateSpace) -> f64 {
    let (x, y, _) = ordered(x, y);
    solve(&Problem::new(Track::local(x), Track::local(y), t, k, space, true))
}

/// `ρ_{t,K}` together with a piecewise-linear warp `λ` from `x` to `y`
/// attaining it (up to the search tolerance).  The warp is defined up to the
/// cut time and continues with slope 1 afterwards.
pub fn rho_with_warp(x: &StepPath, y: &StepPath, t: f64, k: &CompactSet, space: &StateSpace) -> (f64, TimeWarp) {
    let (a, b, swapped) = ordered(x, y);
    witness(&Problem::new(Track::local(a), Track::local(b), t, k, space, true), swapped)
}

/// Same as [`rho_with_warp`] on `S ∪ {Δ}`: both paths are extended by the
/// cemetery after their explosion time and no compact localisation is used.
pub fn global_rho_with_warp(x: &StepPath, y: &StepPath, t: f64, space: &StateSpace) -> (f64, TimeWarp) {
    let (a, b, swapped) = ordered(x, y);
    witness(&Problem::new(Track::global(a), Track::global(b), t, &CompactSet::Everything, space, true), swapped)
}

/// `ρ_t` for the global Skorokhod topology on `D(S^Δ)`.
pub fn global_rho(x: &StepPath, y: &StepPath, t: f64, space: &StateSpace) -> f64 {
    let (x, y, _) = ordered(x, y);
    solve(&Problem::new(Track::global(x), Track::global(y), t, &CompactSet::Everything, space, true))
}

fn witness(pb: &Problem, swapped: bool) -> (f64, TimeWarp) {
    let v = solve(pb);
    let cert = pb.feasible(v, true).or_else(|| pb.feasible(v + 1e-10, true));
    let mut pts = cert.map(|c| c.points).unwrap_or_else(|| vec![(0.0, 0.0)]);
    if swapped {
        // the certificate warps y onto x
        pts = pts.into_iter().map(|(u, l)| (l, u)).collect();
    }
    let mut clean: Vec<(f64, f64)> = vec![(0.0, 0.0)];
    for p in pts {
        let last = *clean.last().unwrap();
        if p.0 > last.0 + 1e-13 && p.1 > last.1 + 1e-13 {
            clean.push(p);
        }
    }
    (v, TimeWarp::new(clean).expect("cleaned breakpoints increase"))
}

/// Bracket `[lower, upper]` for a metric defined by a convergent series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricInterval {
    pub lower: f64,
    pub upper: f64,
}

/// `Σ_n 2^{-n} (ρ_{n,K_n}(x, y) ∧ 1)` truncated after `n_terms` terms.
pub fn local_metric(x: &StepPath, y: &StepPath, exhaustion: &Exhaustion, n_terms: usize, space: &StateSpace) -> MetricInterval {
    let (x, y, _) = ordered(x, y);
    series(n_terms, |n| {
        let k = exhaustion.k(space.dim, n);
        solve_capped(&Problem::new(Track::local(x), Track::local(y), n as f64, &k, space, true), 1.0)
    })
}

/// `Σ_n 2^{-n} (ρ_n(x, y) ∧ 1)` for the global topology of `D(S^Δ)`.
pub fn global_metric(x: &StepPath, y: &StepPath, n_terms: usize, space: &StateSpace) -> MetricInterval {
    let (x, y, _) = ordered(x, y);
    series(n_terms, |n| {
        let pb = Problem::new(Track::global(x), Track::global(y), n as f64, &CompactSet::Everything, space, true);
        solve_capped(&pb, 1.0)
    })
}

/// Terms are evaluated in parallel and summed in index order.
fn series(n_terms: usize, term: impl Fn(usize) -> f64 + Sync) -> MetricInterval {
    let n_terms = n_terms.max(1);
    let terms: Vec<f64> = (0..n_terms).into_par_iter().map(|n| term(n).min(1.0)).collect();
    let lower: f64 = terms.iter().enumerate().map(|(n, v)| 0.5f64.powi(n as i32) * v).sum();
    MetricInterval { lower, upper: lower + 0.5f64.powi(n_terms as i32 - 1) }
}
