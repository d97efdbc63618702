//! Shared generators and brute-force references for integration tests.
#![allow(dead_code)]

use locsko::{CompactSet, StateSpace, StepPath};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random step path with at most `max_jumps` jumps after time 0.
pub fn random_path(rng: &mut ChaCha8Rng, max_jumps: usize, dim: usize, scale: f64, horizon: f64, explode_p: f64) -> StepPath {
    let n = rng.random_range(0..=max_jumps);
    let mut times: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..horizon)).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut jumps = vec![(0.0, (0..dim).map(|_| rng.random_range(-scale..scale)).collect::<Vec<f64>>())];
    for t in times {
        if t > 0.0 {
            jumps.push((t, (0..dim).map(|_| rng.random_range(-scale..scale)).collect()));
        }
    }
    let last = jumps.last().unwrap().0;
    let xi = if rng.random::<f64>() < explode_p { last + rng.random_range(0.05..horizon) } else { f64::INFINITY };
    StepPath::new(dim, jumps, xi).unwrap()
}

/// A path sharing most jumps with `x`, nudged in time and space.
pub fn perturb(rng: &mut ChaCha8Rng, x: &StepPath, dt: f64, dv: f64) -> StepPath {
    let mut jumps = Vec::new();
    let mut prev = -1.0;
    for (i, (t, v)) in x.jumps().into_iter().enumerate() {
        let t = if i == 0 { 0.0 } else { (t + rng.random_range(-dt..dt)).max(prev + 1e-3) };
        let v = v.iter().map(|c| c + rng.random_range(-dv..dv)).collect();
        prev = t;
        jumps.push((t, v));
    }
    let xi = if x.xi().is_finite() { (x.xi() + rng.random_range(-dt..dt)).max(prev + 1e-3) } else { f64::INFINITY };
    StepPath::new(x.dim(), jumps, xi).unwrap()
}

fn penalty_pieces(x: &StepPath, i: usize, lo: f64, t: f64, k: &CompactSet, space: &StateSpace, eps: f64) -> Vec<(f64, f64)> {
    // cut times c in [lo, end_i] with d(x_c, K^c) ∧ (t - c)_+ 1{c < ξ} <= eps
    let start = x.times()[i];
    let end = x.segment_end(i);
    let lo = lo.max(start);
    let mut out = Vec::new();
    if lo > end {
        return out;
    }
    let pen = space.dist_to_complement(&x.values()[i], k);
    let open_hi = end;
    if pen <= eps {
        out.push((lo, open_hi));
    } else if (t - eps) <= open_hi {
        out.push(((t - eps).max(lo), open_hi));
    }
    if end.is_finite() {
        let at_end = if i + 1 == x.len() {
            0.0
        } else {
            space.dist_to_complement(&x.values()[i + 1], k).min((t - end).max(0.0))
        };
        if at_end <= eps {
            out.push((end, end));
        }
    }
    out
}

#[derive(Clone, Copy)]
enum Step {
    R,
    U,
    D,
}

/// Exhaustive reference for `ρ̃_{t,K}`: enumerates every staircase of cells a
/// warp can traverse, greedily places the event points of each staircase and
/// tests every admissible cut; the least admissible `eps` is found by bisection.
pub fn rho_tilde_brute(x: &StepPath, y: &StepPath, t: f64, k: &CompactSet, space: &StateSpace) -> f64 {
    let origin = |p: &StepPath| space.dist_to_complement(&p.values()[0], k).min(t);
    let h0 = origin(x).max(origin(y));
    let feasible = |eps: f64| -> bool {
        if h0 <= eps {
            return true;
        }
        let mut steps = Vec::new();
        dfs(x, y, t, k, space, eps, 0, 0, 0.0, 0.0, &mut steps)
    };
    if feasible(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, h0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    x: &StepPath,
    y: &StepPath,
    t: f64,
    k: &CompactSet,
    space: &StateSpace,
    eps: f64,
    i: usize,
    j: usize,
    s_cur: f64,
    r_cur: f64,
    steps: &mut Vec<Step>,
) -> bool {
    if space.dist(&x.values()[i], &y.values()[j]) > eps {
        return false;
    }
    // cut inside the current cell
    let ax = penalty_pieces(x, i, s_cur, t, k, space, eps);
    let by = penalty_pieces(y, j, r_cur, t, k, space, eps);
    for &(a1, b1) in &ax {
        for &(a2, b2) in &by {
            if (a2 - b1).max(a1 - b2).max(0.0) <= eps + 1e-12 {
                return true;
            }
        }
    }
    let xe = x.segment_end(i);
    let ye = y.segment_end(j);
    let (ry0, ry1) = (y.times()[j], ye);
    let (sx0, sx1) = (x.times()[i], xe);
    // x jumps first
    if i + 1 < x.len() && xe >= s_cur {
        let lo = r_cur.max(ry0).max(xe - eps);
        let hi = ry1.min(xe + eps);
        if lo <= hi + 1e-12 {
            steps.push(Step::R);
            if dfs(x, y, t, k, space, eps, i + 1, j, xe, lo, steps) {
                return true;
            }
            steps.pop();
        }
    }
    // y jumps first
    if j + 1 < y.len() && ye >= r_cur {
        let lo = s_cur.max(sx0).max(ye - eps);
        let hi = sx1.min(ye + eps);
        if lo <= hi + 1e-12 {
            steps.push(Step::U);
            if dfs(x, y, t, k, space, eps, i, j + 1, lo, ye, steps) {
                return true;
            }
            steps.pop();
        }
    }
    // simultaneous jumps
    if i + 1 < x.len() && j + 1 < y.len() && xe >= s_cur && ye >= r_cur && (xe - ye).abs() <= eps + 1e-12 {
        steps.push(Step::D);
        if dfs(x, y, t, k, space, eps, i + 1, j + 1, xe, ye, steps) {
            return true;
        }
        steps.pop();
    }
    false
}

/// `sup_{a in K} d(a, R)` estimated from below by sampling `K` (a ball).
pub fn net_radius_lower(k: &CompactSet, r: &[Vec<f64>], space: &StateSpace, rng: &mut ChaCha8Rng, n: usize) -> f64 {
    let CompactSet::Ball { center, radius } = k else { panic!("ball expected") };
    let d = center.len();
    let mut best: f64 = 0.0;
    for _ in 0..n {
        let a: Vec<f64> = loop {
            let p: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            if p.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
                break p.iter().zip(center).map(|(v, c)| c + radius * v).collect();
            }
        };
        let m = r.iter().map(|q| space.dist(&a, q)).fold(f64::INFINITY, f64::min);
        best = best.max(m);
    }
    best
}
