//! The moduli `ω′`, `ω″` and `ω` on step paths.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::path::StepPath;
use crate::space::{CompactSet, StateSpace};

/// `ω′_{t,K,x}(δ)`: the least oscillation over subdivisions
/// `0 = t_0 < .. < t_N <= ξ` with gaps `> δ` that leave `[0,t] x K` at `t_N`.
///
/// Returns `+inf` when no such subdivision exists.
pub fn omega_prime(x: &StepPath, t: f64, k: &CompactSet, delta: f64, space: &StateSpace) -> f64 {
    let m = x.len();
    let vals = x.values();
    if !k.contains(&vals[0]) {
        return 0.0;
    }
    let ends: Vec<f64> = (0..m).map(|i| x.segment_end(i)).collect();
    let ctx = Dp { x, t, k, delta, space, ends };
    if !ctx.feasible(f64::INFINITY) {
        return f64::INFINITY;
    }
    if ctx.feasible(0.0) {
        return 0.0;
    }
    if m <= 300 {
        let mut cands: Vec<f64> = Vec::with_capacity(m * (m - 1) / 2);
        for i in 0..m {
            for j in i + 1..m {
                cands.push(space.dist(&vals[i], &vals[j]));
            }
        }
        cands.sort_by(f64::total_cmp);
        cands.dedup();
        let (mut lo, mut hi) = (0usize, cands.len() - 1);
        // invariant: cands[hi] feasible
        while lo < hi {
            let mid = (lo + hi) / 2;
            if ctx.feasible(cands[mid]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        cands[hi]
    } else {
        let (mut lo, mut hi) = (0.0, 2.0f64.max(max_pair_distance(vals, space)));
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if ctx.feasible(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Whether `ω′_{t,K,x}(δ) <= c`, with a single feasibility pass.
pub fn omega_prime_at_most(x: &StepPath, t: f64, k: &CompactSet, delta: f64, c: f64, space: &StateSpace) -> bool {
    if !k.contains(&x.values()[0]) {
        return c >= 0.0;
    }
    let ends: Vec<f64> = (0..x.len()).map(|i| x.segment_end(i)).collect();
    Dp { x, t, k, delta, space, ends }.feasible(c)
}

fn max_pair_distance(vals: &[Vec<f64>], space: &StateSpace) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            m = m.max(space.dist(&vals[i], &vals[j]));
        }
    }
    m
}

struct Dp<'a> {
    x: &'a StepPath,
    t: f64,
    k: &'a CompactSet,
    delta: f64,
    space: &'a StateSpace,
    ends: Vec<f64>,
}

impl Dp<'_> {
    fn feasible(&self, c: f64) -> bool {
        self.run(c, None).is_some()
    }

    /// Is there an admissible subdivision whose intervals all have diameter `<= c`?
    ///
    /// Per segment `q` we keep the earliest breakpoint reachable at its jump
    /// time only (`e_pt`) and the earliest one from which a whole interval of
    /// later breakpoints is reachable (`e_sp`).  With `eta`, breakpoints are
    /// placed at `t_i + δ + eta` instead of the open bound, and the resulting
    /// subdivision is returned.
    fn run(&self, c: f64, eta: Option<f64>) -> Option<Vec<f64>> {
        let m = self.x.len();
        let starts = self.x.times();
        let vals = self.x.values();
        let xi = self.x.xi();
        let h = eta.unwrap_or(0.0);
        let mut e_pt = vec![f64::INFINITY; m];
        let mut e_sp = vec![f64::INFINITY; m];
        let mut par_pt = vec![usize::MAX; m];
        let mut par_sp = vec![usize::MAX; m];
        e_pt[0] = 0.0;
        // window end: largest q with diam(vals[p..=q]) <= c
        let mut q_end = 0usize;
        let mut filled = 0usize;
        for p in 0..m {
            if q_end < p {
                q_end = p;
            }
            while q_end + 1 < m && (p..=q_end).all(|i| self.space.dist(&vals[i], &vals[q_end + 1]) <= c) {
                q_end += 1;
            }
            let e = e_pt[p].min(e_sp[p]);
            if !e.is_finite() {
                continue;
            }
            let lower = e + self.delta + h;
            let first = p + self.ends[p..=q_end].partition_point(|&end| end <= lower);
            if first <= q_end {
                let b = lower.max(starts[first]);
                if b < e_sp[first] {
                    e_sp[first] = b;
                    par_sp[first] = p;
                }
                for q in filled.max(first + 1)..=q_end {
                    if starts[q] < e_sp[q] {
                        e_sp[q] = starts[q];
                        par_sp[q] = p;
                    }
                }
                filled = filled.max(q_end);
            }
            let nxt = q_end + 1;
            if nxt < m && (starts[nxt] > lower || (eta.is_some() && starts[nxt] >= lower)) && starts[nxt] < e_pt[nxt] {
                e_pt[nxt] = starts[nxt];
                par_pt[nxt] = p;
            }

            // can the subdivision stop inside segment p?
            let spread = e_sp[p].is_finite();
            let last_bp = if !self.k.contains(&vals[p]) {
                Some((e, e_sp[p] < e_pt[p]))
            } else if e_pt[p] > self.t && e_pt[p].is_finite() {
                Some((e_pt[p], false))
            } else if spread && self.ends[p] > self.t {
                let bump = if h > 0.0 { h } else { 1e-12 * (1.0 + self.t) };
                let b = e_sp[p].max(self.t + bump.min(0.5 * (self.ends[p] - self.t)));
                Some((b, true))
            } else if spread && p + 1 == m && xi.is_finite() {
                Some((xi, true))
            } else {
                None
            };
            if let Some((b, via_spread)) = last_bp {
                if eta.is_none() {
                    return Some(Vec::new());
                }
                let mut out = vec![b];
                let (mut q, mut sp) = (p, via_spread);
                loop {
                    let parent = if sp { par_sp[q] } else { par_pt[q] };
                    if parent == usize::MAX {
                        break;
                    }
                    let pe = e_pt[parent].min(e_sp[parent]);
                    out.push(pe);
                    sp = e_sp[parent] < e_pt[parent];
                    q = parent;
                }
                if *out.last().unwrap() != 0.0 {
                    out.push(0.0);
                }
                out.reverse();
                out.dedup();
                return Some(out);
            }
        }
        None
    }
}

/// `ω′` together with a subdivision attaining it (breakpoints spaced by at
/// least `δ + eta` for a tiny `eta`).  `None` when `ω′` is infinite.
pub fn omega_prime_subdivision(
    x: &StepPath,
    t: f64,
    k: &CompactSet,
    delta: f64,
    space: &StateSpace,
) -> Option<(f64, Vec<f64>)> {
    let value = omega_prime(x, t, k, delta, space);
    if !value.is_finite() {
        return None;
    }
    if value == 0.0 && !k.contains(&x.values()[0]) {
        return Some((0.0, vec![0.0]));
    }
    let ends: Vec<f64> = (0..x.len()).map(|i| x.segment_end(i)).collect();
    let ctx = Dp { x, t, k, delta, space, ends };
    for eta in [1e-9, 1e-11, 1e-13] {
        if let Some(sub) = ctx.run(value, Some(eta * (1.0 + delta))) {
            return Some((value, sub));
        }
    }
    None
}

/// Independent randomized search over subdivisions; an upper bound on `ω′`.
///
/// Breakpoints are drawn from jump times, `t_i + δ + η`, `t + η`, `ξ` and
/// uniform times; the deterministic candidates are additionally explored
/// exhaustively (memoized on the current breakpoint).
pub fn omega_prime_oracle(
    x: &StepPath,
    t: f64,
    k: &CompactSet,
    delta: f64,
    space: &StateSpace,
    n_restarts: usize,
    seed: u64,
) -> f64 {
    let x0 = x.eval_coords(0.0).unwrap();
    if !k.contains(x0) {
        return 0.0;
    }
    let eta = 1e-12 * (1.0 + delta + t);
    let o = Oracle { x, t, k, delta, eta, space };
    let mut memo = HashMap::new();
    let mut best = o.exhaustive(0.0, &mut memo, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_restarts {
        best = best.min(o.random_descent(&mut rng));
    }
    best
}

struct Oracle<'a> {
    x: &'a StepPath,
    t: f64,
    k: &'a CompactSet,
    delta: f64,
    eta: f64,
    space: &'a StateSpace,
}

impl Oracle<'_> {
    /// Largest distance between values taken on `[a, b)`.
    fn oscillation(&self, a: f64, b: f64) -> f64 {
        let seen: Vec<&[f64]> = self
            .x
            .times()
            .iter()
            .enumerate()
            .filter(|&(i, &s)| s < b && self.x.segment_end(i) > a)
            .map(|(i, _)| self.x.values()[i].as_slice())
            .collect();
        let mut m: f64 = 0.0;
        for i in 0..seen.len() {
            for j in i + 1..seen.len() {
                m = m.max(self.space.dist(seen[i], seen[j]));
            }
        }
        m
    }

    fn terminal(&self, s: f64) -> bool {
        let xi = self.x.xi();
        s > self.t || s >= xi || !self.k.contains_opt(self.x.eval_coords(s))
    }

    fn candidates(&self, tau: f64) -> Vec<f64> {
        let xi = self.x.xi();
        let floor = tau + self.delta;
        let mut c: Vec<f64> = self.x.times().iter().copied().filter(|&s| s > floor).collect();
        c.push(floor + self.eta);
        if xi.is_finite() {
            c.push(xi);
        }
        c.push(self.t + self.eta);
        c.retain(|&s| s > floor && s <= xi);
        c.sort_by(f64::total_cmp);
        c.dedup();
        c
    }

    fn exhaustive(&self, tau: f64, memo: &mut HashMap<u64, f64>, depth: usize) -> f64 {
        if let Some(&v) = memo.get(&tau.to_bits()) {
            return v;
        }
        let mut best = f64::INFINITY;
        if depth < 4096 {
            for s in self.candidates(tau) {
                let osc = self.oscillation(tau, s);
                if osc >= best {
                    continue;
                }
                let rest = if self.terminal(s) { 0.0 } else { self.exhaustive(s, memo, depth + 1) };
                best = best.min(osc.max(rest));
            }
        }
        memo.insert(tau.to_bits(), best);
        best
    }

    fn random_descent(&self, rng: &mut ChaCha8Rng) -> f64 {
        let xi = self.x.xi();
        let span = self.t + self.delta + 1.0;
        let mut tau = 0.0;
        let mut osc: f64 = 0.0;
        for _ in 0..10_000 {
            let mut c = self.candidates(tau);
            let floor = tau + self.delta;
            let u = floor + rng.random::<f64>() * span;
            if u <= xi && u > floor {
                c.push(u);
            }
            if c.is_empty() {
                return f64::INFINITY;
            }
            // lean towards early breakpoints, which keep more options open
            let idx = if rng.random::<f64>() < 0.5 { 0 } else { rng.random_range(0..c.len()) };
            let s = c[idx];
            osc = osc.max(self.oscillation(tau, s));
            if self.terminal(s) {
                return osc;
            }
            tau = s;
        }
        f64::INFINITY
    }
}

/// `ω″_x(δ)`: sup of `d(x_{s1}, x_{s2}) ∧ d(x_{s2}, x_{s3})` over `s1 <= s2 <= s3 <= s1 + δ < ξ`.
pub fn omega_double_prime(x: &StepPath, delta: f64, space: &StateSpace) -> f64 {
    let m = x.len();
    let vals = x.values();
    let mut best: f64 = 0.0;
    for i in 0..m {
        let reach = x.segment_end(i) + delta;
        for kk in i + 2..m {
            if x.times()[kk] >= reach {
                break;
            }
            for j in i + 1..kk {
                let v = space.dist(&vals[i], &vals[j]).min(space.dist(&vals[j], &vals[kk]));
                best = best.max(v);
            }
        }
    }
    best
}

/// `ω_x(δ)`: sup of `d(x_{s1}, x_{s2})` over `s1 <= s2 <= s1 + δ < ξ`.
pub fn omega_plain(x: &StepPath, delta: f64, space: &StateSpace) -> f64 {
    let m = x.len();
    let vals = x.values();
    let mut best: f64 = 0.0;
    for i in 0..m {
        let reach = x.segment_end(i) + delta;
        for kk in i + 1..m {
            if x.times()[kk] >= reach {
                break;
            }
            best = best.max(space.dist(&vals[i], &vals[kk]));
        }
    }
    best
}
