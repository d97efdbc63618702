use super::modulus::omega_prime_subdivision;
use crate::error::{Error, Result};
use crate::path::StepPath;
use crate::space::{CompactSet, StateSpace};

/// Closest point of `r` to `a`.
pub fn nearest_in<'a>(a: &[f64], r: &'a [Vec<f64>], space: &StateSpace) -> &'a [f64] {
    r.iter()
        .min_by(|p, q| space.dist(a, p).total_cmp(&space.dist(a, q)))
        .expect("net is nonempty")
}

/// Approximates `x` by a path that is constant on each `[kδ, (k+1)δ)` with
/// values in `r`, and that dies no later than `Nδ`.
///
/// The breakpoints of an optimal subdivision for `ω′_{Nδ,K,x}(δ)` are snapped
/// down to the grid, the final one (the first time `x` reaches `Nδ` or leaves
/// the interior of `K`) is snapped up, and values are replaced by nearest net
/// points.
pub fn approximate_by_net(
    x: &StepPath,
    r: &[Vec<f64>],
    delta: f64,
    n: usize,
    k: &CompactSet,
    space: &StateSpace,
) -> Result<StepPath> {
    if r.is_empty() || !(delta > 0.0) || n == 0 {
        return Err(Error::InvalidArgument("net needs R nonempty, δ > 0 and N >= 1".into()));
    }
    if r.iter().any(|p| p.len() != x.dim()) {
        return Err(Error::InvalidArgument("net points have the wrong dimension".into()));
    }
    let horizon = n as f64 * delta;
    let snap = |a: &[f64]| nearest_in(a, r, space).to_vec();
    // first time s >= Nδ or d(x_s, K^c) = 0
    let t_star = x
        .times()
        .iter()
        .zip(x.values())
        .find(|(_, v)| !k.in_interior(v))
        .map(|(t, _)| *t)
        .unwrap_or(f64::INFINITY)
        .min(x.xi())
        .min(horizon);
    let end = ((t_star / delta).ceil() * delta).max(delta).min(horizon);
    let sub = match omega_prime_subdivision(x, horizon, k, delta, space) {
        Some((_, sub)) => sub,
        // no admissible subdivision: any member of the net will do
        None => vec![0.0],
    };
    let mut jumps: Vec<(f64, Vec<f64>)> = Vec::new();
    for &ti in sub.iter().take_while(|&&ti| ti < t_star) {
        let g = (ti / delta).floor() * delta;
        if g >= end {
            break;
        }
        let v = snap(x.eval_coords(ti).expect("breakpoint before explosion"));
        match jumps.last_mut() {
            Some(last) if last.0 == g => last.1 = v,
            _ => jumps.push((g, v)),
        }
    }
    if jumps.is_empty() {
        jumps.push((0.0, snap(&x.values()[0])));
    }
    Ok(StepPath::new(x.dim(), jumps, end)?.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::rho_tilde;
    use crate::space::MetricKind;

    #[test]
    fn constant_path_bound() {
        let s = StateSpace::new(1, MetricKind::EuclideanTruncated).unwrap();
        let x = StepPath::scalar(&[(0.0, 0.0)], f64::INFINITY).unwrap();
        let k = CompactSet::centered_ball(1, 5.0);
        let r = vec![vec![0.2]];
        let (delta, n) = (0.1, 20);
        let y = approximate_by_net(&x, &r, delta, n, &k, &s).unwrap();
        let d = rho_tilde(&x, &y, n as f64 * delta, &k, &s);
        assert!(d <= 0.2f64.max(delta) + 1e-7, "{d}");
    }

    #[test]
    fn member_of_net_is_reproduced() {
        let s = StateSpace::new(1, MetricKind::EuclideanTruncated).unwrap();
        let x = StepPath::scalar(&[(0.0, 0.0), (0.5, 1.0)], 1.5).unwrap();
        let k = CompactSet::centered_ball(1, 5.0);
        let r = vec![vec![0.0], vec![1.0]];
        let y = approximate_by_net(&x, &r, 0.25, 8, &k, &s).unwrap();
        assert_eq!(rho_tilde(&x, &y, 2.0, &k, &s), 0.0);
    }
}
