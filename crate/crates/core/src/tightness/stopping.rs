use crate::path::StepPath;
use crate::space::{CompactSet, StateSpace};

/// The hitting times `τ_0 = 0`, `τ_{n+1} = inf{s > τ_n : d(x_{τ_n}, x_s) ∨
/// d(x_{τ_n}, x_{s−}) >= ε} ∧ (t + 2) ∧ τ^U`, listed until they become
/// stationary.  `U` is the interior of the given set.
pub fn hitting_stopping_times(x: &StepPath, eps: f64, t: f64, u: &CompactSet, space: &StateSpace) -> Vec<f64> {
    let cap = (t + 2.0).min(x.exit_time(u));
    let mut out = vec![0.0f64.min(cap)];
    let mut cur = 0.0;
    while cur < cap {
        let base = x.eval_coords(cur);
        // on a step path both x_s and x_{s-} can only move away at a jump or at ξ
        let next = x
            .times()
            .iter()
            .zip(x.values())
            .skip_while(|(s, _)| **s <= cur)
            .find(|(_, v)| space.dist_opt(base, Some(v)) >= eps)
            .map(|(s, _)| *s)
            .unwrap_or_else(|| if space.dist_opt(base, None) >= eps { x.xi() } else { f64::INFINITY });
        cur = next.min(cap);
        out.push(cur);
    }
    out
}

/// The functional `R(τ_1, τ_2, τ_3)` of the tightness criterion.
pub fn r_functional(x: &StepPath, t1: f64, t2: f64, t3: f64, space: &StateSpace) -> f64 {
    let xi = x.xi();
    let at = |s: f64| x.eval_coords(s);
    let d = |a: Option<&[f64]>, b: Option<&[f64]>| space.dist_opt(a, b);
    if t1 >= xi {
        return 0.0;
    }
    if t1 == 0.0 {
        return if t2 >= xi { f64::INFINITY } else { d(at(t1), at(t2)) };
    }
    if t2 == t3 {
        return 0.0;
    }
    let first = if t1 < t2 { d(at(t1), at(t2)) } else { d(x.left_limit_coords(t2), at(t2)) };
    if t3 < xi {
        first.min(d(at(t2), at(t3)))
    } else {
        first
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MetricKind;

    fn sp() -> StateSpace {
        StateSpace::new(1, MetricKind::EuclideanTruncated).unwrap()
    }

    #[test]
    fn examples() {
        let u = CompactSet::centered_ball(1, 10.0);
        let c = StepPath::scalar(&[(0.0, 1.0)], f64::INFINITY).unwrap();
        assert_eq!(hitting_stopping_times(&c, 0.5, 3.0, &u, &sp()), vec![0.0, 5.0]);
        let j = StepPath::scalar(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)], f64::INFINITY).unwrap();
        assert_eq!(hitting_stopping_times(&j, 0.5, 3.0, &u, &sp()), vec![0.0, 1.0, 2.0, 5.0]);
        let small = StepPath::scalar(&[(0.0, 0.0), (1.0, 0.1), (2.0, -0.1)], f64::INFINITY).unwrap();
        assert_eq!(hitting_stopping_times(&small, 0.5, 3.0, &u, &sp()), vec![0.0, 5.0]);
        let leave = StepPath::scalar(&[(0.0, 0.0), (1.5, 20.0)], f64::INFINITY).unwrap();
        assert_eq!(hitting_stopping_times(&leave, 0.5, 3.0, &u, &sp()), vec![0.0, 1.5]);
    }

    #[test]
    fn r_cases() {
        let s = sp();
        let x = StepPath::scalar(&[(0.0, 0.0), (1.0, 0.4), (2.0, 1.0)], 3.0).unwrap();
        assert_eq!(r_functional(&x, 3.0, 3.0, 3.0, &s), 0.0);
        assert_eq!(r_functional(&x, 0.0, 3.0, 3.0, &s), f64::INFINITY);
        assert_eq!(r_functional(&x, 0.0, 1.0, 2.5, &s), 0.4);
        assert_eq!(r_functional(&x, 0.5, 1.0, 1.0, &s), 0.0);
        assert!((r_functional(&x, 0.5, 1.5, 2.5, &s) - 0.4).abs() < 1e-15);
        assert_eq!(r_functional(&x, 2.0, 2.0, 2.5, &s), 0.0);
        assert!((r_functional(&x, 1.5, 2.0, 3.0, &s) - 0.6).abs() < 1e-15);
        assert!((r_functional(&x, 2.0, 2.0, 3.0, &s) - 0.6).abs() < 1e-15);
    }
}
