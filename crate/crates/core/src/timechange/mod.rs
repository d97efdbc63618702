//! Time changes `g·x` of step paths by a rate function `g`.

mod clock;
mod gfunc;
mod globalize;
mod regularize;

pub use clock::Clock;
pub use gfunc::{ExprG, GFunction, GSpec};
pub use globalize::{compare_sequence, globalize, ComparisonRow, GlobalizeReport};
pub use regularize::{build_regularizing_g, GProfile, RegularizeOptions, Region};

use crate::error::Result;
use crate::path::StepPath;

/// `A^g` and `τ^g` of `x`.
pub fn clock(g: &GFunction, x: &StepPath) -> Result<Clock> {
    Clock::new(g, x)
}

/// `g·x`: segment `i` is run at speed `g(v_i)`.
///
/// If a segment with `g = 0` is reached at index `z`, the output holds `v_z`
/// forever from `A(t_z)` on.  Otherwise it explodes at `A_ξ` (never when this
/// is infinite).  On step paths the left limit at `τ_∞` always has `g > 0`,
/// so the absorbing branch at `X_{τ_∞−}` is never taken.
pub fn time_change(g: &GFunction, x: &StepPath) -> Result<StepPath> {
    let c = Clock::new(g, x)?;
    let mut jumps: Vec<(f64, Vec<f64>)> = Vec::with_capacity(c.starts.len() + 1);
    let mut push = |t: f64, v: &[f64]| match jumps.last_mut() {
        // a segment shortened below float resolution
        Some(last) if last.0 >= t => last.1 = v.to_vec(),
        _ => jumps.push((t, v.to_vec())),
    };
    for (i, &a) in c.a_values.iter().enumerate() {
        push(a, &x.values()[i]);
    }
    let xi = match c.zero_hit {
        Some(z) => {
            push(c.a_tau_inf, &x.values()[z]);
            f64::INFINITY
        }
        None => c.a_tau_inf,
    };
    if jumps.last().is_some_and(|(t, _)| *t >= xi) {
        jumps.pop();
    }
    StepPath::new(x.dim(), jumps, xi)
}

/// Membership of `(g, x)` in the continuity set of the time change.
///
/// The first condition asks the integral of `1/g` to blow up right after
/// `τ_∞ < ξ`; on a step path this happens exactly when a segment of positive
/// length with `g = 0` starts at `τ_∞`.  The second asks that a left limit at
/// `τ_∞` lying in `{g = 0}` (with finite clock) equals `x_{τ_∞}`.
pub fn in_continuity_set(g: &GFunction, x: &StepPath) -> Result<bool> {
    let c = Clock::new(g, x)?;
    let first = match c.zero_hit {
        Some(z) => x.segment_end(z) > x.times()[z] && g.eval(&x.values()[z])? == 0.0,
        None => true,
    };
    let second = if c.hits_infinity || c.tau_inf == 0.0 {
        true
    } else {
        match x.left_limit_coords(c.tau_inf) {
            Some(l) if g.eval(l)? == 0.0 => x.eval_coords(c.tau_inf) == Some(l),
            _ => true,
        }
    };
    Ok(first && second)
}

/// Whether `g1·(g2·x)` and `(g1 g2)·x` agree: values exactly, times and
/// explosion times to `1e-12` relative.
pub fn compose_check(g1: &GFunction, g2: &GFunction, x: &StepPath) -> Result<bool> {
    let lhs = time_change(g1, &time_change(g2, x)?)?;
    let rhs = time_change(&GFunction::product(g1.clone(), g2.clone()), x)?;
    Ok(paths_agree(&lhs, &rhs, 1e-12))
}

pub(crate) fn paths_agree(a: &StepPath, b: &StepPath, rel: f64) -> bool {
    let close = |s: f64, t: f64| s == t || (s - t).abs() <= rel * s.abs().max(t.abs());
    a.len() == b.len()
        && a.values() == b.values()
        && a.times().iter().zip(b.times()).all(|(s, t)| close(*s, *t))
        && close(a.xi(), b.xi())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(j: &[(f64, f64)], xi: f64) -> StepPath {
        StepPath::scalar(j, xi).unwrap()
    }

    #[test]
    fn uniform_speed_up() {
        let x = scalar(&[(0.0, 1.0), (1.0, -2.0), (2.0, 4.0)], f64::INFINITY);
        let y = time_change(&GFunction::Constant(2.0), &x).unwrap();
        assert_eq!(y, scalar(&[(0.0, 1.0), (0.5, -2.0), (1.0, 4.0)], f64::INFINITY));
    }

    #[test]
    fn explosion_time_is_clock_at_xi() {
        let x = scalar(&[(0.0, 1.0), (1.0, 2.0)], 2.0);
        let y = time_change(&GFunction::Coordinate(0), &x).unwrap();
        assert_eq!(y, scalar(&[(0.0, 1.0), (1.0, 2.0)], 1.5));
        assert_eq!(time_change(&GFunction::Constant(1.0), &x).unwrap(), x);
    }

    #[test]
    fn absorption_in_zero_set() {
        let x = scalar(&[(0.0, 1.0), (1.0, 0.0), (3.0, 5.0)], 4.0);
        let y = time_change(&GFunction::Coordinate(0), &x).unwrap();
        assert_eq!(y, scalar(&[(0.0, 1.0), (1.0, 0.0)], f64::INFINITY));
        assert!(in_continuity_set(&GFunction::Coordinate(0), &x).unwrap());
        let z = scalar(&[(0.0, 0.0), (1.0, 1.0)], 2.0);
        assert_eq!(time_change(&GFunction::Coordinate(0), &z).unwrap(), scalar(&[(0.0, 0.0)], f64::INFINITY));
    }

    #[test]
    fn composition_with_absorbing_inner_rate() {
        let x = scalar(&[(0.0, 2.0), (0.7, 1.0), (1.5, 0.0), (2.0, 3.0)], f64::INFINITY);
        let g1 = GFunction::custom(|a| 1.0 + a[0] * a[0]);
        assert!(compose_check(&g1, &GFunction::Coordinate(0), &x).unwrap());
        assert!(compose_check(&GFunction::Coordinate(0), &g1, &x).unwrap());
    }

    #[test]
    fn negative_rate_is_an_error() {
        let x = scalar(&[(0.0, 1.0), (1.0, -1.0)], f64::INFINITY);
        assert!(time_change(&GFunction::Coordinate(0), &x).is_err());
    }
}
