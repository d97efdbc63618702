use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::StepPath;
use crate::timechange::ExprG;

/// Right-hand side `b(t, x)` of a scalar ODE.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OdeField {
    /// `b(t, x) = (1 - t) x^2`
    Intro,
    Zero,
    /// an expression in `t` and `x`
    Expr { expr: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OdeSpec {
    pub field: OdeField,
    pub x0: f64,
    pub t_max: f64,
    pub escape_radius: f64,
    pub base_step: f64,
    pub min_step: f64,
    /// a step may move `x` by at most `growth * max(|x|, 1)`
    pub growth: f64,
}

impl Default for OdeSpec {
    fn default() -> Self {
        Self {
            field: OdeField::Intro,
            x0: 1.0,
            t_max: 4.0,
            escape_radius: 1e6,
            base_step: 1e-3,
            min_step: 1e-14,
            growth: 0.01,
        }
    }
}

impl OdeSpec {
    fn validate(&self) -> Result<()> {
        let ok = self.x0.is_finite()
            && self.t_max > 0.0
            && self.t_max.is_finite()
            && self.escape_radius > self.x0.abs()
            && self.base_step > 0.0
            && self.min_step > 0.0
            && self.min_step <= self.base_step
            && self.growth > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("bad ode spec {self:?}")))
        }
    }
}

/// Explicit Euler iterates as a step path.
///
/// The step is halved while a step would move `x` by more than
/// `growth * max(|x|, 1)`.  Leaving the escape ball (or needing a step below
/// `min_step`) sets `xi` to the current time; otherwise the last iterate is
/// held forever after `t_max`.
pub fn ode_path(spec: &OdeSpec) -> Result<StepPath> {
    spec.validate()?;
    let expr = match &spec.field {
        OdeField::Expr { expr } => Some(ExprG::parse(expr)?),
        _ => None,
    };
    let b = |t: f64, x: f64| -> Result<f64> {
        let v = match &spec.field {
            OdeField::Intro => (1.0 - t) * x * x,
            OdeField::Zero => 0.0,
            OdeField::Expr { .. } => expr.as_ref().expect("parsed").eval_named(&[("t", t), ("x", x)])?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Ode(format!("field is {v} at t = {t}, x = {x}")))
        }
    };
    let mut jumps = vec![(0.0, vec![spec.x0])];
    let (mut t, mut x) = (0.0f64, spec.x0);
    let mut xi = f64::INFINITY;
    while t < spec.t_max {
        let slope = b(t, x)?;
        let mut h = spec.base_step.min(spec.t_max - t);
        while (slope * h).abs() > spec.growth * x.abs().max(1.0) && h >= 2.0 * spec.min_step {
            h *= 0.5;
        }
        if (slope * h).abs() > spec.growth * x.abs().max(1.0) {
            xi = t.max(spec.min_step);
            break;
        }
        let nx = x + h * slope;
        let nt = t + h;
        if nx.abs() > spec.escape_radius {
            xi = nt;
            break;
        }
        if nt <= t {
            return Err(Error::Ode(format!("step underflow at t = {t}")));
        }
        if nx != x {
            jumps.push((nt, vec![nx]));
        }
        t = nt;
        x = nx;
    }
    StepPath::new(1, jumps, xi)
}

/// Closed-form explosion time of `ẋ = (1 - t) x^2` (`+inf` if none).
pub fn intro_blowup_time(x0: f64) -> f64 {
    // 1/x = 1/x0 - t + t^2/2 vanishes at t = 1 -+ sqrt(1 - 2/x0); negative
    // starts drift up to t = 1 and then escape to -inf at the larger root
    if x0 == 0.0 {
        return f64::INFINITY;
    }
    let disc = 1.0 - 2.0 / x0;
    if disc < 0.0 {
        f64::INFINITY
    } else if x0 > 0.0 {
        1.0 - disc.sqrt()
    } else {
        1.0 + disc.sqrt()
    }
}

/// Smallest initial value in `[lo, hi]` (to `tol`) whose Euler path leaves
/// the escape ball, for fields where explosion is monotone in `x0`.
pub fn explosion_threshold(template: &OdeSpec, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let explodes = |x0: f64| -> Result<bool> { Ok(ode_path(&OdeSpec { x0, ..template.clone() })?.xi().is_finite()) };
    if explodes(lo)? || !explodes(hi)? {
        return Err(Error::InvalidArgument(format!("[{lo}, {hi}] does not bracket the explosion threshold")));
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if explodes(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
