use crate::error::{Error, Result};

/// Piecewise-linear increasing bijection of `[0, inf)`, extended with slope 1
/// after its last breakpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeWarp {
    points: Vec<(f64, f64)>,
}

impl TimeWarp {
    pub fn identity() -> Self {
        Self { points: vec![(0.0, 0.0)] }
    }

    /// Breakpoints `(u_j, λ(u_j))`; `(0, 0)` is prepended when missing.
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.first() != Some(&(0.0, 0.0)) {
            points.insert(0, (0.0, 0.0));
        }
        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b.0 > a.0 && b.1 > a.1) || !b.0.is_finite() || !b.1.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "warp breakpoints must increase strictly: {a:?} then {b:?}"
                )));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, s: f64) -> f64 {
        let k = self.points.partition_point(|p| p.0 <= s);
        let (u0, l0) = self.points[k - 1];
        match self.points.get(k) {
            Some(&(u1, l1)) => l0 + (s - u0) * (l1 - l0) / (u1 - u0),
            None => l0 + (s - u0),
        }
    }

    pub fn inverse(&self, r: f64) -> f64 {
        let k = self.points.partition_point(|p| p.1 <= r);
        let (u0, l0) = self.points[k - 1];
        match self.points.get(k) {
            Some(&(u1, l1)) => u0 + (r - l0) * (u1 - u0) / (l1 - l0),
            None => u0 + (r - l0),
        }
    }

    /// `sup_{0<=s<=t} |λ(s) - s|`.
    pub fn deviation(&self, t: f64) -> f64 {
        let mut m = (self.eval(t) - t).abs();
        for &(u, l) in &self.points {
            if u <= t {
                m = m.max((l - u).abs());
            }
        }
        m
    }

    /// Essential sup of `|log λ'|` over `[0, t]`.
    pub fn log_slope(&self, t: f64) -> f64 {
        let mut m: f64 = 0.0;
        for (j, w) in self.points.windows(2).enumerate() {
            if w[0].0 < t || (j == 0 && t == 0.0) {
                m = m.max(((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).ln().abs());
            }
        }
        m
    }
}
