//! Finite-jump cadlag paths with an explosion time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{CompactSet, Point};

/// A right-continuous step path on `[0, xi)` that sits in the cemetery from `xi` on.
///
/// Segment `i` carries the value `values[i]` on `[times[i], times[i + 1])`,
/// where the last segment ends at `xi` (possibly `+inf`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathJson", into = "PathJson")]
pub struct StepPath {
    dim: usize,
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
    xi: f64,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JumpJson {
    t: f64,
    v: Vec<f64>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathJson {
    dim: usize,
    jumps: Vec<JumpJson>,
    xi: Option<f64>,
}

impl TryFrom<PathJson> for StepPath {
    type Error = Error;

    fn try_from(raw: PathJson) -> Result<Self> {
        let xi = raw.xi.unwrap_or(f64::INFINITY);
        Self::new(raw.dim, raw.jumps.into_iter().map(|j| (j.t, j.v)).collect(), xi)
    }
}

impl From<StepPath> for PathJson {
    fn from(p: StepPath) -> Self {
        PathJson {
            dim: p.dim,
            jumps: p.times.into_iter().zip(p.values).map(|(t, v)| JumpJson { t, v }).collect(),
            xi: p.xi.is_finite().then_some(p.xi),
        }
    }
}

impl StepPath {
    pub fn new(dim: usize, jumps: Vec<(f64, Vec<f64>)>, xi: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPath("dim must be positive".into()));
        }
        if jumps.is_empty() {
            return Err(Error::InvalidPath("jumps: at least one jump at t = 0 is required".into()));
        }
        if !(xi > 0.0) {
            return Err(Error::InvalidPath(format!("xi: must be positive, got {xi}")));
        }
        let mut times = Vec::with_capacity(jumps.len());
        let mut values = Vec::with_capacity(jumps.len());
        for (i, (t, v)) in jumps.into_iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidPath(format!("jumps[{i}].t: time {t} is not finite")));
            }
            if i == 0 && t != 0.0 {
                return Err(Error::InvalidPath(format!("jumps[0].t: first jump must be at t = 0, got {t}")));
            }
            if let Some(&prev) = times.last() {
                if t <= prev {
                    return Err(Error::InvalidPath(format!(
                        "jumps[{i}].t: times must be strictly increasing ({t} after {prev})"
                    )));
                }
            }
            if t >= xi {
                return Err(Error::InvalidPath(format!("jumps[{i}].t: time {t} is not before xi = {xi}")));
            }
            if v.len() != dim {
                return Err(Error::InvalidPath(format!(
                    "jumps[{i}].v: expected {dim} coordinates, got {}",
                    v.len()
                )));
            }
            if let Some(k) = v.iter().position(|c| !c.is_finite()) {
                return Err(Error::InvalidPath(format!("jumps[{i}].v[{k}]: coordinate is not finite")));
            }
            times.push(t);
            values.push(v);
        }
        Ok(Self { dim, times, values, xi })
    }

    /// Constant path `v` on `[0, xi)`.
    pub fn constant(v: Vec<f64>, xi: f64) -> Result<Self> {
        Self::new(v.len(), vec![(0.0, v)], xi)
    }

    /// One-dimensional convenience constructor.
    pub fn scalar(jumps: &[(f64, f64)], xi: f64) -> Result<Self> {
        Self::new(1, jumps.iter().map(|&(t, v)| (t, vec![v])).collect(), xi)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Number of segments (jumps including the initial one at time 0).
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Right end of segment `i`.
    pub fn segment_end(&self, i: usize) -> f64 {
        self.times.get(i + 1).copied().unwrap_or(self.xi)
    }

    /// Index of the segment containing `t`, or `None` once the path is dead.
    pub fn segment_at(&self, t: f64) -> Option<usize> {
        if t >= self.xi || t < 0.0 {
            return None;
        }
        Some(self.times.partition_point(|&s| s <= t) - 1)
    }

    pub fn eval_coords(&self, t: f64) -> Option<&[f64]> {
        self.segment_at(t).map(|i| self.values[i].as_slice())
    }

    pub fn eval(&self, t: f64) -> Point {
        match self.eval_coords(t) {
            Some(v) => Point::State(v.to_vec()),
            None => Point::Cemetery,
        }
    }

    pub fn left_limit_coords(&self, t: f64) -> Option<&[f64]> {
        if t > self.xi {
            return None;
        }
        let i = self.times.partition_point(|&s| s < t);
        Some(self.values[i.saturating_sub(1)].as_slice())
    }

    pub fn left_limit(&self, t: f64) -> Point {
        match self.left_limit_coords(t) {
            Some(v) => Point::State(v.to_vec()),
            None => Point::Cemetery,
        }
    }

    /// First time the path or its left limit leaves the interior of `u`, capped by `xi`.
    pub fn exit_time(&self, u: &CompactSet) -> f64 {
        for (t, v) in self.times.iter().zip(&self.values) {
            if !u.in_interior(v) {
                return *t;
            }
        }
        self.xi
    }

    /// Cuts the path at the first jump time `<= t` landing outside `k`.
    ///
    /// A path starting outside `k` is returned unchanged.
    pub fn truncate_at_exit(&self, k: &CompactSet, t: f64) -> StepPath {
        let cut = (1..self.len()).find(|&i| self.times[i] <= t && !k.contains(&self.values[i]));
        match cut {
            Some(i) if k.contains(&self.values[0]) => StepPath {
                dim: self.dim,
                times: self.times[..i].to_vec(),
                values: self.values[..i].to_vec(),
                xi: self.times[i],
            },
            _ => self.clone(),
        }
    }

    /// Same jumps with a new explosion time (must exceed the last jump).
    pub fn with_xi(&self, xi: f64) -> Result<Self> {
        Self::new(self.dim, self.jumps(), xi)
    }

    pub fn jumps(&self) -> Vec<(f64, Vec<f64>)> {
        self.times.iter().copied().zip(self.values.iter().cloned()).collect()
    }

    /// Path restricted to `[0, h)`: explodes at `h` if `h < xi`.
    pub fn killed_at(&self, h: f64) -> Result<Self> {
        if h >= self.xi {
            return Ok(self.clone());
        }
        let jumps = self.jumps().into_iter().filter(|(t, _)| *t < h).collect();
        Self::new(self.dim, jumps, h)
    }

    /// Merges consecutive segments carrying identical values.
    pub fn canonical(&self) -> StepPath {
        let mut times = vec![self.times[0]];
        let mut values = vec![self.values[0].clone()];
        for (t, v) in self.times.iter().zip(&self.values).skip(1) {
            if values.last() != Some(v) {
                times.push(*t);
                values.push(v.clone());
            }
        }
        StepPath { dim: self.dim, times, values, xi: self.xi }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PathJson = serde_json::from_str(s)?;
        raw.try_into()
    }

    /// Canonical JSON (pretty printed, shortest round-trip floats, trailing newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("finite floats serialize");
        s.push('\n');
        s
    }
}
