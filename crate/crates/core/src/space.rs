//! State space `S = R^d`, its one-point compactification and compact sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Metric used on `S` (and on `S ∪ {Δ}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    /// `min(|a - b|, 1)`; the cemetery sits at distance 1 from every state.
    EuclideanTruncated,
    /// Euclidean distance between inverse stereographic images on the unit sphere.
    Chordal,
}

/// A point of `S ∪ {Δ}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    State(Vec<f64>),
    Cemetery,
}

impl Point {
    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Point::State(v) => Some(v),
            Point::Cemetery => None,
        }
    }

    pub fn is_cemetery(&self) -> bool {
        matches!(self, Point::Cemetery)
    }
}

/// `R^d` together with a choice of metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateSpace {
    pub dim: usize,
    pub metric: MetricKind,
}

fn norm2(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Inverse stereographic projection onto the unit sphere of `R^{d+1}`;
/// the north pole `(0, .., 0, 1)` is the image of Δ.
pub fn to_sphere(a: &[f64]) -> Vec<f64> {
    let n2 = norm2(a);
    let mut p: Vec<f64> = a.iter().map(|x| 2.0 * x / (1.0 + n2)).collect();
    p.push((n2 - 1.0) / (n2 + 1.0));
    p
}

/// Chordal distance from the sphere point `p` to the circle cut out of the
/// sphere by the hyperplane `n · P = h`.
fn sphere_point_to_circle(p: &[f64], n: &[f64], h: f64) -> f64 {
    let nn = norm2(n).sqrt();
    let nh: Vec<f64> = n.iter().map(|x| x / nn).collect();
    let hh = (h / nn).clamp(-1.0, 1.0);
    let rho_c = (1.0 - hh * hh).max(0.0).sqrt();
    let off = nh.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() - hh;
    // projection of p onto the plane, measured from the circle centre hh * nh
    let radial = p
        .iter()
        .zip(&nh)
        .map(|(pi, ni)| {
            let proj = pi - off * ni;
            let q = hh * ni;
            (proj - q) * (proj - q)
        })
        .sum::<f64>()
        .sqrt();
    (off * off + (radial - rho_c) * (radial - rho_c)).sqrt()
}

impl StateSpace {
    pub fn new(dim: usize, metric: MetricKind) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(Self { dim, metric })
    }

    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        match self.metric {
            MetricKind::EuclideanTruncated => euclid(a, b).min(1.0),
            MetricKind::Chordal => {
                let e = euclid(a, b);
                if e == 0.0 {
                    return 0.0;
                }
                (2.0 * e / ((1.0 + norm2(a)) * (1.0 + norm2(b))).sqrt()).min(2.0)
            }
        }
    }

    pub fn dist_to_cemetery(&self, a: &[f64]) -> f64 {
        match self.metric {
            MetricKind::EuclideanTruncated => 1.0,
            MetricKind::Chordal => 2.0 / (1.0 + norm2(a)).sqrt(),
        }
    }

    /// Distance on `S ∪ {Δ}`, with `None` standing for Δ.
    pub fn dist_opt(&self, a: Option<&[f64]>, b: Option<&[f64]>) -> f64 {
        match (a, b) {
            (Some(a), Some(b)) => self.dist(a, b),
            (Some(a), None) | (None, Some(a)) => self.dist_to_cemetery(a),
            (None, None) => 0.0,
        }
    }

    pub fn point_dist(&self, a: &Point, b: &Point) -> f64 {
        self.dist_opt(a.coords(), b.coords())
    }

    /// Exact `d(a, K^c)`; zero exactly when `a` is outside the interior of `K`.
    pub fn dist_to_complement(&self, a: &[f64], k: &CompactSet) -> f64 {
        if matches!(k, CompactSet::Everything) {
            return f64::INFINITY;
        }
        if !k.in_interior(a) {
            return 0.0;
        }
        match self.metric {
            MetricKind::EuclideanTruncated => match k {
                CompactSet::Ball { center, radius } => (radius - euclid(a, center)).clamp(0.0, 1.0),
                CompactSet::Box { lo, hi } => {
                    let mut m = f64::INFINITY;
                    for i in 0..a.len() {
                        m = m.min(a[i] - lo[i]).min(hi[i] - a[i]);
                    }
                    m.clamp(0.0, 1.0)
                }
                CompactSet::Everything => unreachable!(),
            },
            MetricKind::Chordal => {
                let p = to_sphere(a);
                match k {
                    CompactSet::Ball { center, radius } => {
                        let c2 = norm2(center);
                        let r2 = radius * radius;
                        let mut n: Vec<f64> = center.iter().map(|c| -2.0 * c).collect();
                        n.push(1.0 - c2 + r2);
                        sphere_point_to_circle(&p, &n, -(1.0 + c2 - r2))
                    }
                    CompactSet::Box { lo, hi } => {
                        let d = a.len();
                        let mut m = f64::INFINITY;
                        for i in 0..d {
                            for h in [lo[i], hi[i]] {
                                // the face a_i = h maps to X_i + h Z = h
                                let mut n = vec![0.0; d + 1];
                                n[i] = 1.0;
                                n[d] = h;
                                m = m.min(sphere_point_to_circle(&p, &n, h));
                            }
                        }
                        m
                    }
                    CompactSet::Everything => unreachable!(),
                }
            }
        }
    }

    /// `d(a, K^c)` on `S ∪ {Δ}`; Δ never lies inside a bounded compact set.
    pub fn dist_opt_to_complement(&self, a: Option<&[f64]>, k: &CompactSet) -> f64 {
        match a {
            Some(a) => self.dist_to_complement(a, k),
            None if matches!(k, CompactSet::Everything) => f64::INFINITY,
            None => 0.0,
        }
    }
}

/// A compact subset of `S`, or the whole compactified space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CompactSet {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// All of `S ∪ {Δ}`; used for the global metric on the compactification.
    Everything,
}

impl CompactSet {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad ball radius {radius}")));
        }
        Ok(CompactSet::Ball { center, radius })
    }

    /// Closed ball of radius `r` around the origin of `R^dim`.
    pub fn centered_ball(dim: usize, r: f64) -> Self {
        CompactSet::Ball { center: vec![0.0; dim], radius: r }
    }

    pub fn cube(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.iter().zip(&hi).any(|(l, h)| !(l <= h) || !l.is_finite() || !h.is_finite()) {
            return Err(Error::InvalidArgument("box bounds must satisfy lo <= hi".into()));
        }
        Ok(CompactSet::Box { lo, hi })
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        let ok = match self {
            CompactSet::Ball { center, .. } => center.len() == dim,
            CompactSet::Box { lo, .. } => lo.len() == dim,
            CompactSet::Everything => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("compact set does not live in dimension {dim}")))
        }
    }

    pub fn contains(&self, a: &[f64]) -> bool {
        match self {
            CompactSet::Ball { center, radius } => euclid(a, center) <= *radius,
            CompactSet::Box { lo, hi } => a.iter().zip(lo.iter().zip(hi)).all(|(x, (l, h))| l <= x && x <= h),
            CompactSet::Everything => true,
        }
    }

    pub fn in_interior(&self, a: &[f64]) -> bool {
        match self {
            CompactSet::Ball { center, radius } => euclid(a, center) < *radius,
            CompactSet::Box { lo, hi } => a.iter().zip(lo.iter().zip(hi)).all(|(x, (l, h))| l < x && x < h),
            CompactSet::Everything => true,
        }
    }

    pub fn contains_opt(&self, a: Option<&[f64]>) -> bool {
        match a {
            Some(a) => self.contains(a),
            None => matches!(self, CompactSet::Everything),
        }
    }

    /// Whether `K ⊂ other` (exact for balls and boxes).
    pub fn is_subset_of(&self, other: &CompactSet) -> bool {
        match (self, other) {
            (_, CompactSet::Everything) => true,
            (CompactSet::Everything, _) => false,
            (CompactSet::Ball { center: c1, radius: r1 }, CompactSet::Ball { center: c2, radius: r2 }) => {
                euclid(c1, c2) + r1 <= *r2
            }
            (CompactSet::Box { lo, hi }, o) => {
                // a box is inside a convex set iff all its corners are
                let d = lo.len();
                (0..1usize << d).all(|mask| {
                    let corner: Vec<f64> = (0..d).map(|i| if mask >> i & 1 == 1 { hi[i] } else { lo[i] }).collect();
                    o.contains(&corner)
                })
            }
            (CompactSet::Ball { center, radius }, CompactSet::Box { lo, hi }) => {
                (0..center.len()).all(|i| lo[i] <= center[i] - radius && center[i] + radius <= hi[i])
            }
        }
    }
}

/// Increasing sequence of compact sets covering `S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exhaustion {
    /// `K_n` is the closed ball of radius `base * ratio^n` around the origin.
    pub base: f64,
    pub ratio: f64,
}

impl Default for Exhaustion {
    fn default() -> Self {
        Self { base: 1.0, ratio: 2.0 }
    }
}

impl Exhaustion {
    pub fn new(base: f64, ratio: f64) -> Result<Self> {
        if !(base > 0.0) || !(ratio > 1.0) || !base.is_finite() || !ratio.is_finite() {
            return Err(Error::InvalidArgument("exhaustion needs base > 0 and ratio > 1".into()));
        }
        Ok(Self { base, ratio })
    }

    pub fn k(&self, dim: usize, n: usize) -> CompactSet {
        CompactSet::centered_ball(dim, self.base * self.ratio.powi(n as i32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chordal_matches_sphere_images() {
        let s = StateSpace::new(2, MetricKind::Chordal).unwrap();
        let a = [0.3, -1.2];
        let b = [4.0, 2.5];
        let pa = to_sphere(&a);
        let pb = to_sphere(&b);
        assert!((s.dist(&a, &b) - euclid(&pa, &pb)).abs() < 1e-14);
        let north = [0.0, 0.0, 1.0];
        assert!((s.dist_to_cemetery(&a) - euclid(&pa, &north)).abs() < 1e-14);
    }

    #[test]
    fn cemetery_distance_vanishes_at_infinity() {
        let s = StateSpace::new(1, MetricKind::Chordal).unwrap();
        assert!(s.dist_to_cemetery(&[1e8]) < 1e-7);
        assert!(s.dist_to_cemetery(&[1.0]) > 1.0);
    }

    #[test]
    fn truncated_distance_to_ball_complement() {
        let s = StateSpace::new(1, MetricKind::EuclideanTruncated).unwrap();
        let k = CompactSet::centered_ball(1, 2.0);
        assert_eq!(s.dist_to_complement(&[1.5], &k), 0.5);
        assert_eq!(s.dist_to_complement(&[0.0], &k), 1.0);
        assert_eq!(s.dist_to_complement(&[2.0], &k), 0.0);
        assert_eq!(s.dist_to_complement(&[3.0], &k), 0.0);
    }

    // dense sampling of the boundary of K in the plane
    fn sampled_boundary_distance(s: &StateSpace, a: &[f64], k: &CompactSet) -> f64 {
        let mut best = f64::INFINITY;
        let n = 20000;
        match k {
            CompactSet::Ball { center, radius } => {
                for i in 0..n {
                    let th = i as f64 / n as f64 * std::f64::consts::TAU;
                    let b = [center[0] + radius * th.cos(), center[1] + radius * th.sin()];
                    best = best.min(s.dist(a, &b));
                }
            }
            CompactSet::Box { lo, hi } => {
                for i in 0..=n {
                    let u = i as f64 / n as f64;
                    let x = lo[0] + u * (hi[0] - lo[0]);
                    let y = lo[1] + u * (hi[1] - lo[1]);
                    for b in [[x, lo[1]], [x, hi[1]], [lo[0], y], [hi[0], y]] {
                        best = best.min(s.dist(a, &b));
                    }
                }
            }
            CompactSet::Everything => unreachable!(),
        }
        best
    }

    #[test]
    fn chordal_distance_to_complement_matches_sampling() {
        let s = StateSpace::new(2, MetricKind::Chordal).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let k = if rng.random::<bool>() {
                CompactSet::Ball { center: vec![rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)], radius: rng.random_range(0.5..4.0) }
            } else {
                let lo = vec![rng.random_range(-3.0..0.0), rng.random_range(-3.0..0.0)];
                let hi = vec![lo[0] + rng.random_range(0.5..5.0), lo[1] + rng.random_range(0.5..5.0)];
                CompactSet::Box { lo, hi }
            };
            let a = [rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0)];
            let exact = s.dist_to_complement(&a, &k);
            if !k.in_interior(&a) {
                assert_eq!(exact, 0.0);
                continue;
            }
            let sampled = sampled_boundary_distance(&s, &a, &k);
            assert!(exact <= sampled + 1e-12, "{exact} > {sampled}");
            assert!(sampled - exact < 2e-3, "{exact} vs {sampled}");
        }
    }

    #[test]
    fn exhaustion_is_increasing() {
        let e = Exhaustion::default();
        for n in 0..10 {
            assert!(e.k(3, n).is_subset_of(&e.k(3, n + 1)));
        }
    }
}
