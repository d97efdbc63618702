//! Feasibility engine behind `rho_tilde` and `rho`.
//!
//! For a candidate `eps`, a warp is a monotone curve in the `(s, r = λ(s))`
//! plane.  The plane is cut into cells `I_i x J_j` (segments of `x` and `y`);
//! a cell can be crossed only when `d(u_i, w_j) <= eps`.  Inside a cell the
//! curve must stay in the band `|r - s| <= eps` and, for `rho`, use slopes in
//! `[e^-eps, e^eps]`.  The set reachable from an entry interval is a convex
//! polygon, so reachability is propagated edge to edge.

use std::collections::{BTreeMap, HashMap};

use crate::path::StepPath;
use crate::space::{CompactSet, StateSpace};

/// A step path viewed as a sequence of segments, optionally followed by the
/// cemetery forever.
pub(crate) struct Track<'a> {
    starts: Vec<f64>,
    vals: Vec<Option<&'a [f64]>>,
    end: f64,
}

impl<'a> Track<'a> {
    pub(crate) fn local(x: &'a StepPath) -> Self {
        Self {
            starts: x.times().to_vec(),
            vals: x.values().iter().map(|v| Some(v.as_slice())).collect(),
            end: x.xi(),
        }
    }

    /// The path as an element of `D(S^Δ)`: Δ after `xi`, living forever.
    pub(crate) fn global(x: &'a StepPath) -> Self {
        let mut tr = Self::local(x);
        if tr.end.is_finite() {
            tr.starts.push(tr.end);
            tr.vals.push(None);
            tr.end = f64::INFINITY;
        }
        tr
    }

    fn n(&self) -> usize {
        self.starts.len()
    }

    fn last_finite(&self) -> f64 {
        if self.end.is_finite() {
            self.end
        } else {
            *self.starts.last().unwrap()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Bottom,
}

#[derive(Clone, Copy, Debug)]
struct Contrib {
    side: Side,
    lo: f64,
    hi: f64,
    /// source cell and merged entry index; `None` for the origin
    src: Option<(usize, usize, usize)>,
}

#[derive(Default)]
struct Cell {
    contribs: Vec<Contrib>,
    entries: Vec<(Side, f64, f64)>,
}

type Poly = Vec<(f64, f64)>;

/// Keeps the part of a convex polygon where `a s + b r <= c` (up to `tol`).
fn clip(poly: &[(f64, f64)], a: f64, b: f64, c: f64, tol: f64) -> Poly {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for k in 0..n {
        let p = poly[k];
        let q = poly[(k + 1) % n];
        let fp = a * p.0 + b * p.1 - c;
        let fq = a * q.0 + b * q.1 - c;
        if fp <= tol {
            out.push(p);
        }
        if (fp < -tol && fq > tol) || (fp > tol && fq < -tol) {
            let u = fp / (fp - fq);
            out.push((p.0 + u * (q.0 - p.0), p.1 + u * (q.1 - p.1)));
        }
    }
    out
}

fn range(poly: &[(f64, f64)], coord: usize) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in poly {
        let v = if coord == 0 { p.0 } else { p.1 };
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

pub(crate) struct Problem<'a> {
    pub x: Track<'a>,
    pub y: Track<'a>,
    pub t: f64,
    pub space: &'a StateSpace,
    /// restrict slopes to `[e^-eps, e^eps]`
    pub bounded: bool,
    xa: Vec<f64>,
    yb: Vec<f64>,
    pen_x: Vec<f64>,
    pen_y: Vec<f64>,
    tol: f64,
}

/// Outcome of a successful feasibility check: the warp polyline, ending at
/// the chosen cut `(t_1, λ(t_1))`.
pub(crate) struct Certificate {
    pub points: Vec<(f64, f64)>,
}

impl<'a> Problem<'a> {
    pub(crate) fn new(x: Track<'a>, y: Track<'a>, t: f64, k: &CompactSet, space: &'a StateSpace, bounded: bool) -> Self {
        let big = x.last_finite().max(y.last_finite()).max(t) + t + 10.0;
        let bounds = |tr: &Track| -> Vec<f64> {
            let mut v = tr.starts.clone();
            v.push(if tr.end.is_finite() { tr.end } else { big });
            v
        };
        let xa = bounds(&x);
        let yb = bounds(&y);
        let pen_x = x.vals.iter().map(|v| space.dist_opt_to_complement(*v, k)).collect();
        let pen_y = y.vals.iter().map(|v| space.dist_opt_to_complement(*v, k)).collect();
        Self { tol: 1e-12 * (1.0 + big), x, y, t, space, bounded, xa, yb, pen_x, pen_y }
    }

    /// Smallest admissible value reachable by cutting at time 0.
    pub(crate) fn origin_bound(&self) -> f64 {
        self.pen_x[0].min(self.t).max(self.pen_y[0].min(self.t))
    }

    /// Earliest admissible cut inside segment `i` of a track, if any.
    fn cut_threshold(&self, starts: &[f64], pen: &[f64], end_finite: bool, i: usize, eps: f64) -> Option<f64> {
        let a0 = starts[i];
        let a1 = starts[i + 1];
        if pen[i] <= eps {
            return Some(a0);
        }
        let mut best = f64::INFINITY;
        if self.t - eps <= a1 {
            best = best.min((self.t - eps).max(a0));
        }
        let last = i + 1 == pen.len();
        if (last && end_finite) || (!last && pen[i + 1] <= eps) {
            best = best.min(a1);
        }
        best.is_finite().then_some(best)
    }

    fn cone(&self, eps: f64) -> (f64, f64) {
        if self.bounded {
            ((-eps).exp(), eps.exp())
        } else {
            (0.0, f64::INFINITY)
        }
    }

    fn reach_polygon(&self, i: usize, j: usize, e: (Side, f64, f64), eps: f64) -> Poly {
        let tol = self.tol;
        let (s0, s1) = (self.xa[i], self.xa[i + 1]);
        let (r0, r1) = (self.yb[j], self.yb[j + 1]);
        let mut p: Poly = vec![(s0, r0), (s1, r0), (s1, r1), (s0, r1)];
        p = clip(&p, -1.0, 1.0, eps, tol);
        p = clip(&p, 1.0, -1.0, eps, tol);
        let (klo, khi) = self.cone(eps);
        match e {
            (Side::Left, lo, hi) => {
                // r >= lo + klo (s - a), r <= hi + khi (s - a)
                let a = s0;
                p = clip(&p, klo, -1.0, klo * a - lo, tol);
                if khi.is_finite() {
                    p = clip(&p, -khi, 1.0, hi - khi * a, tol);
                }
            }
            (Side::Bottom, lo, hi) => {
                let b = r0;
                p = clip(&p, -1.0, 0.0, -lo, tol);
                p = clip(&p, klo, -1.0, klo * hi - b, tol);
                if khi.is_finite() {
                    p = clip(&p, -khi, 1.0, b - khi * lo, tol);
                }
            }
        }
        p
    }

    /// Decides whether `eps` is admissible; with `witness`, also returns a warp.
    pub(crate) fn feasible(&self, eps: f64, witness: bool) -> Option<Certificate> {
        if self.origin_bound() <= eps {
            return Some(Certificate { points: vec![(0.0, 0.0)] });
        }
        let nx = self.x.n();
        let ny = self.y.n();
        let tol = self.tol;
        let (klo, khi) = self.cone(eps);
        let mut rows: Vec<BTreeMap<usize, Cell>> = (0..nx).map(|_| BTreeMap::new()).collect();
        let mut done: HashMap<(usize, usize), Cell> = HashMap::new();
        rows[0].entry(0).or_default().contribs.push(Contrib { side: Side::Left, lo: 0.0, hi: 0.0, src: None });

        for i in 0..nx {
            let mut next_j = 0;
            while let Some((&j, _)) = rows[i].range(next_j..).next() {
                next_j = j + 1;
                let mut cell = rows[i].remove(&j).unwrap();
                let compatible = self.space.dist_opt(self.x.vals[i], self.y.vals[j]) <= eps;
                let in_band = self.yb[j] - self.xa[i + 1] <= eps + tol && self.xa[i] - self.yb[j + 1] <= eps + tol;
                if !compatible || !in_band {
                    continue;
                }
                cell.entries = merge(&cell.contribs, tol);
                let sx = self.cut_threshold(&self.xa, &self.pen_x, self.x.end.is_finite(), i, eps);
                let ry = self.cut_threshold(&self.yb, &self.pen_y, self.y.end.is_finite(), j, eps);
                for (ei, &e) in cell.entries.iter().enumerate() {
                    let poly = self.reach_polygon(i, j, e, eps);
                    if poly.is_empty() {
                        continue;
                    }
                    if let (Some(s_cut), Some(r_cut)) = (sx, ry) {
                        let end = clip(&clip(&poly, -1.0, 0.0, -s_cut, tol), 0.0, -1.0, -r_cut, tol);
                        if let Some(&q) = end.first() {
                            if !witness {
                                return Some(Certificate { points: Vec::new() });
                            }
                            done.insert((i, j), cell);
                            return Some(self.backtrack(&done, (i, j, ei), q, klo, khi));
                        }
                    }
                    let src = Some((i, j, ei));
                    if i + 1 < nx {
                        let right = clip(&poly, -1.0, 0.0, -self.xa[i + 1], tol);
                        if !right.is_empty() {
                            let (lo, hi) = range(&right, 1);
                            let (lo, hi) = (lo.max(self.yb[j]), hi.min(self.yb[j + 1]));
                            rows[i + 1].entry(j).or_default().contribs.push(Contrib { side: Side::Left, lo, hi, src });
                            if j + 1 < ny && hi >= self.yb[j + 1] - tol {
                                let b = self.yb[j + 1];
                                rows[i + 1].entry(j + 1).or_default().contribs.push(Contrib { side: Side::Left, lo: b, hi: b, src });
                            }
                        }
                    }
                    if j + 1 < ny {
                        let top = clip(&poly, 0.0, -1.0, -self.yb[j + 1], tol);
                        if !top.is_empty() {
                            let (lo, hi) = range(&top, 0);
                            let (lo, hi) = (lo.max(self.xa[i]), hi.min(self.xa[i + 1]));
                            rows[i].entry(j + 1).or_default().contribs.push(Contrib { side: Side::Bottom, lo, hi, src });
                        }
                    }
                }
                if witness {
                    done.insert((i, j), cell);
                }
            }
        }
        None
    }

    fn backtrack(
        &self,
        done: &HashMap<(usize, usize), Cell>,
        mut at: (usize, usize, usize),
        mut q: (f64, f64),
        klo: f64,
        khi: f64,
    ) -> Certificate {
        let mut pts = vec![q];
        loop {
            let (i, j, ei) = at;
            let cell = &done[&(i, j)];
            let (side, lo, hi) = cell.entries[ei];
            // a point p on the entry from which q is reachable along an admissible slope
            let p = match side {
                Side::Left => {
                    let a = self.xa[i];
                    let ds = (q.0 - a).max(0.0);
                    let top = q.1 - klo * ds;
                    let bot = if ds == 0.0 {
                        q.1
                    } else if khi.is_finite() {
                        q.1 - khi * ds
                    } else {
                        f64::NEG_INFINITY
                    };
                    (a, top.min(hi).max(bot.max(lo)).clamp(lo, hi))
                }
                Side::Bottom => {
                    let b = self.yb[j];
                    let dr = (q.1 - b).max(0.0);
                    let left = if klo > 0.0 { q.0 - dr / klo } else { f64::NEG_INFINITY };
                    let right = q.0 - dr / khi;
                    (right.min(hi).max(left.max(lo)).clamp(lo, hi), b)
                }
            };
            pts.push(p);
            let c = cell
                .contribs
                .iter()
                .filter(|c| c.side == side)
                .min_by(|a, b| gap(a, p, side).total_cmp(&gap(b, p, side)))
                .expect("merged entry comes from a contribution");
            match c.src {
                None => break,
                Some(s) => {
                    at = s;
                    q = p;
                }
            }
        }
        pts.reverse();
        Certificate { points: pts }
    }
}

fn gap(c: &Contrib, p: (f64, f64), side: Side) -> f64 {
    let v = if side == Side::Left { p.1 } else { p.0 };
    (c.lo - v).max(v - c.hi).max(0.0)
}

fn merge(contribs: &[Contrib], tol: f64) -> Vec<(Side, f64, f64)> {
    let mut out = Vec::new();
    for side in [Side::Left, Side::Bottom] {
        let mut iv: Vec<(f64, f64)> = contribs.iter().filter(|c| c.side == side).map(|c| (c.lo, c.hi.max(c.lo))).collect();
        iv.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cur: Option<(f64, f64)> = None;
        for (lo, hi) in iv {
            cur = match cur {
                Some((a, b)) if lo <= b + tol => Some((a, b.max(hi))),
                Some((a, b)) => {
                    out.push((side, a, b));
                    Some((lo, hi))
                }
                None => Some((lo, hi)),
            };
        }
        if let Some((a, b)) = cur {
            out.push((side, a, b));
        }
    }
    out
}

/// Smallest admissible `eps`, found by doubling then bisection to `1e-11`.
pub(crate) fn solve(pb: &Problem) -> f64 {
    solve_capped(pb, f64::INFINITY)
}

/// `solve(pb) ∧ cap`, skipping the search when `cap` is not admissible.
pub(crate) fn solve_capped(pb: &Problem, cap: f64) -> f64 {
    let h0 = pb.origin_bound();
    if cap < h0 && pb.feasible(cap, false).is_none() {
        return cap;
    }
    if h0 == 0.0 || pb.feasible(0.0, false).is_some() {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = h0;
    let mut e = (h0 * 1e-6).max(1e-10);
    while e < hi {
        if pb.feasible(e, false).is_some() {
            hi = e;
            break;
        }
        lo = e;
        e *= 8.0;
    }
    while hi - lo > 1e-11 {
        let mid = 0.5 * (lo + hi);
        if pb.feasible(mid, false).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
