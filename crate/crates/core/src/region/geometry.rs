//! Hulls, envelopes and set operations on boundary polylines.

use super::{CertifiedVertex, RatePoint, RegionKind, RegionPolyline, RelayMix, TimeShare};
use std::cmp::Ordering;

/// Sine of the turning angle below which three points count as collinear.
const COLLINEAR_TOL: f64 = 1e-9;
/// Distance below which a coordinate counts as lying on an axis.
const AXIS_TOL: f64 = 1e-12;
/// Pivot guard for 2x2 solves.
const PIVOT_TOL: f64 = 1e-12;

pub(crate) fn cross(o: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1)
}

fn keeps_turning_right(o: RatePoint, a: RatePoint, b: RatePoint) -> bool {
    let scale = o.distance(&a) * o.distance(&b);
    scale > 0.0 && cross(o, a, b) < -COLLINEAR_TOL * scale
}

/// Upper-right boundary of the downward closure of the convex hull of
/// `pts`: from the highest point (rightmost on ties) to the rightmost point
/// (highest on ties). With `touch_axes`, points of `pts` lying on the axes
/// extend the chain to `r1 = 0` and `r2 = 0` when they exist.
///
/// Exact ties keep the earliest input, so the result depends only on the
/// order of `pts`.
pub(crate) fn pareto_hull<T: Clone>(pts: &[(RatePoint, T)], touch_axes: bool) -> Vec<(RatePoint, T)> {
    if pts.is_empty() {
        return Vec::new();
    }
    let top = pts
        .iter()
        .fold(&pts[0], |b, p| {
            if p.0.r2 > b.0.r2 || (p.0.r2 == b.0.r2 && p.0.r1 > b.0.r1) {
                p
            } else {
                b
            }
        })
        .0;
    let right = pts
        .iter()
        .fold(&pts[0], |b, p| {
            if p.0.r1 > b.0.r1 || (p.0.r1 == b.0.r1 && p.0.r2 > b.0.r2) {
                p
            } else {
                b
            }
        })
        .0;
    let mut cand: Vec<&(RatePoint, T)> = pts
        .iter()
        .filter(|p| p.0.r1 >= top.r1 && p.0.r2 >= right.r2)
        .collect();
    cand.sort_by(|a, b| {
        a.0.r1
            .partial_cmp(&b.0.r1)
            .unwrap_or(Ordering::Equal)
            .then(b.0.r2.partial_cmp(&a.0.r2).unwrap_or(Ordering::Equal))
    });
    cand.dedup_by(|b, a| a.0 == b.0);

    let mut hull: Vec<(RatePoint, T)> = Vec::new();
    for p in cand {
        while hull.len() >= 2 && !keeps_turning_right(hull[hull.len() - 2].0, hull[hull.len() - 1].0, p.0) {
            hull.pop();
        }
        hull.push(p.clone());
    }

    if touch_axes {
        if top.r1 > AXIS_TOL {
            let left = pts
                .iter()
                .filter(|p| p.0.r1 <= AXIS_TOL)
                .fold(None, |b: Option<&(RatePoint, T)>, p| match b {
                    Some(b) if b.0.r2 >= p.0.r2 => Some(b),
                    _ => Some(p),
                });
            if let Some(l) = left.filter(|l| l.0.r2 >= top.r2 - AXIS_TOL) {
                hull.insert(0, l.clone());
            }
        }
        if right.r2 > AXIS_TOL {
            let low = pts
                .iter()
                .filter(|p| p.0.r2 <= AXIS_TOL)
                .fold(None, |b: Option<&(RatePoint, T)>, p| match b {
                    Some(b) if b.0.r1 >= p.0.r1 => Some(b),
                    _ => Some(p),
                });
            if let Some(l) = low.filter(|l| l.0.r1 >= right.r1 - AXIS_TOL) {
                hull.push(l.clone());
            }
        }
    }
    hull
}

impl RegionPolyline {
    /// Largest `r2` in the region at abscissa `r1`, or `None` past its end.
    pub fn envelope(&self, r1: f64) -> Option<f64> {
        let v = &self.vertices;
        let first = v.first()?.point;
        if r1 <= first.r1 {
            return Some(first.r2);
        }
        for w in v.windows(2) {
            let (a, b) = (w[0].point, w[1].point);
            if b.r1 > a.r1 && r1 >= a.r1 && r1 <= b.r1 {
                let t = (r1 - a.r1) / (b.r1 - a.r1);
                return Some(a.r2 + t * (b.r2 - a.r2));
            }
        }
        None
    }

    /// Vertex indices and weights whose average is `(max(r1, first.r1), envelope(r1))`.
    pub(crate) fn witness_at(&self, r1: f64) -> Vec<(usize, f64)> {
        let v = &self.vertices;
        if v.is_empty() {
            return Vec::new();
        }
        if r1 <= v[0].point.r1 {
            return vec![(0, 1.0)];
        }
        for (i, w) in v.windows(2).enumerate() {
            let (a, b) = (w[0].point, w[1].point);
            if b.r1 > a.r1 && r1 >= a.r1 && r1 <= b.r1 {
                let t = (r1 - a.r1) / (b.r1 - a.r1);
                return [(i, 1.0 - t), (i + 1, t)].into_iter().filter(|&(_, w)| w > 0.0).collect();
            }
        }
        // Past the end: the rightmost, highest vertex.
        let last = v
            .iter()
            .enumerate()
            .rev()
            .max_by(|a, b| a.1.point.r1.partial_cmp(&b.1.point.r1).unwrap_or(Ordering::Equal))
            .map(|(i, _)| i)
            .unwrap_or(0);
        vec![(last, 1.0)]
    }

    /// Boundary point on the ray from the origin through `dir`, as
    /// `(scale, segment start index, position along the segment)` with
    /// `scale · dir` on the boundary.
    pub(crate) fn ray_hit(&self, dir: RatePoint) -> Option<(f64, usize, f64)> {
        let v = &self.vertices;
        if v.len() == 1 {
            let p = v[0].point;
            let c = cross(RatePoint::ORIGIN, dir, p);
            let d2 = dir.r1 * dir.r1 + dir.r2 * dir.r2;
            if c.abs() <= PIVOT_TOL && d2 > 0.0 {
                return Some(((p.r1 * dir.r1 + p.r2 * dir.r2) / d2, 0, 0.0));
            }
            return None;
        }
        let mut best: Option<(f64, usize, f64)> = None;
        for (i, w) in v.windows(2).enumerate() {
            let (a, b) = (w[0].point, w[1].point);
            let e = RatePoint::new(b.r1 - a.r1, b.r2 - a.r2);
            let det = e.r1 * dir.r2 - dir.r1 * e.r2;
            let scale = (e.r1.hypot(e.r2) * dir.r1.hypot(dir.r2)).max(1e-300);
            if det.abs() < PIVOT_TOL * scale {
                // A segment lying along the ray: its far end is the hit.
                let d2 = dir.r1 * dir.r1 + dir.r2 * dir.r2;
                if cross(RatePoint::ORIGIN, dir, a).abs() <= PIVOT_TOL * dir.r1.hypot(dir.r2).max(1e-300) && d2 > 0.0 {
                    for (mu, p) in [(0.0, a), (1.0, b)] {
                        let beta = (p.r1 * dir.r1 + p.r2 * dir.r2) / d2;
                        if beta > 0.0 && best.is_none_or(|(bb, _, _)| beta > bb) {
                            best = Some((beta, i, mu));
                        }
                    }
                }
                continue;
            }
            let beta = (e.r1 * a.r2 - a.r1 * e.r2) / det;
            let mu = (dir.r1 * a.r2 - dir.r2 * a.r1) / det;
            if beta > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&mu) && best.is_none_or(|(bb, _, _)| beta > bb) {
                best = Some((beta, i, mu.clamp(0.0, 1.0)));
            }
        }
        best
    }
}

/// Membership in the downward closure, allowing `tol` of slack on each
/// coordinate.
pub fn region_contains(region: &RegionPolyline, p: &RatePoint, tol: f64) -> bool {
    let q = RatePoint::new((p.r1 - tol).max(0.0), (p.r2 - tol).max(0.0));
    if q.r1 < 0.0 || q.r2 < 0.0 {
        return false;
    }
    match region.envelope(q.r1) {
        Some(y) => q.r2 <= y + 1e-12,
        None => false,
    }
}

fn mix_uplink(region: &RegionPolyline, weights: &[(usize, f64)]) -> Option<TimeShare> {
    let mut components = Vec::new();
    for &(i, w) in weights {
        components.extend(region.vertices[i].uplink.as_ref()?.scaled(w));
    }
    Some(TimeShare { components })
}

fn mix_downlink(region: &RegionPolyline, weights: &[(usize, f64)]) -> Option<RelayMix> {
    let mut components = Vec::new();
    for &(i, w) in weights {
        let m = region.vertices[i].downlink.as_ref()?;
        components.extend(m.components.iter().map(|(cw, p)| (cw * w, p.clone())));
    }
    Some(RelayMix { components })
}

/// Boundary of the intersection of two downward-closed convex regions.
///
/// The result starts on the `r2` axis and ends on the `r1` axis. Each vertex
/// takes its uplink and downlink certificates from whichever input has them,
/// preferring the input whose boundary is lower there.
pub fn intersect_regions(a: &RegionPolyline, b: &RegionPolyline) -> RegionPolyline {
    let kind = if a.kind == b.kind { a.kind } else { RegionKind::Capacity };
    let resolution = a.resolution.max(b.resolution);
    let max_gap = match (a.max_gap, b.max_gap) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    };
    if a.vertices.is_empty() || b.vertices.is_empty() {
        return RegionPolyline {
            kind,
            vertices: Vec::new(),
            resolution,
            max_gap,
        };
    }
    let end = a.max_r1().min(b.max_r1());
    let mut xs: Vec<f64> = vec![0.0, end];
    xs.extend(
        a.vertices
            .iter()
            .chain(&b.vertices)
            .map(|v| v.point.r1)
            .filter(|&x| x > 0.0 && x < end),
    );
    xs.sort_by(|p, q| p.partial_cmp(q).unwrap_or(Ordering::Equal));
    xs.dedup_by(|q, p| (*q - *p).abs() <= 1e-15);

    let gap = |x: f64| a.envelope(x).unwrap_or(0.0) - b.envelope(x).unwrap_or(0.0);
    let mut samples = Vec::with_capacity(2 * xs.len());
    for (k, &x) in xs.iter().enumerate() {
        samples.push(x);
        if let Some(&next) = xs.get(k + 1) {
            let (d0, d1) = (gap(x), gap(next));
            if d0 * d1 < 0.0 && (d0 - d1).abs() > PIVOT_TOL {
                samples.push(x + (next - x) * d0 / (d0 - d1));
            }
        }
    }

    let mut pts: Vec<RatePoint> = samples
        .iter()
        .map(|&x| {
            let y = a.envelope(x).unwrap_or(0.0).min(b.envelope(x).unwrap_or(0.0));
            RatePoint::new(x, y.max(0.0))
        })
        .collect();
    if let Some(&last) = pts.last() {
        if last.r2 > 0.0 && last.r1 > 0.0 {
            pts.push(RatePoint::new(last.r1, 0.0));
        }
    }
    let pts = simplify(pts);

    let vertices = pts
        .into_iter()
        .map(|p| {
            let wa = a.witness_at(p.r1);
            let wb = b.witness_at(p.r1);
            let a_lower = a.envelope(p.r1).unwrap_or(0.0) <= b.envelope(p.r1).unwrap_or(0.0);
            let (first, wf, second, ws) = if a_lower { (a, &wa, b, &wb) } else { (b, &wb, a, &wa) };
            CertifiedVertex {
                point: p,
                uplink: mix_uplink(first, wf).or_else(|| mix_uplink(second, ws)),
                downlink: mix_downlink(first, wf).or_else(|| mix_downlink(second, ws)),
            }
        })
        .collect();
    RegionPolyline {
        kind,
        vertices,
        resolution,
        max_gap,
    }
}

/// Drops repeated and collinear interior points.
fn simplify(pts: Vec<RatePoint>) -> Vec<RatePoint> {
    let mut out: Vec<RatePoint> = Vec::with_capacity(pts.len());
    for p in pts {
        if out.last().is_some_and(|q| q.distance(&p) <= 1e-15) {
            continue;
        }
        while out.len() >= 2 {
            let (o, a) = (out[out.len() - 2], out[out.len() - 1]);
            let scale = o.distance(&a) * o.distance(&p);
            if cross(o, a, p).abs() <= COLLINEAR_TOL * scale {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

fn segment_distance(p: RatePoint, a: RatePoint, b: RatePoint) -> f64 {
    let (ex, ey) = (b.r1 - a.r1, b.r2 - a.r2);
    let len2 = ex * ex + ey * ey;
    if len2 == 0.0 {
        return p.distance(&a);
    }
    let t = (((p.r1 - a.r1) * ex + (p.r2 - a.r2) * ey) / len2).clamp(0.0, 1.0);
    p.distance(&RatePoint::new(a.r1 + t * ex, a.r2 + t * ey))
}

fn boundary_chain(region: &RegionPolyline) -> Vec<RatePoint> {
    let mut pts = region.points();
    if let Some(&first) = pts.first() {
        if first.r1 > 0.0 {
            pts.insert(0, RatePoint::new(0.0, first.r2));
        }
    }
    pts
}

fn directed_hausdorff(from: &[RatePoint], to: &[RatePoint]) -> f64 {
    const SUBDIV: usize = 32;
    let dist_to = |p: RatePoint| -> f64 {
        if to.len() == 1 {
            return p.distance(&to[0]);
        }
        to.windows(2)
            .map(|w| segment_distance(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min)
    };
    let mut worst: f64 = 0.0;
    if from.len() == 1 {
        return dist_to(from[0]);
    }
    for w in from.windows(2) {
        for k in 0..=SUBDIV {
            let t = k as f64 / SUBDIV as f64;
            let p = RatePoint::new(w[0].r1 + t * (w[1].r1 - w[0].r1), w[0].r2 + t * (w[1].r2 - w[0].r2));
            worst = worst.max(dist_to(p));
        }
    }
    worst
}

/// Symmetric Hausdorff distance between the two upper-right boundaries,
/// each extended flat to the `r2` axis.
pub fn boundary_hausdorff(a: &RegionPolyline, b: &RegionPolyline) -> f64 {
    let (pa, pb) = (boundary_chain(a), boundary_chain(b));
    if pa.is_empty() || pb.is_empty() {
        return f64::INFINITY;
    }
    directed_hausdorff(&pa, &pb).max(directed_hausdorff(&pb, &pa))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(kind: RegionKind, pts: &[(f64, f64)]) -> RegionPolyline {
        RegionPolyline {
            kind,
            vertices: pts
                .iter()
                .map(|&(x, y)| CertifiedVertex {
                    point: RatePoint::new(x, y),
                    uplink: None,
                    downlink: None,
                })
                .collect(),
            resolution: 0,
            max_gap: None,
        }
    }

    fn square() -> RegionPolyline {
        poly(RegionKind::ConvR1, &[(0.0, 1.0), (1.0, 1.0), (1.0, 0.0)])
    }

    #[test]
    fn hull_of_square_corners() {
        let pts: Vec<(RatePoint, usize)> = [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0), (0.0, 1.0), (1.0, 0.0), (0.3, 0.9)]
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (RatePoint::new(x, y), i))
            .collect();
        let h = pareto_hull(&pts, true);
        let got: Vec<(f64, f64)> = h.iter().map(|(p, _)| (p.r1, p.r2)).collect();
        assert_eq!(got, vec![(0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
    }

    #[test]
    fn hull_drops_collinear_and_interior() {
        let pts: Vec<(RatePoint, ())> = [(0.0, 1.0), (0.5, 0.5), (1.0, 0.0), (0.25, 0.75), (0.2, 0.2)]
            .iter()
            .map(|&(x, y)| (RatePoint::new(x, y), ()))
            .collect();
        let h = pareto_hull(&pts, true);
        assert_eq!(h.len(), 2);
    }

    #[test]
    fn hull_degenerate_cases() {
        let origin = [(RatePoint::ORIGIN, 0)];
        assert_eq!(pareto_hull(&origin, true).len(), 1);
        let seg = [(RatePoint::ORIGIN, 0), (RatePoint::new(0.7, 0.0), 1)];
        let h = pareto_hull(&seg, true);
        assert_eq!(h.iter().map(|(_, t)| *t).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn envelope_and_contains() {
        let sq = square();
        assert_eq!(sq.envelope(0.3), Some(1.0));
        assert_eq!(sq.envelope(1.0), Some(1.0));
        assert_eq!(sq.envelope(1.1), None);
        let tol = 1e-6;
        assert!(region_contains(&sq, &RatePoint::ORIGIN, 0.0));
        assert!(region_contains(&sq, &RatePoint::new(1.0, 1.0), 0.0));
        assert!(!region_contains(&sq, &RatePoint::new(1.0 + 2.0 * tol, 0.0), tol));
        assert!(region_contains(&sq, &RatePoint::new(1.0 + 0.5 * tol, 0.0), tol));

        let frontier = poly(RegionKind::R2Frontier, &[(0.4, 0.8), (0.8, 0.4)]);
        assert!(region_contains(&frontier, &RatePoint::new(0.0, 0.8), 0.0));
        assert!(region_contains(&frontier, &RatePoint::new(0.6, 0.6), 1e-12));
        assert!(!region_contains(&frontier, &RatePoint::new(0.6, 0.61), 0.0));
    }

    #[test]
    fn intersection_examples() {
        let sq = square();
        let both = intersect_regions(&sq, &sq);
        assert_eq!(both.points(), sq.points());

        let f = poly(RegionKind::R2Frontier, &[(0.531, 0.531)]);
        let cap = intersect_regions(&sq, &f);
        assert_eq!(cap.kind, RegionKind::Capacity);
        let got: Vec<(f64, f64)> = cap.points().iter().map(|p| (p.r1, p.r2)).collect();
        assert_eq!(got, vec![(0.0, 0.531), (0.531, 0.531), (0.531, 0.0)]);

        let origin = poly(RegionKind::ConvR1, &[(0.0, 0.0)]);
        let o = intersect_regions(&sq, &origin);
        assert_eq!(o.points(), vec![RatePoint::ORIGIN]);
    }

    #[test]
    fn intersection_crossing_point() {
        // Diamond edge x + y = 1 against the flat cap y = 0.8 on [0, 0.6].
        let diamond = poly(RegionKind::ConvR1, &[(0.0, 1.0), (1.0, 0.0)]);
        let cap = poly(RegionKind::R2Frontier, &[(0.0, 0.8), (0.6, 0.8), (0.6, 0.0)]);
        let r = intersect_regions(&diamond, &cap);
        let pts = r.points();
        assert!(pts.iter().any(|p| (p.r1 - 0.2).abs() < 1e-12 && (p.r2 - 0.8).abs() < 1e-12), "{pts:?}");
        assert!(pts.iter().any(|p| (p.r1 - 0.6).abs() < 1e-12 && (p.r2 - 0.4).abs() < 1e-12));
        r.check_shape().unwrap();
        for p in &pts {
            assert!(region_contains(&diamond, p, 1e-12) && region_contains(&cap, p, 1e-12));
        }
    }

    #[test]
    fn hausdorff_basics() {
        let sq = square();
        assert_eq!(boundary_hausdorff(&sq, &sq), 0.0);
        let smaller = poly(RegionKind::ConvR1, &[(0.0, 0.9), (0.9, 0.9), (0.9, 0.0)]);
        // The worst point is the corner (1, 1) against (0.9, 0.9).
        assert!((boundary_hausdorff(&sq, &smaller) - 0.1 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ray_hits_boundary() {
        let sq = square();
        let (beta, seg, mu) = sq.ray_hit(RatePoint::new(0.5, 0.25)).unwrap();
        assert!((beta - 2.0).abs() < 1e-12);
        assert_eq!(seg, 1);
        assert!((mu - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ray_along_an_axis_edge() {
        let seg = poly(RegionKind::ConvR1, &[(0.0, 0.0), (1.0, 0.0)]);
        let (beta, seg_i, mu) = seg.ray_hit(RatePoint::new(0.25, 0.0)).unwrap();
        assert!((beta - 4.0).abs() < 1e-12 && seg_i == 0 && mu == 1.0);
    }
}
