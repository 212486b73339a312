//! Reference classifier: the boundary flattened into a dense polygon and
//! classical even-odd ray casting. Nothing here touches the monotone boxes,
//! the rational pieces or the root finder.

use crate::geom::Point2;
use crate::nurbs::BoundaryCurve;

pub const MAX_VERTICES: usize = 100_000_000;
/// Curved spans get at least this many steps before the flatness test is
/// trusted.
const MIN_STEPS: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("polygon would exceed {MAX_VERTICES} vertices at tolerance {eps:e}; use a larger tolerance")]
    TooManyVertices { eps: f64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// Closed polygon approximating a boundary; the closing edge from the last
/// vertex back to the first is implicit.
#[derive(Clone, Debug)]
pub struct PolygonApprox {
    pub vertices: Vec<Point2>,
    pub tolerance: f64,
}

impl PolygonApprox {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let v = &self.vertices;
        (0..v.len()).map(move |i| (v[i], v[(i + 1) % v.len()]))
    }
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.x - (a.x + t * dx)).hypot(p.y - (a.y + t * dy))
}

/// Flattens every knot span into the fewest equal parameter steps for which
/// the curve at the quarter points and the midpoint of each step lies within
/// `eps` of its chord. The count is found by doubling, then bisection.
pub fn polygonize(curve: &BoundaryCurve, eps: f64) -> Result<PolygonApprox, OracleError> {
    if !(eps > 0.0) {
        return Err(OracleError::BadTolerance(eps));
    }
    let mut out = Vec::new();
    for side in curve.sides() {
        let eval = |t: f64| side.eval(t).expect("parameter inside the side");
        let knots = side.knots();
        let min_steps = if side.degree() > 1 { MIN_STEPS } else { 1 };
        for i in side.spans() {
            let (t0, t1) = (knots[i], knots[i + 1]);
            let passes = |n: usize| flat_enough(&eval, t0, t1, n, eps);
            let mut hi = min_steps;
            while !passes(hi) {
                hi *= 2;
                if out.len() + hi > MAX_VERTICES {
                    return Err(OracleError::TooManyVertices { eps });
                }
            }
            let mut lo = (hi / 2).max(min_steps - 1);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if passes(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.extend((0..hi).map(|k| eval(step_param(t0, t1, k, hi))));
        }
    }
    if out.len() > MAX_VERTICES {
        return Err(OracleError::TooManyVertices { eps });
    }
    Ok(PolygonApprox {
        vertices: out,
        tolerance: eps,
    })
}

fn step_param(t0: f64, t1: f64, k: usize, n: usize) -> f64 {
    if k == n {
        t1
    } else {
        t0 + (t1 - t0) * (k as f64 / n as f64)
    }
}

fn flat_enough(eval: &impl Fn(f64) -> Point2, t0: f64, t1: f64, n: usize, eps: f64) -> bool {
    let mut a = eval(t0);
    for k in 0..n {
        let (ta, tb) = (step_param(t0, t1, k, n), step_param(t0, t1, k + 1, n));
        let b = eval(tb);
        for f in [0.25, 0.5, 0.75] {
            if segment_distance(eval(ta + f * (tb - ta)), a, b) > eps {
                return false;
            }
        }
        a = b;
    }
    true
}

/// Even-odd test with a rightward horizontal ray.
pub fn point_in_polygon(p: Point2, poly: &[Point2]) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// Points ordered by `y` with their input positions.
fn sorted_by_y(points: &[Point2]) -> Vec<(f64, u32)> {
    let mut s: Vec<(f64, u32)> = points.iter().enumerate().map(|(i, p)| (p.y, i as u32)).collect();
    s.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    s
}

/// Same result as [`point_in_polygon`] for every point, computed edge by
/// edge over the points sorted by `y`.
pub fn points_in_polygon(points: &[Point2], poly: &[Point2]) -> Vec<bool> {
    let s = sorted_by_y(points);
    let mut inside = vec![false; points.len()];
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + n - 1) % n]);
        let (lo_y, hi_y) = if a.y < b.y { (a.y, b.y) } else { (b.y, a.y) };
        // (a.y > y) != (b.y > y)  <=>  lo_y <= y < hi_y
        let lo = s.partition_point(|e| e.0 < lo_y);
        let hi = s.partition_point(|e| e.0 < hi_y);
        for &(y, k) in &s[lo..hi] {
            let p = points[k as usize];
            if p.x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x {
                inside[k as usize] ^= true;
            }
        }
    }
    inside
}

/// Flags points within `band` of the closed polyline.
pub fn near_polyline(points: &[Point2], poly: &PolygonApprox, band: f64) -> Vec<bool> {
    let s = sorted_by_y(points);
    let mut near = vec![false; points.len()];
    for (a, b) in poly.edges() {
        let lo = s.partition_point(|e| e.0 < a.y.min(b.y) - band);
        let hi = s.partition_point(|e| e.0 <= a.y.max(b.y) + band);
        let (x0, x1) = (a.x.min(b.x) - band, a.x.max(b.x) + band);
        for &(_, k) in &s[lo..hi] {
            let p = points[k as usize];
            if !near[k as usize] && p.x >= x0 && p.x <= x1 && segment_distance(p, a, b) <= band {
                near[k as usize] = true;
            }
        }
    }
    near
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains;

    #[test]
    fn square_needs_no_refinement() {
        for eps in [1e-2, 1e-8] {
            let poly = polygonize(&domains::square(), eps).unwrap();
            assert_eq!(poly.len(), 4);
        }
    }

    #[test]
    fn circle_chords_within_tolerance() {
        let eps = 1e-4;
        let poly = polygonize(&domains::circle(), eps).unwrap();
        for (a, b) in poly.edges() {
            assert!((a.x.hypot(a.y) - 1.0).abs() < 1e-14);
            // Sagitta of the chord against the analytic circle.
            let m = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
            assert!(1.0 - m.x.hypot(m.y) <= eps * (1.0 + 1e-9));
        }
        let fine = polygonize(&domains::circle(), 1e-6).unwrap();
        let ratio = fine.len() as f64 / poly.len() as f64;
        assert!((5.0..=15.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn pnpoly_examples() {
        let sq = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].map(Point2::from);
        assert!(point_in_polygon(Point2::new(0.5, 0.5), &sq));
        assert!(!point_in_polygon(Point2::new(1.5, 0.5), &sq));
        let circle = polygonize(&domains::circle(), 1e-8).unwrap();
        assert!(point_in_polygon(Point2::new(0.3, 0.2), &circle.vertices));
        assert!(!point_in_polygon(Point2::new(0.8, 0.8), &circle.vertices));
    }

    #[test]
    fn batch_matches_single_point() {
        let poly = polygonize(&domains::multispan(), 1e-5).unwrap();
        let n = 80;
        let pts: Vec<Point2> = (0..n * n)
            .map(|k| {
                Point2::new(
                    -1.5 + 3.0 * (k % n) as f64 / n as f64,
                    -1.5 + 3.0 * (k / n) as f64 / n as f64,
                )
            })
            .collect();
        let batch = points_in_polygon(&pts, &poly.vertices);
        for (p, &b) in pts.iter().zip(&batch) {
            assert_eq!(point_in_polygon(*p, &poly.vertices), b);
        }
        assert!(batch.iter().any(|&b| b) && batch.iter().any(|&b| !b));
    }

    #[test]
    fn band_detection() {
        let poly = polygonize(&domains::square(), 1e-8).unwrap();
        let pts = [(0.5, 1e-7), (0.5, 2e-6), (1.0 + 5e-7, 0.3), (0.5, 0.5)].map(Point2::from);
        assert_eq!(near_polyline(&pts, &poly, 1e-6), vec![true, false, true, false]);
    }
}
