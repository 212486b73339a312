//! Winding number by adaptive Gauss-Legendre quadrature of the angle
//! increment along the boundary.

use std::f64::consts::TAU;

use crate::boxes::Geometry;
use crate::geom::{Point2, Rect};
use crate::nurbs::{Orientation, RationalPiece};

pub const DEFAULT_QUAD_ORDER: usize = 16;
pub const DEFAULT_MAX_DEPTH: usize = 30;
/// Absolute tolerance (radians) for accepting a bisection level. Kept fixed
/// across levels: the leaf count grows only linearly with depth near the
/// point, so the total error stays far below 0.25.
const LOCAL_TOL: f64 = 1e-7;

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence for P_n(x) and P_n'(x).
                let (mut p0, mut p1) = (1.0, x);
                if n == 1 {
                    p1 = x;
                    p0 = 1.0;
                } else {
                    for k in 2..=n {
                        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = pk;
                    }
                }
                let pn = p1;
                let pn1 = if n == 1 { 1.0 } else { p0 };
                dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Winding {
    pub value: i64,
    /// Integral divided by `2 pi`, sign-corrected for orientation.
    pub raw: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
#[error("winding quadrature did not converge (best estimate {estimate})")]
pub struct WindingError {
    pub estimate: f64,
}

/// Indicator value of `p` from the winding number of the boundary about it.
///
/// For clockwise boundaries the sign is flipped, so the value is 1 inside
/// and 0 outside either way.
pub fn winding_number(
    p: Point2,
    geom: &Geometry,
    rule: &GaussLegendre,
    max_depth: usize,
) -> Result<Winding, WindingError> {
    let mut total = 0.0;
    let mut ok = true;
    for bx in &geom.boxes {
        let piece = &geom.pieces[bx.piece];
        let ctx = Ctx {
            piece,
            p,
            rule,
            max_depth,
        };
        let whole = ctx.quad(bx.s0, bx.s1);
        let (v, good) = ctx.adapt(bx.s0, bx.s1, bx.start, bx.end, whole, LOCAL_TOL, 0);
        total += v;
        ok &= good;
    }
    let mut raw = total / TAU;
    if geom.orientation == Orientation::Clockwise {
        raw = -raw;
    }
    let value = raw.round();
    if !ok || !raw.is_finite() || (raw - value).abs() >= 0.25 {
        return Err(WindingError { estimate: raw });
    }
    Ok(Winding {
        value: value as i64,
        raw,
    })
}

struct Ctx<'a> {
    piece: &'a RationalPiece,
    p: Point2,
    rule: &'a GaussLegendre,
    max_depth: usize,
}

impl Ctx<'_> {
    /// `d(theta)/ds` of the direction from `p` to the curve.
    fn integrand(&self, s: f64) -> f64 {
        let q = self.piece.point(s);
        let (dx, dy) = self.piece.velocity(s);
        let (rx, ry) = (q.x - self.p.x, q.y - self.p.y);
        (dy * rx - dx * ry) / (rx * rx + ry * ry)
    }

    fn quad(&self, a: f64, b: f64) -> f64 {
        self.rule.integrate(|s| self.integrand(s), a, b)
    }

    /// Bisection until the two halves agree with the whole and the point is
    /// well separated from the sub-arc (whose bounding box spans its
    /// endpoints, the sub-arc being monotone in both coordinates).
    #[allow(clippy::too_many_arguments)]
    fn adapt(&self, a: f64, b: f64, pa: Point2, pb: Point2, whole: f64, tol: f64, depth: usize) -> (f64, bool) {
        let m = 0.5 * (a + b);
        let left = self.quad(a, m);
        let right = self.quad(m, b);
        let rect = Rect::from_points(pa, pb);
        let far = rect.distance_to(self.p) >= 0.5 * rect.diagonal();
        if far && (left + right - whole).abs() <= tol {
            return (left + right, true);
        }
        if depth >= self.max_depth || !(m > a && m < b) {
            return (left + right, false);
        }
        let pm = self.piece.point(m);
        let (l, okl) = self.adapt(a, m, pa, pm, left, tol, depth + 1);
        let (r, okr) = self.adapt(m, b, pm, pb, right, tol, depth + 1);
        (l + r, okl && okr)
    }
}
