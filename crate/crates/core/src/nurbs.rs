//! NURBS sides, the closed boundary they form, and per-span rational pieces.

use std::f64::consts::PI;

use crate::error::{Error, Result, SideError};
use crate::geom::{Point2, Rect};
use crate::poly::{quotient_derivative_numerator, Polynomial};
use crate::roots::{real_roots_in_interval, RootError, EPS_LEAD, EPS_ROOT};

/// Closure tolerance relative to the boundary's bounding-box diagonal.
pub const EPS_CLOSE_REL: f64 = 1e-10;
/// Relative agreement required between an extracted piece and the side it came from.
pub const EPS_PIECE: f64 = 1e-10;
/// Polyline density used to measure orientation.
pub const ORIENTATION_SAMPLES: usize = 4096;

/// Index of the knot span containing `t`: `knots[span] <= t < knots[span + 1]`,
/// with `t` equal to the last knot assigned to the last non-empty span.
///
/// `n` is the index of the last control point.
pub fn find_span(knots: &[f64], p: usize, n: usize, t: f64) -> usize {
    if t >= knots[n + 1] {
        // Last non-empty span.
        let mut span = n;
        while span > p && knots[span] == knots[span + 1] {
            span -= 1;
        }
        return span;
    }
    if t <= knots[p] {
        let mut span = p;
        while span < n && knots[span] == knots[span + 1] {
            span += 1;
        }
        return span;
    }
    // knots[lo] <= t < knots[hi]
    let (mut lo, mut hi) = (p, n + 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if t < knots[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// The `p + 1` basis functions that may be non-zero on `span`, evaluated at
/// `t` (Cox-de Boor triangle). `t` may lie anywhere in the closed span;
/// outside it the values are the polynomial continuation.
pub fn basis_funs(knots: &[f64], p: usize, span: usize, t: f64) -> Vec<f64> {
    let mut n = vec![0.0; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    n[0] = 1.0;
    for j in 1..=p {
        left[j] = t - knots[span + 1 - j];
        right[j] = knots[span + j] - t;
        let mut saved = 0.0;
        for r in 0..j {
            let temp = n[r] / (right[r + 1] + left[j - r]);
            n[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        n[j] = saved;
    }
    n
}

/// Non-zero B-spline basis values at `t` together with the span index; the
/// values belong to control points `span - p ..= span`.
pub fn eval_basis(knots: &[f64], p: usize, t: f64) -> Result<(usize, Vec<f64>)> {
    let (lo, hi) = (knots[0], knots[knots.len() - 1]);
    if !(t >= lo && t <= hi) {
        return Err(Error::ParameterOutOfRange { t, lo, hi });
    }
    let n = knots.len() - p - 2;
    let span = find_span(knots, p, n, t);
    Ok((span, basis_funs(knots, p, span, t)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct NurbsSide {
    degree: usize,
    knots: Vec<f64>,
    control_points: Vec<Point2>,
    weights: Vec<f64>,
}

impl NurbsSide {
    pub fn new(
        degree: usize,
        knots: Vec<f64>,
        control_points: Vec<Point2>,
        weights: Vec<f64>,
    ) -> Result<Self, SideError> {
        if degree == 0 {
            return Err(SideError::DegreeZero);
        }
        if weights.len() != control_points.len() {
            return Err(SideError::WeightCount {
                weights: weights.len(),
                points: control_points.len(),
            });
        }
        let expected = control_points.len() + degree + 1;
        if knots.len() != expected || control_points.len() < degree + 1 {
            return Err(SideError::KnotCount {
                expected: expected.max(2 * degree + 2),
                found: knots.len(),
            });
        }
        if knots.iter().any(|k| !k.is_finite())
            || weights.iter().any(|w| !w.is_finite())
            || control_points.iter().any(|c| !c.is_finite())
        {
            return Err(SideError::NonFinite);
        }
        if let Some(i) = knots.windows(2).position(|w| w[1] < w[0]) {
            return Err(SideError::KnotsDecreasing(i + 1));
        }
        let last = knots.len() - 1;
        if knots[..=degree].iter().any(|&k| k != knots[0]) || knots[last - degree..].iter().any(|&k| k != knots[last]) {
            return Err(SideError::NotClamped);
        }
        if knots[0] == knots[last] {
            return Err(SideError::NoSpan);
        }
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, &w)| w <= 0.0) {
            return Err(SideError::NonPositiveWeight { index, value });
        }
        Ok(Self {
            degree,
            knots,
            control_points,
            weights,
        })
    }

    /// Straight segment `a -> b` as a degree-1 side.
    pub fn segment(a: Point2, b: Point2) -> Self {
        Self::new(1, vec![0.0, 0.0, 1.0, 1.0], vec![a, b], vec![1.0, 1.0]).expect("segment is always a valid side")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn control_points(&self) -> &[Point2] {
        &self.control_points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn param_interval(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    pub fn start(&self) -> Point2 {
        self.control_points[0]
    }

    pub fn end(&self) -> Point2 {
        self.control_points[self.control_points.len() - 1]
    }

    /// Indices `i` of non-empty spans `[knots[i], knots[i + 1]]`.
    pub fn spans(&self) -> impl Iterator<Item = usize> + '_ {
        (self.degree..self.control_points.len()).filter(|&i| self.knots[i] < self.knots[i + 1])
    }

    /// Weighted numerators and the denominator at `t`, using the basis of `span`.
    fn homogeneous(&self, span: usize, t: f64) -> (f64, f64, f64) {
        let basis = basis_funs(&self.knots, self.degree, span, t);
        let first = span - self.degree;
        let (mut x, mut y, mut w) = (0.0, 0.0, 0.0);
        for (k, b) in basis.iter().enumerate() {
            let lw = b * self.weights[first + k];
            let c = self.control_points[first + k];
            x += lw * c.x;
            y += lw * c.y;
            w += lw;
        }
        (x, y, w)
    }

    pub fn eval(&self, t: f64) -> Result<Point2> {
        let (span, _) = eval_basis(&self.knots, self.degree, t)?;
        let (x, y, w) = self.homogeneous(span, t);
        Ok(Point2::new(x / w, y / w))
    }

    /// The same point set traversed backwards.
    pub fn reversed(&self) -> Self {
        let (lo, hi) = self.param_interval();
        Self {
            degree: self.degree,
            knots: self.knots.iter().rev().map(|k| lo + hi - k).collect(),
            control_points: self.control_points.iter().rev().copied().collect(),
            weights: self.weights.iter().rev().copied().collect(),
        }
    }

    /// Applies a map to the control points. Affine maps commute with
    /// rational B-spline evaluation.
    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Self {
        Self {
            control_points: self.control_points.iter().map(|&c| f(c)).collect(),
            ..self.clone()
        }
    }

    pub fn scale_weights(&self, c: f64) -> Result<Self, SideError> {
        Self::new(
            self.degree,
            self.knots.clone(),
            self.control_points.clone(),
            self.weights.iter().map(|w| w * c).collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

/// A closed loop of NURBS sides. Side `k` (0-based) owns the global
/// parameter interval `[k, k + 1]`.
#[derive(Clone, Debug)]
pub struct BoundaryCurve {
    sides: Vec<NurbsSide>,
    orientation: Orientation,
    eps_close: f64,
}

impl BoundaryCurve {
    pub fn new(sides: Vec<NurbsSide>) -> Result<Self> {
        Self::build(sides, None)
    }

    /// Like [`BoundaryCurve::new`] with an absolute closure tolerance.
    pub fn with_tolerance(sides: Vec<NurbsSide>, eps_close: f64) -> Result<Self> {
        Self::build(sides, Some(eps_close))
    }

    fn build(sides: Vec<NurbsSide>, eps_close: Option<f64>) -> Result<Self> {
        let (orientation, eps_close) = check_loop(&sides, eps_close)?;
        Ok(Self {
            sides,
            orientation,
            eps_close,
        })
    }

    pub fn sides(&self) -> &[NurbsSide] {
        &self.sides
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn eps_close(&self) -> f64 {
        self.eps_close
    }

    /// `[t_min, t_max]` of the glued parametrization.
    pub fn global_interval(&self) -> (f64, f64) {
        (0.0, self.sides.len() as f64)
    }

    /// Evaluates at a global parameter in `[0, K]`.
    pub fn eval(&self, t: f64) -> Result<Point2> {
        let k_max = self.sides.len() as f64;
        if !(0.0..=k_max).contains(&t) {
            return Err(Error::ParameterOutOfRange { t, lo: 0.0, hi: k_max });
        }
        let k = (t.floor() as usize).min(self.sides.len() - 1);
        let side = &self.sides[k];
        let (lo, hi) = side.param_interval();
        let local = (lo + (t - k as f64) * (hi - lo)).clamp(lo, hi);
        side.eval(local)
    }

    pub fn reversed(&self) -> Result<Self> {
        Self::new(self.sides.iter().rev().map(NurbsSide::reversed).collect())
    }

    pub fn map_points(&self, f: impl Fn(Point2) -> Point2 + Copy) -> Result<Self> {
        Self::new(self.sides.iter().map(|s| s.map_points(f)).collect())
    }

    /// `n` points equispaced in the global parameter, first point repeated at the end omitted.
    pub fn sample(&self, n: usize) -> Vec<Point2> {
        sample_sides(&self.sides, n)
    }
}

fn sample_sides(sides: &[NurbsSide], n: usize) -> Vec<Point2> {
    let k = sides.len() as f64;
    (0..n)
        .map(|i| {
            let t = k * i as f64 / n as f64;
            let idx = (t.floor() as usize).min(sides.len() - 1);
            let side = &sides[idx];
            let (lo, hi) = side.param_interval();
            side.eval((lo + (t - idx as f64) * (hi - lo)).clamp(lo, hi))
                .expect("sample parameter inside side interval")
        })
        .collect()
}

/// Signed area of a closed polyline (positive when counterclockwise).
pub fn signed_area(points: &[Point2]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| {
            let a = points[i];
            let b = points[(i + 1) % n];
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
}

/// Checks closure and side abutment, returning the orientation measured on
/// a dense polyline. Without an explicit tolerance, `eps_close` is
/// `EPS_CLOSE_REL` times the sampled bounding-box diagonal.
pub fn validate_boundary(sides: &[NurbsSide], eps_close: Option<f64>) -> Result<Orientation> {
    check_loop(sides, eps_close).map(|(o, _)| o)
}

fn check_loop(sides: &[NurbsSide], eps_close: Option<f64>) -> Result<(Orientation, f64)> {
    if sides.is_empty() {
        return Err(Error::NoSides);
    }
    // Sides may come from deserialization that bypassed `NurbsSide::new`.
    for (k, s) in sides.iter().enumerate() {
        NurbsSide::new(s.degree, s.knots.clone(), s.control_points.clone(), s.weights.clone())
            .map_err(|source| Error::InvalidSide { side: k, source })?;
    }
    let samples = sample_sides(sides, ORIENTATION_SAMPLES);
    let eps = eps_close.unwrap_or_else(|| {
        let diag = Rect::bounding(
            samples
                .iter()
                .copied()
                .chain(sides.iter().flat_map(|s| [s.start(), s.end()])),
        )
        .diagonal();
        EPS_CLOSE_REL * diag
    });
    for k in 1..sides.len() {
        let gap = sides[k - 1].end().dist(sides[k].start());
        if gap > eps {
            return Err(Error::SidesDoNotAbut {
                prev: k - 1,
                side: k,
                gap,
            });
        }
    }
    let gap = sides[sides.len() - 1].end().dist(sides[0].start());
    if gap > eps {
        return Err(Error::NotClosed { gap });
    }
    let area = signed_area(&samples);
    if area == 0.0 {
        return Err(Error::ZeroArea);
    }
    let orientation = if area > 0.0 {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    };
    Ok((orientation, eps))
}

/// One knot span of one side as local rationals `x = u/v`, `y = w/z` in the
/// normalized parameter `s in [0, 1]`.
#[derive(Clone, Debug)]
pub struct RationalPiece {
    /// Global parameter interval `[a, b]`.
    pub interval: (f64, f64),
    pub u: Polynomial,
    pub v: Polynomial,
    pub w: Polynomial,
    pub z: Polynomial,
    /// `u' v - u v'` in `s`: same sign as `dx/dt`.
    pub dx_num: Polynomial,
    /// `w' z - w z'` in `s`: same sign as `dy/dt`.
    pub dy_num: Polynomial,
    pub side_index: usize,
    pub span_index: usize,
}

impl RationalPiece {
    pub fn new(
        interval: (f64, f64),
        u: Polynomial,
        v: Polynomial,
        w: Polynomial,
        z: Polynomial,
        side_index: usize,
        span_index: usize,
    ) -> Self {
        let dx_num = quotient_derivative_numerator(&u, &v);
        let dy_num = quotient_derivative_numerator(&w, &z);
        Self {
            interval,
            u,
            v,
            w,
            z,
            dx_num,
            dy_num,
            side_index,
            span_index,
        }
    }

    #[inline]
    pub fn x(&self, s: f64) -> f64 {
        self.u.eval(s) / self.v.eval(s)
    }

    #[inline]
    pub fn y(&self, s: f64) -> f64 {
        self.w.eval(s) / self.z.eval(s)
    }

    pub fn point(&self, s: f64) -> Point2 {
        Point2::new(self.x(s), self.y(s))
    }

    /// `(dx/ds, dy/ds)`.
    pub fn velocity(&self, s: f64) -> (f64, f64) {
        let v = self.v.eval(s);
        let z = self.z.eval(s);
        (self.dx_num.eval(s) / (v * v), self.dy_num.eval(s) / (z * z))
    }

    pub fn global_param(&self, s: f64) -> f64 {
        self.interval.0 + s * (self.interval.1 - self.interval.0)
    }
}

/// Chebyshev points of the first kind mapped to `(0, 1)`.
fn chebyshev_nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| 0.5 * (1.0 - ((2 * k + 1) as f64 * PI / (2 * n) as f64).cos()))
        .collect()
}

/// One rational piece per non-empty knot span of every side.
pub fn extract_pieces(curve: &BoundaryCurve) -> Result<Vec<RationalPiece>> {
    let mut pieces = Vec::new();
    for (k, side) in curve.sides().iter().enumerate() {
        let p = side.degree();
        let (t0, t1) = side.param_interval();
        let len = t1 - t0;
        let nodes = chebyshev_nodes(p + 1);
        for span in side.spans() {
            let (ka, kb) = (side.knots[span], side.knots[span + 1]);
            let mut xs = Vec::with_capacity(p + 1);
            let mut ys = Vec::with_capacity(p + 1);
            let mut ws = Vec::with_capacity(p + 1);
            for &s in &nodes {
                let (x, y, w) = side.homogeneous(span, ka + s * (kb - ka));
                xs.push(x);
                ys.push(y);
                ws.push(w);
            }
            let u = Polynomial::interpolate(&nodes, &xs).deflated(EPS_LEAD);
            let w = Polynomial::interpolate(&nodes, &ys).deflated(EPS_LEAD);
            let den = Polynomial::interpolate(&nodes, &ws).deflated(EPS_LEAD);
            match real_roots_in_interval(&den, 0.0, 1.0, EPS_ROOT) {
                Ok(r) if r.is_empty() => {}
                Ok(_) | Err(RootError::IdenticallyZero) => return Err(Error::VanishingDenominator { side: k, span }),
                Err(source) => return Err(Error::Roots { side: k, span, source }),
            }
            let interval = (k as f64 + (ka - t0) / len, k as f64 + (kb - t0) / len);
            let piece = RationalPiece::new(interval, u, den.clone(), w, den, k, span);
            check_piece(side, &piece, ka, kb)?;
            pieces.push(piece);
        }
    }
    Ok(pieces)
}

fn check_piece(side: &NurbsSide, piece: &RationalPiece, ka: f64, kb: f64) -> Result<()> {
    let n = piece.u.degree().max(piece.v.degree()) + piece.v.degree() + 2;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let s = i as f64 / (n - 1) as f64;
        let (x, y, w) = side.homogeneous(piece.span_index, ka + s * (kb - ka));
        let (x, y) = (x / w, y / w);
        let q = piece.point(s);
        worst = worst
            .max((q.x - x).abs() / (1.0 + x.abs()))
            .max((q.y - y).abs() / (1.0 + y.abs()));
    }
    if worst > EPS_PIECE || !worst.is_finite() {
        return Err(Error::PieceMismatch {
            side: piece.side_index,
            span: piece.span_index,
            deviation: worst,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic_basis_at_ends_and_middle() {
        let knots = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let (_, b0) = eval_basis(&knots, 2, 0.0).unwrap();
        assert_eq!(b0, vec![1.0, 0.0, 0.0]);
        let (span, b) = eval_basis(&knots, 2, 0.5).unwrap();
        assert_eq!(span, 2);
        // Bernstein polynomials of degree 2 at 1/2.
        assert_abs_diff_eq!(b[0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(b[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b[2], 0.25, epsilon = 1e-15);
        let (_, b1) = eval_basis(&knots, 2, 1.0).unwrap();
        assert_eq!(b1, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn basis_outside_range_is_an_error() {
        let knots = [0.0, 0.0, 1.0, 1.0];
        assert!(matches!(
            eval_basis(&knots, 1, 1.5),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn find_span_skips_repeated_knots() {
        let knots = [0.0, 0.0, 0.0, 0.5, 0.5, 1.0, 1.0, 1.0];
        assert_eq!(find_span(&knots, 2, 4, 0.0), 2);
        assert_eq!(find_span(&knots, 2, 4, 0.5), 4);
        assert_eq!(find_span(&knots, 2, 4, 1.0), 4);
    }

    #[test]
    fn linear_side_midpoint() {
        let side = NurbsSide::segment(Point2::new(0.0, 0.0), Point2::new(1.0, 0.0));
        assert_eq!(side.eval(0.5).unwrap(), Point2::new(0.5, 0.0));
    }

    #[test]
    fn circle_is_unit_everywhere() {
        let c = domains::circle();
        let side = &c.sides()[0];
        assert_eq!(side.eval(0.0).unwrap(), Point2::new(1.0, 0.0));
        for i in 0..=1000 {
            let p = side.eval(i as f64 / 1000.0).unwrap();
            assert_abs_diff_eq!(p.x.hypot(p.y), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn weight_scaling_leaves_curve_unchanged() {
        let side = domains::circle().sides()[0].clone();
        let scaled = side.scale_weights(10.0).unwrap();
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let (a, b) = (side.eval(t).unwrap(), scaled.eval(t).unwrap());
            assert_abs_diff_eq!(a.x, b.x, epsilon = 1e-13);
            assert_abs_diff_eq!(a.y, b.y, epsilon = 1e-13);
        }
    }

    #[test]
    fn side_validation_errors() {
        let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)];
        assert_eq!(
            NurbsSide::new(1, vec![0.0, 0.0, 1.0, 1.0], pts.clone(), vec![1.0, 0.0]),
            Err(SideError::NonPositiveWeight { index: 1, value: 0.0 })
        );
        assert!(matches!(
            NurbsSide::new(1, vec![0.0, 0.0, 1.0], pts.clone(), vec![1.0, 1.0]),
            Err(SideError::KnotCount { .. })
        ));
        assert_eq!(
            NurbsSide::new(1, vec![0.0, 0.5, 1.0, 1.0], pts.clone(), vec![1.0, 1.0]),
            Err(SideError::NotClamped)
        );
        assert_eq!(
            NurbsSide::new(0, vec![0.0, 1.0], pts[..1].to_vec(), vec![1.0]),
            Err(SideError::DegreeZero)
        );
    }

    #[test]
    fn orientation_detection() {
        let c = domains::circle();
        assert_eq!(c.orientation(), Orientation::CounterClockwise);
        assert_eq!(c.reversed().unwrap().orientation(), Orientation::Clockwise);
    }

    #[test]
    fn perturbed_circle_is_not_closed() {
        let circle = domains::circle();
        let side = &circle.sides()[0];
        let mut pts = side.control_points().to_vec();
        pts.last_mut().unwrap().x += 1.0;
        let broken = NurbsSide::new(2, side.knots().to_vec(), pts, side.weights().to_vec()).unwrap();
        assert!(matches!(BoundaryCurve::new(vec![broken]), Err(Error::NotClosed { .. })));
    }

    #[test]
    fn non_abutting_sides_are_rejected() {
        let o = Point2::new(0.0, 0.0);
        let sides = vec![
            NurbsSide::segment(o, Point2::new(1.0, 0.0)),
            NurbsSide::segment(Point2::new(1.0, 0.1), Point2::new(0.0, 1.0)),
            NurbsSide::segment(Point2::new(0.0, 1.0), o),
        ];
        assert!(matches!(
            BoundaryCurve::new(sides),
            Err(Error::SidesDoNotAbut { prev: 0, side: 1, .. })
        ));
    }

    #[test]
    fn segment_piece_is_linear_over_one() {
        let pieces = extract_pieces(&domains::square()).unwrap();
        assert_eq!(pieces.len(), 4);
        for p in &pieces {
            assert!(p.u.degree() <= 1 && p.w.degree() <= 1);
            assert_eq!(p.v.degree(), 0);
            assert_abs_diff_eq!(p.v.coeffs()[0], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn circle_pieces_reproduce_quarter_arcs() {
        let c = domains::circle();
        let pieces = extract_pieces(&c).unwrap();
        assert_eq!(pieces.len(), 4);
        for piece in &pieces {
            for i in 0..100 {
                let s = i as f64 / 99.0;
                let q = piece.point(s);
                let e = c.eval(piece.global_param(s)).unwrap();
                assert_abs_diff_eq!(q.x, e.x, epsilon = 1e-12);
                assert_abs_diff_eq!(q.y, e.y, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn cubic_spline_pieces_have_unit_denominator() {
        let pts: Vec<Point2> = [(0.0, 0.0), (1.0, 2.0), (2.0, -1.0), (3.0, 1.0), (4.0, 0.0), (5.0, 2.0)]
            .into_iter()
            .map(Point2::from)
            .collect();
        let knots = vec![0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 3.0, 3.0, 3.0];
        let side = NurbsSide::new(3, knots, pts, vec![1.0; 6]).unwrap();
        let closing = NurbsSide::segment(Point2::new(5.0, 2.0), Point2::new(0.0, 0.0));
        let curve = BoundaryCurve::new(vec![side, closing]).unwrap();
        let pieces = extract_pieces(&curve).unwrap();
        assert_eq!(pieces.iter().filter(|p| p.side_index == 0).count(), 3);
        for p in pieces.iter().filter(|p| p.side_index == 0) {
            assert!(p.u.degree() <= 3);
            assert_eq!(p.v.degree(), 0);
            assert_abs_diff_eq!(p.v.coeffs()[0], 1.0, epsilon = 1e-14);
        }
    }
}
