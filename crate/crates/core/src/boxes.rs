//! Monotone boxes: a cover of the boundary by axis-aligned rectangles, in each
//! of which both coordinates are constant or strictly monotone along the
//! curve, plus the critical abscissas/ordinates where an axis-parallel ray
//! may touch the boundary without crossing it.

use crate::error::{Error, Result};
use crate::geom::{Point2, Rect};
use crate::nurbs::{extract_pieces, BoundaryCurve, Orientation, RationalPiece};
use crate::poly::Polynomial;
use crate::roots::{real_roots_in_interval, RootError, EPS_ROOT};

/// Default number of equal sub-boxes per monotone interval.
pub const DEFAULT_REFINE: usize = 4;
/// A coordinate varying by less than this (relative to the boundary diagonal)
/// over a box is treated as constant.
pub const EPS_DEG_REL: f64 = 1e-12;
/// Critical values closer than this (relative to the diagonal) are merged.
pub const EPS_SEP_REL: f64 = 1e-10;
/// Criticality tolerance relative to the global box width (height for `y`).
pub const TOL_CRIT_REL: f64 = 1e-9;
/// Derivative roots closer than this to a piece end do not split the piece.
const EPS_SPLIT: f64 = 1e-12;
/// One-sided derivative numerators below this (relative) count as zero.
const EPS_FLAT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
}

#[derive(Clone, Debug)]
pub struct MonotoneBox {
    /// Index of the owning piece in [`Geometry::pieces`].
    pub piece: usize,
    /// Local parameter interval inside the piece.
    pub s0: f64,
    pub s1: f64,
    /// Curve points at `s0` and `s1`. Points shared with a neighbouring box
    /// are bitwise identical.
    pub start: Point2,
    pub end: Point2,
    pub rect: Rect,
    pub x_mono: Monotonicity,
    pub y_mono: Monotonicity,
}

impl MonotoneBox {
    /// The box collapses to a vertical or horizontal segment.
    pub fn is_degenerate(&self) -> bool {
        self.x_mono == Monotonicity::Constant || self.y_mono == Monotonicity::Constant
    }
}

/// Sorted, deduplicated critical coordinates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CriticalSet {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Result of splitting one piece at the zeros of `x'` and `y'`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneSplit {
    /// `0 = s_0 < s_1 < ... < s_m = 1`.
    pub breakpoints: Vec<f64>,
    pub x_constant: bool,
    pub y_constant: bool,
    /// Parameters in `[0, 1]` where `x'` vanishes.
    pub x_tangent: Vec<f64>,
    /// Parameters in `[0, 1]` where `y'` vanishes.
    pub y_tangent: Vec<f64>,
}

impl MonotoneSplit {
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Splits a piece into intervals on which `x(s)` and `y(s)` are each constant
/// or strictly monotone.
pub fn split_monotone(piece: &RationalPiece, eps_deg: f64) -> Result<MonotoneSplit> {
    let samples = 2 * piece.u.degree().max(piece.w.degree()).max(piece.v.degree()) + 3;
    let range = |f: &dyn Fn(f64) -> f64| {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..samples {
            let v = f(i as f64 / (samples - 1) as f64);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        hi - lo
    };
    let x_constant = range(&|s| piece.x(s)) <= eps_deg;
    let y_constant = range(&|s| piece.y(s)) <= eps_deg;
    if x_constant && y_constant {
        return Err(Error::DegeneratePiece {
            side: piece.side_index,
            span: piece.span_index,
        });
    }
    let tangents = |num: &Polynomial, constant: bool| -> Result<Vec<f64>> {
        if constant {
            return Ok(Vec::new());
        }
        match real_roots_in_interval(num, 0.0, 1.0, EPS_ROOT) {
            Ok(r) => Ok(r.roots),
            Err(RootError::IdenticallyZero) => Ok(Vec::new()),
            Err(source) => Err(Error::Roots {
                side: piece.side_index,
                span: piece.span_index,
                source,
            }),
        }
    };
    let x_tangent = tangents(&piece.dx_num, x_constant)?;
    let y_tangent = tangents(&piece.dy_num, y_constant)?;

    let mut interior: Vec<f64> = x_tangent
        .iter()
        .chain(&y_tangent)
        .copied()
        .filter(|&s| s > EPS_SPLIT && s < 1.0 - EPS_SPLIT)
        .collect();
    interior.sort_by(f64::total_cmp);
    interior.dedup_by(|a, b| (*a - *b).abs() <= EPS_SPLIT);

    let mut breakpoints = Vec::with_capacity(interior.len() + 2);
    breakpoints.push(0.0);
    breakpoints.extend(interior);
    breakpoints.push(1.0);
    Ok(MonotoneSplit {
        breakpoints,
        x_constant,
        y_constant,
        x_tangent,
        y_tangent,
    })
}

/// Sign of a one-sided derivative numerator: `0` when numerically flat.
fn flat_sign(num: &Polynomial, a: &Polynomial, b: &Polynomial, s: f64) -> i8 {
    // num = a' b - a b'; compare against the size of the two products.
    let scale = (a.derivative().eval(s) * b.eval(s)).abs() + (a.eval(s) * b.derivative().eval(s)).abs();
    let v = num.eval(s);
    if v.abs() <= EPS_FLAT * scale {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Tangency values plus values at turning joins, for one axis.
///
/// `joins[i]` is the canonical point where piece `i` starts (and piece
/// `i - 1`, cyclically, ends).
pub fn collect_critical(
    pieces: &[RationalPiece],
    splits: &[MonotoneSplit],
    joins: &[Point2],
    eps_sep: f64,
) -> CriticalSet {
    let n = pieces.len();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (piece, split) in pieces.iter().zip(splits) {
        xs.extend(split.x_tangent.iter().map(|&s| piece.x(s)));
        ys.extend(split.y_tangent.iter().map(|&s| piece.y(s)));
    }

    // One-sided direction signs at piece starts and ends.
    let x_start: Vec<i8> = pieces.iter().map(|p| flat_sign(&p.dx_num, &p.u, &p.v, 0.0)).collect();
    let x_end: Vec<i8> = pieces.iter().map(|p| flat_sign(&p.dx_num, &p.u, &p.v, 1.0)).collect();
    let y_start: Vec<i8> = pieces.iter().map(|p| flat_sign(&p.dy_num, &p.w, &p.z, 0.0)).collect();
    let y_end: Vec<i8> = pieces.iter().map(|p| flat_sign(&p.dy_num, &p.w, &p.z, 1.0)).collect();

    for i in 0..n {
        let join = joins[i];
        if let Some(turning) = turning_at(i, n, |k| splits[k].x_constant, &x_start, &x_end) {
            if turning {
                xs.push(join.x);
            }
        }
        if let Some(turning) = turning_at(i, n, |k| splits[k].y_constant, &y_start, &y_end) {
            if turning {
                ys.push(join.y);
            }
        }
    }
    CriticalSet {
        x: sorted_dedup(xs, eps_sep),
        y: sorted_dedup(ys, eps_sep),
    }
}

/// Whether the coordinate reverses direction (or has a flat one-sided
/// derivative) at the start of piece `i`, skipping pieces along which the
/// coordinate is constant.
fn turning_at(i: usize, n: usize, constant: impl Fn(usize) -> bool, start: &[i8], end: &[i8]) -> Option<bool> {
    let before = (1..=n).map(|d| (i + n - d) % n).find(|&k| !constant(k))?;
    let after = (0..n).map(|d| (i + d) % n).find(|&k| !constant(k))?;
    let (l, r) = (end[before], start[after]);
    Some(l == 0 || r == 0 || l != r)
}

fn sorted_dedup(mut v: Vec<f64>, eps: f64) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= eps);
    v
}

/// Boxes sorted by `x_min` with running maxima of `x_max`, plus a second
/// ordering by `y_min` for horizontal rays.
#[derive(Clone, Debug)]
pub struct BoxIndex {
    pub x_min: Vec<f64>,
    pub x_max: Vec<f64>,
    pub y_min: Vec<f64>,
    pub y_max: Vec<f64>,
    prefix_max_x: Vec<f64>,
    /// Box indices ordered by `y_min`.
    by_y: Vec<u32>,
    y_min_sorted: Vec<f64>,
    prefix_max_y: Vec<f64>,
}

impl BoxIndex {
    fn new(boxes: &[MonotoneBox]) -> Self {
        let x_min: Vec<f64> = boxes.iter().map(|b| b.rect.x_min).collect();
        let x_max: Vec<f64> = boxes.iter().map(|b| b.rect.x_max).collect();
        let y_min: Vec<f64> = boxes.iter().map(|b| b.rect.y_min).collect();
        let y_max: Vec<f64> = boxes.iter().map(|b| b.rect.y_max).collect();
        let prefix_max_x = running_max(&x_max);
        let mut by_y: Vec<u32> = (0..boxes.len() as u32).collect();
        by_y.sort_by(|&i, &j| y_min[i as usize].total_cmp(&y_min[j as usize]).then(i.cmp(&j)));
        let y_min_sorted: Vec<f64> = by_y.iter().map(|&i| y_min[i as usize]).collect();
        let y_max_sorted: Vec<f64> = by_y.iter().map(|&i| y_max[i as usize]).collect();
        let prefix_max_y = running_max(&y_max_sorted);
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
            prefix_max_x,
            by_y,
            y_min_sorted,
            prefix_max_y,
        }
    }

    pub fn len(&self) -> usize {
        self.x_min.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_min.is_empty()
    }

    /// Boxes met by the downward ray from `(x, y)`, every box edge pushed
    /// out by `slack`: `x_min - slack <= x <= x_max + slack` and
    /// `y >= y_min - slack`. Two binary searches bound the scan.
    pub fn vertical_candidates(&self, x: f64, y: f64, slack: f64) -> impl Iterator<Item = usize> + '_ {
        let hi = self.x_min.partition_point(|&a| a - slack <= x);
        let lo = self.prefix_max_x[..hi].partition_point(|&m| m + slack < x);
        (lo..hi).filter(move |&j| self.x_max[j] + slack >= x && y >= self.y_min[j] - slack)
    }

    /// Boxes met by the leftward ray from `(x, y)`, edges pushed out by
    /// `slack`: `y_min - slack <= y <= y_max + slack` and `x >= x_min - slack`.
    pub fn horizontal_candidates(&self, x: f64, y: f64, slack: f64) -> impl Iterator<Item = usize> + '_ {
        let hi = self.y_min_sorted.partition_point(|&c| c - slack <= y);
        let lo = self.prefix_max_y[..hi].partition_point(|&m| m + slack < y);
        self.by_y[lo..hi]
            .iter()
            .map(|&j| j as usize)
            .filter(move |&j| self.y_max[j] + slack >= y && x >= self.x_min[j] - slack)
    }
}

fn running_max(v: &[f64]) -> Vec<f64> {
    let mut m = f64::NEG_INFINITY;
    v.iter()
        .map(|&x| {
            m = m.max(x);
            m
        })
        .collect()
}

/// Everything the classifier needs, built once per boundary.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub pieces: Vec<RationalPiece>,
    /// Sorted by `rect.x_min`.
    pub boxes: Vec<MonotoneBox>,
    pub critical: CriticalSet,
    pub global_box: Rect,
    pub orientation: Orientation,
    pub refine: usize,
    pub index: BoxIndex,
    /// Number of monotone intervals before refinement.
    pub monotone_intervals: usize,
}

impl Geometry {
    pub fn diagonal(&self) -> f64 {
        self.global_box.diagonal()
    }

    pub fn tol_x_crit(&self) -> f64 {
        TOL_CRIT_REL * self.global_box.width()
    }

    pub fn tol_y_crit(&self) -> f64 {
        TOL_CRIT_REL * self.global_box.height()
    }

    pub fn candidate_boxes(&self, x: f64, y: f64) -> Vec<usize> {
        self.index.vertical_candidates(x, y, 0.0).collect()
    }

    /// Sum of box areas; shrinks as refinement tightens the cover.
    pub fn total_box_area(&self) -> f64 {
        self.boxes.iter().map(|b| b.rect.area()).sum()
    }
}

/// Builds the monotone-box cover with each monotone interval split into
/// `refine` equal sub-intervals.
pub fn build_boxes(curve: &BoundaryCurve, refine: usize) -> Result<Geometry> {
    assert!(refine >= 1, "refinement must be at least 1");
    let pieces = extract_pieces(curve)?;
    let diag = Rect::bounding(curve.sample(1024)).diagonal();
    let eps_deg = EPS_DEG_REL * diag;

    let splits = pieces
        .iter()
        .map(|p| split_monotone(p, eps_deg))
        .collect::<Result<Vec<_>>>()?;

    // Canonical join points: each piece starts exactly where the previous one ends.
    let ends: Vec<Point2> = pieces.iter().map(|p| p.point(1.0)).collect();
    let joins: Vec<Point2> = (0..pieces.len())
        .map(|i| ends[(i + pieces.len() - 1) % pieces.len()])
        .collect();

    let mut boxes = Vec::new();
    let mut monotone_intervals = 0;
    for (i, (piece, split)) in pieces.iter().zip(&splits).enumerate() {
        for (lo, hi) in split.intervals() {
            monotone_intervals += 1;
            for k in 0..refine {
                let s0 = lo + (hi - lo) * k as f64 / refine as f64;
                let s1 = if k + 1 == refine {
                    hi
                } else {
                    lo + (hi - lo) * (k + 1) as f64 / refine as f64
                };
                let start = if s0 == 0.0 { joins[i] } else { piece.point(s0) };
                let end = if s1 == 1.0 { ends[i] } else { piece.point(s1) };
                let bx = make_box(i, piece, split, s0, s1, start, end, eps_deg)?;
                boxes.push(bx);
            }
        }
    }
    boxes.sort_by(|a, b| a.rect.x_min.total_cmp(&b.rect.x_min));

    let global_box = boxes.iter().fold(Rect::EMPTY, |r, b| r.union(&b.rect));
    let critical = collect_critical(&pieces, &splits, &joins, EPS_SEP_REL * diag);
    let index = BoxIndex::new(&boxes);
    Ok(Geometry {
        pieces,
        boxes,
        critical,
        global_box,
        orientation: curve.orientation(),
        refine,
        index,
        monotone_intervals,
    })
}

#[allow(clippy::too_many_arguments)]
fn make_box(
    piece_idx: usize,
    piece: &RationalPiece,
    split: &MonotoneSplit,
    s0: f64,
    s1: f64,
    start: Point2,
    end: Point2,
    eps_deg: f64,
) -> Result<MonotoneBox> {
    let mono = |constant: bool, a: f64, b: f64| {
        if constant || (b - a).abs() <= eps_deg {
            Monotonicity::Constant
        } else if b > a {
            Monotonicity::Increasing
        } else {
            Monotonicity::Decreasing
        }
    };
    let x_mono = mono(split.x_constant, start.x, end.x);
    let y_mono = mono(split.y_constant, start.y, end.y);
    let rect = Rect::from_points(start, end);

    // Endpoint extrema are only valid on a monotone interval; check the midpoint.
    let mid = piece.point(0.5 * (s0 + s1));
    let slack = 16.0 * eps_deg;
    if mid.x < rect.x_min - slack
        || mid.x > rect.x_max + slack
        || mid.y < rect.y_min - slack
        || mid.y > rect.y_max + slack
    {
        return Err(Error::PieceMismatch {
            side: piece.side_index,
            span: piece.span_index,
            deviation: rect.distance_to(mid),
        });
    }
    Ok(MonotoneBox {
        piece: piece_idx,
        s0,
        s1,
        start,
        end,
        rect,
        x_mono,
        y_mono,
    })
}
