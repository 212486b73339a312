//! Built-in demo domains.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, TAU};

use crate::geom::Point2;
use crate::nurbs::{BoundaryCurve, NurbsSide};

pub const BUILTIN_NAMES: [&str; 4] = ["circle", "square", "mixed", "multispan"];

pub fn builtin(name: &str) -> Option<BoundaryCurve> {
    match name {
        "circle" => Some(circle()),
        "square" => Some(square()),
        "mixed" => Some(mixed()),
        "multispan" => Some(multispan()),
        _ => None,
    }
}

fn pts(raw: &[(f64, f64)]) -> Vec<Point2> {
    raw.iter().copied().map(Point2::from).collect()
}

/// Exact unit circle: one rational quadratic side with 9 control points and
/// four spans, counterclockwise from `(1, 0)`.
pub fn circle() -> BoundaryCurve {
    let w = FRAC_1_SQRT_2;
    let side = NurbsSide::new(
        2,
        vec![0.0, 0.0, 0.0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1.0, 1.0, 1.0],
        pts(&[
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (-1.0, 1.0),
            (-1.0, 0.0),
            (-1.0, -1.0),
            (0.0, -1.0),
            (1.0, -1.0),
            (1.0, 0.0),
        ]),
        vec![1.0, w, 1.0, w, 1.0, w, 1.0, w, 1.0],
    )
    .expect("circle side");
    BoundaryCurve::new(vec![side]).expect("circle boundary")
}

/// Counterclockwise circular arc from angle `from` to `to` (radians, `to > from`)
/// as a rational quadratic side, one span per started quarter turn.
pub fn circular_arc(center: Point2, radius: f64, from: f64, to: f64) -> NurbsSide {
    assert!(to > from && to - from <= TAU + 1e-12);
    let spans = ((to - from) / FRAC_PI_2 - 1e-9).ceil().max(1.0) as usize;
    let step = (to - from) / spans as f64;
    let half = 0.5 * step;
    let at = |a: f64, r: f64| Point2::new(center.x + r * a.cos(), center.y + r * a.sin());
    let mut control = vec![at(from, radius)];
    let mut weights = vec![1.0];
    let mut knots = vec![0.0; 3];
    for k in 0..spans {
        let a0 = from + step * k as f64;
        control.push(at(a0 + half, radius / half.cos()));
        weights.push(half.cos());
        control.push(at(a0 + step, radius));
        weights.push(1.0);
        if k + 1 < spans {
            let kv = (k + 1) as f64 / spans as f64;
            knots.extend([kv, kv]);
        }
    }
    knots.extend([1.0; 3]);
    NurbsSide::new(2, knots, control, weights).expect("arc side")
}

/// Unit square `[0, 1]^2` as four straight sides.
pub fn square() -> BoundaryCurve {
    polygon(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
}

/// Closed polygon with one degree-1 side per edge.
pub fn polygon(vertices: &[(f64, f64)]) -> BoundaryCurve {
    let v = pts(vertices);
    let sides = (0..v.len())
        .map(|i| NurbsSide::segment(v[i], v[(i + 1) % v.len()]))
        .collect();
    BoundaryCurve::new(sides).expect("polygon boundary")
}

/// Left half of the unit disk glued to the square `[0, 1] x [-1, 1]`: a
/// rational half-circle arc, a bottom segment, and a two-span degree-1 side
/// turning the corner at `(1, 1)`.
pub fn mixed() -> BoundaryCurve {
    let w = FRAC_1_SQRT_2;
    let arc = NurbsSide::new(
        2,
        vec![0.0, 0.0, 0.0, 0.5, 0.5, 1.0, 1.0, 1.0],
        pts(&[(0.0, 1.0), (-1.0, 1.0), (-1.0, 0.0), (-1.0, -1.0), (0.0, -1.0)]),
        vec![1.0, w, 1.0, w, 1.0],
    )
    .expect("arc side");
    let bottom = NurbsSide::segment(Point2::new(0.0, -1.0), Point2::new(1.0, -1.0));
    let right_top = NurbsSide::new(
        1,
        vec![0.0, 0.0, 0.5, 1.0, 1.0],
        pts(&[(1.0, -1.0), (1.0, 1.0), (0.0, 1.0)]),
        vec![1.0; 3],
    )
    .expect("polyline side");
    BoundaryCurve::new(vec![arc, bottom, right_top]).expect("mixed boundary")
}

/// Smooth cubic B-spline blob: eight control points on a wobbly circle,
/// clamped uniform knots (six spans), closed with a corner at `(1, 0)`.
pub fn multispan() -> BoundaryCurve {
    let radii = [1.0, 0.7, 1.2, 0.8, 1.1, 0.6, 1.0, 0.9];
    let mut control: Vec<Point2> = radii
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let a = TAU * i as f64 / radii.len() as f64;
            Point2::new(r * a.cos(), r * a.sin())
        })
        .collect();
    control.push(control[0]);
    let spans = control.len() - 3;
    let mut knots = vec![0.0; 4];
    knots.extend((1..spans).map(|i| i as f64 / spans as f64));
    knots.extend([1.0; 4]);
    let n = control.len();
    let side = NurbsSide::new(3, knots, control, vec![1.0; n]).expect("blob side");
    BoundaryCurve::new(vec![side]).expect("blob boundary")
}
