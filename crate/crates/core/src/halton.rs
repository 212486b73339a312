//! Base-(2, 3) Halton points.

use crate::geom::{Point2, Rect};

/// Van der Corput radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % b) as f64;
        i /= b;
        f *= inv;
    }
    r
}

/// The first `m` Halton points (indices `1..=m`, unscrambled) mapped into `rect`.
pub fn halton(m: usize, rect: &Rect) -> Vec<Point2> {
    (1..=m as u64)
        .map(|i| rect.from_unit(radical_inverse(i, 2), radical_inverse(i, 3)))
        .collect()
}
