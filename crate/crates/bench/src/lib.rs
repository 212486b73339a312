//! Fixtures shared by the criterion benches.

use nurbs_indicator::domains;
use nurbs_indicator::halton::halton;
use nurbs_indicator::{build_boxes, BoundaryCurve, Geometry, Point2};

pub const SIZES: [usize; 3] = [1_000, 10_000, 100_000];
pub const REFINE: [usize; 5] = [1, 2, 4, 8, 16];

pub struct Fixture {
    pub name: &'static str,
    pub curve: BoundaryCurve,
    pub geom: Geometry,
}

impl Fixture {
    pub fn new(name: &'static str, tau: usize) -> Self {
        let curve = domains::builtin(name).expect("builtin domain");
        let geom = build_boxes(&curve, tau).expect("builtin domains build");
        Self { name, curve, geom }
    }

    /// First `m` Halton points of the global box.
    pub fn cloud(&self, m: usize) -> Vec<Point2> {
        halton(m, &self.geom.global_box)
    }
}

pub fn all(tau: usize) -> Vec<Fixture> {
    domains::BUILTIN_NAMES.iter().map(|&n| Fixture::new(n, tau)).collect()
}
