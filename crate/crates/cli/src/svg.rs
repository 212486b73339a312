//! Static SVG snapshot: boundary, monotone boxes and labelled points.

use std::fmt::Write;

use nurbs_indicator::oracle::polygonize;
use nurbs_indicator::{BoundaryCurve, Geometry, Label, Point2};

const WIDTH: f64 = 800.0;
/// Larger clouds are thinned with a fixed stride.
const MAX_DRAWN: usize = 50_000;

struct View {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl View {
    fn map(&self, p: Point2) -> (f64, f64) {
        ((p.x - self.x0) * self.scale, (self.y1 - p.y) * self.scale)
    }
}

fn colour(label: Label) -> &'static str {
    match label {
        Label::Outside => "#9aa0a6",
        Label::Inside => "#1a73e8",
        Label::Boundary => "#d93025",
    }
}

pub fn render(curve: &BoundaryCurve, geom: &Geometry, points: &[Point2], labels: &[Label]) -> String {
    let g = geom.global_box;
    let mut r = g.inflate(0.05 * g.width().max(g.height()));
    for p in points.iter().filter(|p| p.is_finite()) {
        r.x_min = r.x_min.min(p.x);
        r.x_max = r.x_max.max(p.x);
        r.y_min = r.y_min.min(p.y);
        r.y_max = r.y_max.max(p.y);
    }
    let w = (r.x_max - r.x_min).max(f64::MIN_POSITIVE);
    let h = (r.y_max - r.y_min).max(f64::MIN_POSITIVE);
    let view = View {
        x0: r.x_min,
        y1: r.y_max,
        scale: WIDTH / w,
    };
    let height = h * view.scale;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.3} {height:.3}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let _ = writeln!(s, r##"<g fill="none" stroke="#f29900" stroke-width="0.8">"##);
    for bx in &geom.boxes {
        let (x, y) = view.map(Point2::new(bx.rect.x_min, bx.rect.y_max));
        let bw = (bx.rect.x_max - bx.rect.x_min) * view.scale;
        let bh = (bx.rect.y_max - bx.rect.y_min) * view.scale;
        let _ = writeln!(s, r#"<rect x="{x:.3}" y="{y:.3}" width="{bw:.3}" height="{bh:.3}"/>"#);
    }
    let _ = writeln!(s, "</g>");

    if let Ok(poly) = polygonize(curve, 0.25 / view.scale) {
        let mut d = String::new();
        for v in &poly.vertices {
            let (x, y) = view.map(*v);
            let _ = write!(d, "{x:.3},{y:.3} ");
        }
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="none" stroke="black" stroke-width="1.2"/>"#,
            d.trim_end()
        );
    }

    let stride = points.len().div_ceil(MAX_DRAWN).max(1);
    let _ = writeln!(s, "<g>");
    for (p, &l) in points.iter().zip(labels).step_by(stride) {
        if !p.is_finite() {
            continue;
        }
        let (x, y) = view.map(*p);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="1.5" fill="{}"/>"#, colour(l));
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}
