//! Timing harness: sorted batch classifier against the per-point box loop,
//! and against ray casting on a dense polygon.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::boxes::{build_boxes, Geometry};
use crate::classify::{Classifier, ClassifyOptions, Label};
use crate::error::Result;
use crate::geom::Point2;
use crate::halton::halton;
use crate::nurbs::BoundaryCurve;
use crate::oracle::{near_polyline, points_in_polygon, polygonize, OracleError};

pub const DEFAULT_REPS: usize = 21;
pub const BAND: f64 = 1e-6;

/// One line of a report. Times are medians in seconds.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub config: String,
    #[serde(rename = "M")]
    pub m: usize,
    pub tau: usize,
    #[serde(skip)]
    pub boxes: usize,
    pub build_s: f64,
    pub query_s: f64,
    pub nu: f64,
    pub speedup: Option<f64>,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub title: String,
    pub rows: Vec<BenchRow>,
    /// Configurations whose two methods disagreed (outside the boundary band
    /// for polygon comparisons).
    pub mismatches: Vec<String>,
}

impl BenchReport {
    pub fn write_csv(&self, w: impl Write) -> csv::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r)?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let head = ["config", "M", "tau", "N", "build_s", "query_s", "nu", "speedup"];
        let cells: Vec<[String; 8]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.config.clone(),
                    r.m.to_string(),
                    r.tau.to_string(),
                    r.boxes.to_string(),
                    format!("{:.3e}", r.build_s),
                    format!("{:.3e}", r.query_s),
                    format!("{:.3}", r.nu),
                    r.speedup.map_or("-".into(), |s| format!("{s:.2}")),
                ]
            })
            .collect();
        let mut width = head.map(str::len);
        for row in &cells {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |row: &[String]| {
            row.iter()
                .zip(&width)
                .enumerate()
                .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = format!("{}\n", self.title);
        out += &line(&head.map(String::from));
        out.push('\n');
        for row in &cells {
            out += &line(row);
            out.push('\n');
        }
        for m in &self.mismatches {
            out += &format!("MISMATCH {m}\n");
        }
        out
    }
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs `f` `reps` times and returns the median wall time and the last result.
pub fn time_median<T>(reps: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let mut times = Vec::with_capacity(reps);
    let mut last = None;
    for _ in 0..reps.max(1) {
        let t = Instant::now();
        let r = f();
        times.push(t.elapsed().as_secs_f64());
        last = Some(r);
    }
    (median(times), last.unwrap())
}

fn timed_build(curve: &BoundaryCurve, tau: usize, reps: usize) -> Result<(f64, Geometry)> {
    let (t, g) = time_median(reps, || build_boxes(curve, tau));
    Ok((t, g?))
}

/// Naive per-point box loop against the sorted batch classifier on Halton
/// points of the global box, single-threaded.
pub fn run_speedup_bench(
    name: &str,
    curve: &BoundaryCurve,
    ms: &[usize],
    taus: &[usize],
    reps: usize,
) -> Result<BenchReport> {
    let mut report = BenchReport {
        title: format!("{name}: per-point box loop vs sorted batch (median of {reps})"),
        ..Default::default()
    };
    let opts = ClassifyOptions::default();
    for &tau in taus {
        let (build_s, geom) = timed_build(curve, tau, reps)?;
        let c = Classifier::new(&geom, &opts);
        for &m in ms {
            let pts = halton(m, &geom.global_box);
            let (t_naive, naive) = time_median(reps, || c.classify_naive(&pts));
            let (t_batch, batch) = time_median(reps, || c.classify_batch(&pts));
            if naive.labels != batch.labels {
                report.mismatches.push(format!("{name} M={m} tau={tau}"));
            }
            let row = |config: &str, query_s: f64, speedup| BenchRow {
                config: format!("{name}/{config}"),
                m,
                tau,
                boxes: geom.boxes.len(),
                build_s,
                query_s,
                nu: batch.diagnostics.equations_per_point(),
                speedup,
            };
            report.rows.push(row("naive", t_naive, None));
            report.rows.push(row("sorted", t_batch, Some(t_naive / t_batch)));
        }
    }
    Ok(report)
}

/// Mean equations solved per point for each refinement level.
pub fn nu_sweep(curve: &BoundaryCurve, m: usize, taus: &[usize]) -> Result<Vec<(usize, f64)>> {
    taus.iter()
        .map(|&tau| {
            let geom = build_boxes(curve, tau)?;
            let pts = halton(m, &geom.global_box);
            let r = Classifier::new(&geom, &ClassifyOptions::default()).classify_batch(&pts);
            Ok((tau, r.diagnostics.equations_per_point()))
        })
        .collect()
}

#[derive(Debug, thiserror::Error)]
pub enum ComparisonError {
    #[error(transparent)]
    Geometry(#[from] crate::error::Error),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Outcome of comparing labels against the polygon oracle.
#[derive(Clone, Debug, Default)]
pub struct Agreement {
    pub compared: usize,
    pub in_band: usize,
    pub disagreements: Vec<Point2>,
}

/// Compares classifier labels with the polygon oracle, ignoring points
/// within `band` of the polygon.
pub fn compare_with_polygon(
    points: &[Point2],
    labels: &[Label],
    poly: &crate::oracle::PolygonApprox,
    band: f64,
) -> Agreement {
    let inside = points_in_polygon(points, &poly.vertices);
    let near = near_polyline(points, poly, band);
    let mut a = Agreement::default();
    for i in 0..points.len() {
        if near[i] {
            a.in_band += 1;
            continue;
        }
        a.compared += 1;
        if (labels[i] != Label::Outside) != inside[i] {
            a.disagreements.push(points[i]);
        }
    }
    a
}

/// Classifier query time against ray casting on the `eps`-polygon.
pub fn run_polygon_comparison(
    name: &str,
    curve: &BoundaryCurve,
    ms: &[usize],
    eps: f64,
    tau: usize,
    reps: usize,
) -> Result<BenchReport, ComparisonError> {
    let (build_s, geom) = timed_build(curve, tau, reps)?;
    let (poly_s, poly) = time_median(reps.min(3), || polygonize(curve, eps));
    let poly = poly?;
    let mut report = BenchReport {
        title: format!(
            "{name}: classifier vs ray casting on a {}-vertex polygon (eps {eps:e}, median of {reps})",
            poly.len()
        ),
        ..Default::default()
    };
    let c = Classifier::new(&geom, &ClassifyOptions::default());
    for &m in ms {
        let pts = halton(m, &geom.global_box);
        let (t_cls, cls) = time_median(reps, || c.classify_batch(&pts));
        let (t_poly, _) = time_median(reps, || points_in_polygon(&pts, &poly.vertices));
        let agreement = compare_with_polygon(&pts, &cls.labels, &poly, BAND);
        if !agreement.disagreements.is_empty() {
            report.mismatches.push(format!(
                "{name} M={m}: {} disagreements outside the band",
                agreement.disagreements.len()
            ));
        }
        report.rows.push(BenchRow {
            config: format!("{name}/polygon"),
            m,
            tau,
            boxes: poly.len(),
            build_s: poly_s,
            query_s: t_poly,
            nu: 0.0,
            speedup: None,
        });
        report.rows.push(BenchRow {
            config: format!("{name}/classifier"),
            m,
            tau,
            boxes: geom.boxes.len(),
            build_s,
            query_s: t_cls,
            nu: cls.diagnostics.equations_per_point(),
            speedup: Some(t_poly / t_cls),
        });
    }
    Ok(report)
}
