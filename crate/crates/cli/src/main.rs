use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Parser};
use nurbs_indicator::domains::BUILTIN_NAMES;
use nurbs_indicator::halton::halton;
use nurbs_indicator::harness::{self, BenchReport, DEFAULT_REPS};
use nurbs_indicator::io as nio;
use nurbs_indicator::{build_boxes, BoundaryCurve, Classifier, ClassifyOptions, Diagnostics, Geometry, Point2, Rect};

mod svg;

/// Share of the cloud allowed to hit solver inconsistencies or winding
/// failures before the run exits with status 2.
const DIAGNOSTIC_THRESHOLD: f64 = 1e-3;
const BENCH_SIZES: [usize; 3] = [1_000, 10_000, 100_000];
const BENCH_REFINE: [usize; 5] = [1, 2, 4, 8, 16];

/// Classify points against a planar domain bounded by a closed NURBS curve.
///
/// Labels are written one per line in input order: 0 outside, 1 inside,
/// 2 on the boundary (only with --boundary).
#[derive(Parser, Debug)]
#[command(name = "inrs", version)]
#[command(group(ArgGroup::new("source").args(["points", "halton", "grid"])))]
struct Args {
    /// JSON domain file, or one of: circle, square, mixed, multispan.
    #[arg(long, value_name = "PATH|BUILTIN", required_unless_present = "bench")]
    domain: Option<String>,

    /// Point cloud, text ("x,y" per line) or INRS binary.
    #[arg(long, value_name = "PATH")]
    points: Option<PathBuf>,

    /// First M Halton points of the domain's bounding box.
    #[arg(long, value_name = "M")]
    halton: Option<usize>,

    /// n x n cell centres of the domain's bounding box.
    #[arg(long, value_name = "N")]
    grid: Option<usize>,

    /// Refinement level: every monotone arc is split into this many boxes.
    #[arg(long, value_name = "TAU", default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    refine: u32,

    /// Absolute boundary tolerance; defaults to 1e-9 times the bounding box diagonal.
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,

    /// Report points on the boundary with label 2.
    #[arg(long)]
    boundary: bool,

    /// Label output file; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Write one byte per label instead of text lines.
    #[arg(long)]
    out_binary: bool,

    /// Worker threads for classification.
    #[arg(long, value_name = "N", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,

    /// Write an SVG picture of the boxes and labelled points.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,

    /// Run the benchmark suites (on --domain, or every builtin) and print tables.
    #[arg(long)]
    bench: bool,

    /// Directory for benchmark CSV files.
    #[arg(long, value_name = "DIR", requires = "bench")]
    bench_csv: Option<PathBuf>,

    /// Timing repetitions per benchmark cell (the median is reported).
    #[arg(long, value_name = "R", default_value_t = DEFAULT_REPS, requires = "bench")]
    reps: usize,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(1)
        }
    }
}

/// The error chain, skipping causes whose text the previous message
/// already embeds.
fn describe(e: &anyhow::Error) -> String {
    let mut parts: Vec<String> = Vec::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if parts.last().is_none_or(|prev| !prev.contains(&text)) {
            parts.push(text);
        }
    }
    parts.join(": ")
}

fn run(args: &Args) -> Result<ExitCode> {
    if args.bench {
        bench(args)?;
        return Ok(ExitCode::SUCCESS);
    }
    let spec = args.domain.as_deref().expect("clap enforces --domain");
    if let Some(tol) = args.tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            bail!("--tol must be a non-negative number, got {tol}");
        }
    }
    let curve = nio::resolve_domain(spec)?;
    let geom = build_boxes(&curve, args.refine as usize).with_context(|| format!("building boxes for {spec}"))?;
    let points = load_points(args, &geom)?;
    let opts = ClassifyOptions {
        boundary_tol: args.tol,
        report_boundary: args.boundary,
        threads: args.threads as usize,
        ..Default::default()
    };
    let result = Classifier::new(&geom, &opts).classify_batch(&points);
    write_labels(args, &result.labels)?;
    if let Some(path) = &args.svg {
        let text = svg::render(&curve, &geom, &points, &result.labels);
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    let d = &result.diagnostics;
    eprintln!("{}", summary(&geom, d));
    let limit = DIAGNOSTIC_THRESHOLD * points.len() as f64;
    if d.inconsistencies as f64 > limit || d.winding_failures as f64 > limit {
        eprintln!(
            "error: {} inconsistent box solves and {} winding failures exceed {:.1}% of the cloud",
            d.inconsistencies,
            d.winding_failures,
            100.0 * DIAGNOSTIC_THRESHOLD
        );
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn load_points(args: &Args, geom: &Geometry) -> Result<Vec<Point2>> {
    let rect = geom.global_box;
    Ok(match (&args.points, args.halton, args.grid) {
        (Some(path), _, _) => nio::load_cloud(path)?,
        (_, Some(m), _) => halton(m, &rect),
        (_, _, Some(n)) => grid(n, &rect),
        _ => bail!("no points given; use --points, --halton or --grid"),
    })
}

fn grid(n: usize, rect: &Rect) -> Vec<Point2> {
    let c = |k: usize| (k as f64 + 0.5) / n as f64;
    (0..n * n).map(|k| rect.from_unit(c(k % n), c(k / n))).collect()
}

fn write_labels(args: &Args, labels: &[nurbs_indicator::Label]) -> Result<()> {
    let write = |w: &mut dyn Write| -> io::Result<()> {
        if args.out_binary {
            nio::write_labels_binary(labels, &mut *w)?;
        } else {
            nio::write_labels_text(labels, &mut *w)?;
        }
        w.flush()
    };
    match &args.out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write(&mut BufWriter::new(f)).with_context(|| format!("writing {}", path.display()))
        }
        None => write(&mut BufWriter::new(io::stdout().lock())).context("writing labels"),
    }
}

fn summary(geom: &Geometry, d: &Diagnostics) -> String {
    format!(
        "{} points, {} boxes: {} outside the bounding box, {:.3} equations/point, \
         {} horizontal and {} winding fallbacks, {} inconsistencies, {} winding failures",
        d.points,
        geom.boxes.len(),
        d.outside_global_box,
        d.equations_per_point(),
        d.horizontal_fallbacks,
        d.winding_fallbacks,
        d.inconsistencies,
        d.winding_failures
    )
}

fn bench(args: &Args) -> Result<()> {
    let domains: Vec<(String, BoundaryCurve)> = match &args.domain {
        Some(spec) => vec![(domain_label(spec), nio::resolve_domain(spec)?)],
        None => BUILTIN_NAMES
            .iter()
            .map(|&n| Ok((n.to_string(), nio::resolve_domain(n)?)))
            .collect::<Result<_>>()?,
    };
    if let Some(dir) = &args.bench_csv {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let tau = args.refine as usize;
    let reps = args.reps.max(1);
    let mut mismatches = Vec::new();
    for (name, curve) in &domains {
        let speed = harness::run_speedup_bench(name, curve, &BENCH_SIZES, &[tau], reps)?;
        emit(args, &speed, &format!("{name}-speedup.csv"))?;
        let poly = harness::run_polygon_comparison(name, curve, &BENCH_SIZES, 1e-8, tau, reps)?;
        emit(args, &poly, &format!("{name}-polygon.csv"))?;
        println!("{name}: equations per point on 10000 Halton points");
        for (t, nu) in harness::nu_sweep(curve, 10_000, &BENCH_REFINE)? {
            println!("  tau {t:>2}  nu {nu:.3}");
        }
        println!();
        mismatches.extend(speed.mismatches);
        mismatches.extend(poly.mismatches);
    }
    if !mismatches.is_empty() {
        bail!("label mismatches: {}", mismatches.join("; "));
    }
    Ok(())
}

fn emit(args: &Args, report: &BenchReport, file: &str) -> Result<()> {
    println!("{}", report.to_table());
    if let Some(dir) = &args.bench_csv {
        let path = dir.join(file);
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        report
            .write_csv(f)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn domain_label(spec: &str) -> String {
    Path::new(spec)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string())
}
