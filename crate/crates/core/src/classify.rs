//! Point classification: crossing numbers along a downward vertical ray,
//! a leftward horizontal ray for dubious points, and the winding number as
//! the last resort.

use serde::{Deserialize, Serialize};

use crate::boxes::{Geometry, MonotoneBox, Monotonicity};
use crate::geom::Point2;
use crate::roots::solve_bracketed_from;
use crate::winding::{winding_number, GaussLegendre, DEFAULT_MAX_DEPTH, DEFAULT_QUAD_ORDER};

/// Default boundary tolerance relative to the global box diagonal.
pub const BOUNDARY_TOL_REL: f64 = 1e-9;
/// A root of the ray equation must reproduce the ray abscissa to within
/// this multiple of the diagonal, or the box is reported inconsistent.
const EPS_CONSISTENT_REL: f64 = 1e-8;
/// When the winding integral fails, a point whose nearest ray intersection
/// lies within this multiple of the boundary tolerance is put on the boundary.
const NEAR_BOUNDARY_FACTOR: f64 = 1e3;

/// Mean points per slab in the batch path.
const SLAB_OCCUPANCY: usize = 2;

const BOUNDARY: u8 = 1;
const DUBIOUS: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Label {
    Outside = 0,
    Inside = 1,
    Boundary = 2,
}

impl Label {
    pub fn as_u8(self) -> u8 {
        self as u8
    }

    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(Label::Outside),
            1 => Some(Label::Inside),
            2 => Some(Label::Boundary),
            _ => None,
        }
    }

    fn from_parity(crossings: u32) -> Self {
        if crossings % 2 == 1 {
            Label::Inside
        } else {
            Label::Outside
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Absolute boundary tolerance; `None` means `1e-9` times the diagonal
    /// of the global box.
    pub boundary_tol: Option<f64>,
    /// Emit [`Label::Boundary`]; otherwise boundary points are `Inside`.
    pub report_boundary: bool,
    pub quad_order: usize,
    pub max_depth: usize,
    /// Worker threads for the batch path. Labels do not depend on it.
    pub threads: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            boundary_tol: None,
            report_boundary: false,
            quad_order: DEFAULT_QUAD_ORDER,
            max_depth: DEFAULT_MAX_DEPTH,
            threads: 1,
        }
    }
}

/// Counters gathered during one classification call.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub points: u64,
    /// Points rejected by the global bounding box.
    pub outside_global_box: u64,
    pub boxes_visited: u64,
    /// Ray equations actually solved (shortcuts excluded).
    pub equations_solved: u64,
    /// Solver results that contradicted the box monotonicity.
    pub inconsistencies: u64,
    /// Points sent to the horizontal ray.
    pub horizontal_fallbacks: u64,
    /// Points sent to the winding number.
    pub winding_fallbacks: u64,
    pub winding_failures: u64,
}

impl Diagnostics {
    pub fn merge(&mut self, o: &Diagnostics) {
        self.points += o.points;
        self.outside_global_box += o.outside_global_box;
        self.boxes_visited += o.boxes_visited;
        self.equations_solved += o.equations_solved;
        self.inconsistencies += o.inconsistencies;
        self.horizontal_fallbacks += o.horizontal_fallbacks;
        self.winding_fallbacks += o.winding_fallbacks;
        self.winding_failures += o.winding_failures;
    }

    /// Mean number of ray equations solved per point.
    pub fn equations_per_point(&self) -> f64 {
        if self.points == 0 {
            0.0
        } else {
            self.equations_solved as f64 / self.points as f64
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub labels: Vec<Label>,
    pub diagnostics: Diagnostics,
}

/// Result of one ray against one box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayOutcome {
    Miss,
    Cross,
    Boundary,
    Critical,
}

/// Accumulated crossings of one ray. `crossings` is only meaningful when
/// `dubious` is false.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossState {
    pub crossings: u32,
    pub dubious: bool,
    pub boundary_hit: bool,
    /// Smallest distance along the ray axis to an intersection found.
    pub nearest: f64,
}

impl Default for CrossState {
    fn default() -> Self {
        Self {
            crossings: 0,
            dubious: false,
            boundary_hit: false,
            nearest: f64::INFINITY,
        }
    }
}

impl CrossState {
    fn record(&mut self, (outcome, dist): (RayOutcome, f64)) {
        self.nearest = self.nearest.min(dist);
        match outcome {
            RayOutcome::Miss => {}
            RayOutcome::Cross => self.crossings += 1,
            RayOutcome::Boundary => self.boundary_hit = true,
            RayOutcome::Critical => self.dubious = true,
        }
    }
}

/// Equal-width slabs along `x`. The slab index is a monotone function of
/// `x`, so every `x` interval maps to a contiguous run of slab-sorted points.
#[derive(Clone, Copy, Debug)]
pub struct Slabs {
    x0: f64,
    scale: f64,
    count: u32,
}

impl Slabs {
    pub fn new(x_min: f64, x_max: f64, count: usize) -> Self {
        let count = count.clamp(1, u32::MAX as usize) as u32;
        let w = x_max - x_min;
        let scale = if w > 0.0 && w.is_finite() {
            count as f64 / w
        } else {
            0.0
        };
        Self {
            x0: x_min,
            scale,
            count,
        }
    }

    pub fn count(&self) -> usize {
        self.count as usize
    }

    /// Float-to-int casts saturate, so values left of the range land in
    /// slab 0 and values right of it in the last slab.
    pub fn key(&self, x: f64) -> u32 {
        (((x - self.x0) * self.scale) as u32).min(self.count - 1)
    }
}

/// Points of a cloud grouped by [`Slabs`], input order kept inside each slab.
#[derive(Clone, Debug)]
pub struct QueryBatch {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Slab of each point; non-decreasing.
    pub keys: Vec<u32>,
    /// `sort_perm[k]` is the input index of the k-th grouped point.
    pub sort_perm: Vec<u32>,
    pub slabs: Slabs,
}

impl QueryBatch {
    /// One slab per point over the bounding interval of the cloud.
    pub fn new(points: &[Point2]) -> Self {
        let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.x), hi.max(p.x))
        });
        let slabs = Slabs::new(lo, hi, points.len());
        Self::from_indices(points, (0..points.len() as u32).collect(), slabs)
    }

    /// Stable counting sort of the given subset of `points` by slab.
    pub fn from_indices(points: &[Point2], indices: Vec<u32>, slabs: Slabs) -> Self {
        let keyed: Vec<u32> = indices.iter().map(|&i| slabs.key(points[i as usize].x)).collect();
        let mut start = vec![0u32; slabs.count() + 1];
        for &k in &keyed {
            start[k as usize + 1] += 1;
        }
        for s in 1..start.len() {
            start[s] += start[s - 1];
        }
        let n = indices.len();
        let mut sort_perm = vec![0u32; n];
        let mut xs = vec![0.0; n];
        let mut ys = vec![0.0; n];
        let mut keys = vec![0u32; n];
        for (&i, &k) in indices.iter().zip(&keyed) {
            let slot = &mut start[k as usize];
            let j = *slot as usize;
            *slot += 1;
            let p = points[i as usize];
            sort_perm[j] = i;
            xs[j] = p.x;
            ys[j] = p.y;
            keys[j] = k;
        }
        Self {
            xs,
            ys,
            keys,
            sort_perm,
            slabs,
        }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Inverse of `sort_perm` over the input indices it covers; entries for
    /// uncovered inputs are `u32::MAX`.
    pub fn inverse_perm(&self, input_len: usize) -> Vec<u32> {
        let mut inv = vec![u32::MAX; input_len];
        for (k, &i) in self.sort_perm.iter().enumerate() {
            inv[i as usize] = k as u32;
        }
        inv
    }
}

/// True iff `v` lies within `tol` of a value in the sorted set.
pub fn detect_critical(v: f64, sorted: &[f64], tol: f64) -> bool {
    let i = sorted.partition_point(|&c| c < v);
    (i < sorted.len() && sorted[i] - v <= tol) || (i > 0 && v - sorted[i - 1] <= tol)
}

/// Label from the outcome of the crossing passes and, if needed, the winding
/// number. `winding` is `Some(Ok(value))` for converged fallbacks,
/// `Some(Err(estimate))` for non-converged ones.
pub fn finalize(state: &CrossState, winding: Option<Result<i64, f64>>, report_boundary: bool) -> Label {
    let boundary = if report_boundary {
        Label::Boundary
    } else {
        Label::Inside
    };
    if state.boundary_hit {
        return boundary;
    }
    match winding {
        None => Label::from_parity(state.crossings),
        Some(Ok(w)) => {
            if w != 0 {
                Label::Inside
            } else {
                Label::Outside
            }
        }
        Some(Err(estimate)) => {
            if estimate.is_finite() && estimate.round() != 0.0 {
                Label::Inside
            } else {
                Label::Outside
            }
        }
    }
}

pub struct Classifier<'g> {
    geom: &'g Geometry,
    tol: f64,
    report_boundary: bool,
    max_depth: usize,
    threads: usize,
    rule: GaussLegendre,
    eps_consistent: f64,
}

impl<'g> Classifier<'g> {
    pub fn new(geom: &'g Geometry, opts: &ClassifyOptions) -> Self {
        let tol = opts.boundary_tol.unwrap_or(BOUNDARY_TOL_REL * geom.diagonal()).max(0.0);
        Self {
            geom,
            tol,
            report_boundary: opts.report_boundary,
            max_depth: opts.max_depth,
            threads: opts.threads.max(1),
            rule: GaussLegendre::new(opts.quad_order.max(1)),
            eps_consistent: EPS_CONSISTENT_REL * geom.diagonal(),
        }
    }

    pub fn geometry(&self) -> &Geometry {
        self.geom
    }

    pub fn boundary_tol(&self) -> f64 {
        self.tol
    }

    /// Batch classification: the points inside the global box are sorted by
    /// `x`; each box then finds the points above it by binary search.
    pub fn classify_batch(&self, points: &[Point2]) -> Classification {
        let gb = self.geom.global_box.inflate(self.tol);
        let mut labels = vec![Label::Outside; points.len()];
        let inside: Vec<u32> = (0..points.len() as u32)
            .filter(|&i| gb.contains(points[i as usize]))
            .collect();
        let mut diag = Diagnostics {
            points: points.len() as u64,
            outside_global_box: (points.len() - inside.len()) as u64,
            ..Default::default()
        };
        let slabs = Slabs::new(gb.x_min, gb.x_max, inside.len() / SLAB_OCCUPANCY);
        let batch = QueryBatch::from_indices(points, inside, slabs);
        let n = batch.len();
        let workers = self.threads.min(n.max(1));
        let chunk = n.div_ceil(workers).max(1);
        let mut sorted_labels = vec![Label::Outside; n];
        if workers <= 1 {
            let d = self.classify_sorted_chunk(&batch.xs, &batch.ys, &batch.keys, slabs, &mut sorted_labels);
            diag.merge(&d);
        } else {
            let parts: Vec<Diagnostics> = std::thread::scope(|scope| {
                let handles: Vec<_> = batch
                    .xs
                    .chunks(chunk)
                    .zip(batch.ys.chunks(chunk))
                    .zip(batch.keys.chunks(chunk))
                    .zip(sorted_labels.chunks_mut(chunk))
                    .map(|(((xs, ys), keys), out)| {
                        scope.spawn(move || self.classify_sorted_chunk(xs, ys, keys, slabs, out))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("classifier worker"))
                    .collect()
            });
            for d in &parts {
                diag.merge(d);
            }
        }
        for (k, &i) in batch.sort_perm.iter().enumerate() {
            labels[i as usize] = sorted_labels[k];
        }
        Classification {
            labels,
            diagnostics: diag,
        }
    }

    /// Box loop over one run of slab-sorted points, then resolution of each.
    fn classify_sorted_chunk(
        &self,
        xs: &[f64],
        ys: &[f64],
        keys: &[u32],
        slabs: Slabs,
        out: &mut [Label],
    ) -> Diagnostics {
        let mut diag = Diagnostics::default();
        let mut crossings = vec![0u32; xs.len()];
        let mut flags = vec![0u8; xs.len()];
        let tol = self.tol;
        let idx = &self.geom.index;
        for (b, bx) in self.geom.boxes.iter().enumerate() {
            let (a, z) = (idx.x_min[b] - tol, idx.x_max[b] + tol);
            let (ka, kz) = (slabs.key(a), slabs.key(z));
            let lo = keys.partition_point(|&k| k < ka);
            let hi = keys.partition_point(|&k| k <= kz);
            let c = idx.y_min[b] - tol;
            for j in lo..hi {
                if ys[j] >= c && xs[j] >= a && xs[j] <= z {
                    match self.vertical(Point2::new(xs[j], ys[j]), bx, &mut diag).0 {
                        RayOutcome::Miss => {}
                        RayOutcome::Cross => crossings[j] += 1,
                        RayOutcome::Boundary => flags[j] |= BOUNDARY,
                        RayOutcome::Critical => flags[j] |= DUBIOUS,
                    }
                }
            }
        }
        for j in 0..xs.len() {
            let state = CrossState {
                crossings: crossings[j],
                dubious: flags[j] & DUBIOUS != 0,
                boundary_hit: flags[j] & BOUNDARY != 0,
                nearest: f64::INFINITY,
            };
            out[j] = self.resolve(Point2::new(xs[j], ys[j]), &state, &mut diag);
        }
        diag
    }

    /// Reference classifier: every point loops over every box. Same per-box
    /// logic as the batch path, so the labels are identical.
    pub fn classify_naive(&self, points: &[Point2]) -> Classification {
        let gb = self.geom.global_box.inflate(self.tol);
        let tol = self.tol;
        let mut diag = Diagnostics {
            points: points.len() as u64,
            ..Default::default()
        };
        let labels = points
            .iter()
            .map(|&p| {
                if !gb.contains(p) {
                    diag.outside_global_box += 1;
                    return Label::Outside;
                }
                let mut state = CrossState::default();
                for bx in &self.geom.boxes {
                    let r = &bx.rect;
                    if p.x >= r.x_min - tol && p.x <= r.x_max + tol && p.y >= r.y_min - tol {
                        state.record(self.vertical(p, bx, &mut diag));
                    }
                }
                self.resolve(p, &state, &mut diag)
            })
            .collect();
        Classification {
            labels,
            diagnostics: diag,
        }
    }

    /// Single-point convenience, routed through the batch path.
    pub fn classify_point(&self, p: Point2) -> Label {
        self.classify_batch(&[p]).labels[0]
    }

    /// Vertical-ray crossing state of one point.
    pub fn vertical_pass(&self, p: Point2, diag: &mut Diagnostics) -> CrossState {
        let mut state = CrossState::default();
        for b in self.geom.index.vertical_candidates(p.x, p.y, self.tol) {
            state.record(self.vertical(p, &self.geom.boxes[b], diag));
        }
        state
    }

    /// Horizontal-ray crossing state of one point.
    pub fn horizontal_pass(&self, p: Point2, diag: &mut Diagnostics) -> CrossState {
        let mut state = CrossState::default();
        for b in self.geom.index.horizontal_candidates(p.x, p.y, self.tol) {
            state.record(self.horizontal(p, &self.geom.boxes[b], diag));
        }
        state
    }

    /// Whether a pass result can be trusted for `p` (vertical when `along_x`).
    pub fn is_resolved(&self, p: Point2, state: &CrossState, vertical: bool) -> bool {
        if state.dubious {
            return false;
        }
        if vertical {
            !detect_critical(p.x, &self.geom.critical.x, self.geom.tol_x_crit())
        } else {
            !detect_critical(p.y, &self.geom.critical.y, self.geom.tol_y_crit())
        }
    }

    fn resolve(&self, p: Point2, vstate: &CrossState, diag: &mut Diagnostics) -> Label {
        if vstate.boundary_hit || self.is_resolved(p, vstate, true) {
            return finalize(vstate, None, self.report_boundary);
        }
        diag.horizontal_fallbacks += 1;
        let hstate = self.horizontal_pass(p, diag);
        if hstate.boundary_hit || self.is_resolved(p, &hstate, false) {
            return finalize(&hstate, None, self.report_boundary);
        }
        diag.winding_fallbacks += 1;
        match winding_number(p, self.geom, &self.rule, self.max_depth) {
            Ok(w) => finalize(&hstate, Some(Ok(w.value)), self.report_boundary),
            Err(e) => {
                diag.winding_failures += 1;
                // The batch sweep does not track distances; redo the vertical ray.
                let vnear = self.vertical_pass(p, &mut Diagnostics::default()).nearest;
                let nearest = vnear.min(hstate.nearest);
                let on_boundary = nearest <= NEAR_BOUNDARY_FACTOR * self.tol || !e.estimate.is_finite();
                let state = CrossState {
                    boundary_hit: on_boundary,
                    ..hstate
                };
                finalize(&state, Some(Err(e.estimate)), self.report_boundary)
            }
        }
    }

    /// Downward ray from `p` against one box. Returns the outcome and the
    /// vertical distance to the intersection when one was located.
    pub fn vertical(&self, p: Point2, bx: &MonotoneBox, diag: &mut Diagnostics) -> (RayOutcome, f64) {
        diag.boxes_visited += 1;
        let tol = self.tol;
        let r = &bx.rect;
        if bx.x_mono == Monotonicity::Constant {
            // Vertical segment: the ray either touches it or runs along it.
            if (p.x - r.x_min).abs() > tol || p.y < r.y_min - tol {
                return (RayOutcome::Miss, f64::INFINITY);
            }
            let dy = if p.y > r.y_max {
                p.y - r.y_max
            } else {
                (r.y_min - p.y).max(0.0)
            };
            let dist = dy.hypot(p.x - r.x_min);
            if p.y <= r.y_max + tol {
                return (RayOutcome::Boundary, dist);
            }
            return (RayOutcome::Critical, dist);
        }
        if p.x < r.x_min || p.x > r.x_max {
            return (RayOutcome::Miss, f64::INFINITY);
        }
        // Half-open ownership in x so that a shared endpoint counts once.
        let owns = p.x < r.x_max;
        if p.y > r.y_max + tol {
            let outcome = if owns { RayOutcome::Cross } else { RayOutcome::Miss };
            return (outcome, p.y - r.y_max);
        }
        let y_star = if p.x == bx.start.x {
            bx.start.y
        } else if p.x == bx.end.x {
            bx.end.y
        } else {
            diag.equations_solved += 1;
            let piece = &self.geom.pieces[bx.piece];
            let x = p.x;
            let sign_lo = bx.start.x - x;
            if sign_lo * (bx.end.x - x) > 0.0 {
                diag.inconsistencies += 1;
                return (RayOutcome::Critical, f64::INFINITY);
            }
            // Chord guess; the result does not depend on the visiting order.
            let guess = bx.s0 + (bx.s1 - bx.s0) * (x - bx.start.x) / (bx.end.x - bx.start.x);
            let s = solve_bracketed_from(
                |s| {
                    let (u, du) = piece.u.eval_with_derivative(s);
                    let (v, dv) = piece.v.eval_with_derivative(s);
                    (u - x * v, du - x * dv)
                },
                bx.s0,
                bx.s1,
                sign_lo,
                guess,
            );
            if (piece.x(s) - x).abs() > self.eps_consistent {
                diag.inconsistencies += 1;
                return (RayOutcome::Critical, f64::INFINITY);
            }
            piece.y(s)
        };
        let dist = (y_star - p.y).abs();
        if dist <= tol {
            (RayOutcome::Boundary, dist)
        } else if y_star < p.y && owns {
            (RayOutcome::Cross, dist)
        } else {
            (RayOutcome::Miss, dist)
        }
    }

    /// Leftward ray from `p` against one box; axes swapped.
    pub fn horizontal(&self, p: Point2, bx: &MonotoneBox, diag: &mut Diagnostics) -> (RayOutcome, f64) {
        diag.boxes_visited += 1;
        let tol = self.tol;
        let r = &bx.rect;
        if bx.y_mono == Monotonicity::Constant {
            if (p.y - r.y_min).abs() > tol || p.x < r.x_min - tol {
                return (RayOutcome::Miss, f64::INFINITY);
            }
            let dx = if p.x > r.x_max {
                p.x - r.x_max
            } else {
                (r.x_min - p.x).max(0.0)
            };
            let dist = dx.hypot(p.y - r.y_min);
            if p.x <= r.x_max + tol {
                return (RayOutcome::Boundary, dist);
            }
            return (RayOutcome::Critical, dist);
        }
        if p.y < r.y_min || p.y > r.y_max {
            return (RayOutcome::Miss, f64::INFINITY);
        }
        let owns = p.y < r.y_max;
        if p.x > r.x_max + tol {
            let outcome = if owns { RayOutcome::Cross } else { RayOutcome::Miss };
            return (outcome, p.x - r.x_max);
        }
        let x_star = if p.y == bx.start.y {
            bx.start.x
        } else if p.y == bx.end.y {
            bx.end.x
        } else {
            diag.equations_solved += 1;
            let piece = &self.geom.pieces[bx.piece];
            let y = p.y;
            let sign_lo = bx.start.y - y;
            if sign_lo * (bx.end.y - y) > 0.0 {
                diag.inconsistencies += 1;
                return (RayOutcome::Critical, f64::INFINITY);
            }
            let guess = bx.s0 + (bx.s1 - bx.s0) * (y - bx.start.y) / (bx.end.y - bx.start.y);
            let s = solve_bracketed_from(
                |s| {
                    let (w, dw) = piece.w.eval_with_derivative(s);
                    let (z, dz) = piece.z.eval_with_derivative(s);
                    (w - y * z, dw - y * dz)
                },
                bx.s0,
                bx.s1,
                sign_lo,
                guess,
            );
            if (piece.y(s) - y).abs() > self.eps_consistent {
                diag.inconsistencies += 1;
                return (RayOutcome::Critical, f64::INFINITY);
            }
            piece.x(s)
        };
        let dist = (x_star - p.x).abs();
        if dist <= tol {
            (RayOutcome::Boundary, dist)
        } else if x_star < p.x && owns {
            (RayOutcome::Cross, dist)
        } else {
            (RayOutcome::Miss, dist)
        }
    }
}

/// Classifies `points` against `geom` with the batch path.
pub fn classify_batch(points: &[Point2], geom: &Geometry, opts: &ClassifyOptions) -> Classification {
    Classifier::new(geom, opts).classify_batch(points)
}
