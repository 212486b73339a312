use crate::roots::RootError;

/// Problems with a single NURBS side, independent of its position in the loop.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SideError {
    #[error("degree must be at least 1")]
    DegreeZero,
    #[error("expected {expected} knots (control points + degree + 1), found {found}")]
    KnotCount { expected: usize, found: usize },
    #[error("knot vector is decreasing at index {0}")]
    KnotsDecreasing(usize),
    #[error("knot vector is not clamped (end knots must repeat degree + 1 times)")]
    NotClamped,
    #[error("knot vector has no non-empty span")]
    NoSpan,
    #[error("weight count {weights} does not match control point count {points}")]
    WeightCount { weights: usize, points: usize },
    #[error("non-positive weight {value} at index {index}")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("non-finite knot, weight or control point")]
    NonFinite,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("side {side}: {source}")]
    InvalidSide {
        side: usize,
        #[source]
        source: SideError,
    },
    #[error("parameter {t} outside [{lo}, {hi}]")]
    ParameterOutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("boundary has no sides")]
    NoSides,
    #[error("boundary is not closed: end point misses start point by {gap:e}")]
    NotClosed { gap: f64 },
    #[error("side {side} does not start where side {prev} ends (gap {gap:e})")]
    SidesDoNotAbut { prev: usize, side: usize, gap: f64 },
    #[error("denominator vanishes on side {side}, span {span}")]
    VanishingDenominator { side: usize, span: usize },
    #[error("extracted piece on side {side}, span {span} deviates from the curve by {deviation:e}")]
    PieceMismatch { side: usize, span: usize, deviation: f64 },
    #[error("side {side}, span {span} collapses to a point")]
    DegeneratePiece { side: usize, span: usize },
    #[error("root finding failed on side {side}, span {span}: {source}")]
    Roots {
        side: usize,
        span: usize,
        #[source]
        source: RootError,
    },
    #[error("boundary encloses zero area")]
    ZeroArea,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
