//! Error type shared by every stage of the construction.

/// All failure modes of the toolkit. Validation errors come from malformed
/// input, numerical errors from unreachable tolerances or degenerate
/// geometry discovered at run time.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("curve must have at least 3 vertices (got {0})")]
    TooFewVertices(usize),
    #[error("zero-length edge at vertex {0}")]
    DegenerateEdge(usize),
    #[error("curve self-intersects (edges {0} and {1})")]
    SelfIntersection(usize, usize),
    #[error("point ({0}, {1}) does not lie on the curve")]
    PointNotOnCurve(f64, f64),
    #[error("degenerate arc: endpoints coincide")]
    DegenerateArc,
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("conformal map failed to reach tolerance {tol:.3e} (achieved {achieved:.3e})")]
    ConvergenceFailure { tol: f64, achieved: f64 },
    #[error("point coincides with the base point of the ray family")]
    BasePointUndefined,
    #[error("point ({0}, {1}) lies outside the requested side of the curve")]
    OutsideDomain(f64, f64),
    #[error("integral diverges: exponent {0} with the path touching the curve")]
    NonFinite(f64),
    #[error("alpha must lie in (0, 1), got {0}")]
    BadAlpha(f64),
    #[error("density graph is disconnected between the query points")]
    DisconnectedGraph,
    #[error("dyadic level must be >= 1, got {0}")]
    BadLevel(usize),
    #[error("set touches the boundary curve")]
    TouchesBoundary,
    #[error("point lies outside the reflection collar")]
    OutsideCollar,
    #[error("exterior ray too short: needed arclength {needed:.3e}, available {available:.3e}")]
    RootBracketFailure { needed: f64, available: f64 },
    #[error("rectangle has an empty shadow")]
    EmptyShadow,
    #[error("reparametrization exponent must satisfy 1 < r < p (r = {r}, p = {p})")]
    BadExponent { r: f64, p: f64 },
    #[error("neighbor edge partition missing for rectangle {0}")]
    MissingNeighborPartition(u32),
    #[error("upper/lower piece counts disagree ({upper} vs {lower})")]
    CountMismatch { upper: usize, lower: usize },
    #[error("degenerate rectangle: {0}")]
    DegenerateRect(&'static str),
    #[error("epsilon must lie in (0, 1/9), got {0}")]
    BadEpsilon(f64),
    #[error("marked points conflict on a shared edge")]
    MarkedPointConflict,
    #[error("malformed rectangle: {0}")]
    MalformedRect(&'static str),
    #[error("marked point sets cannot be matched: {0}")]
    MarkMismatch(&'static str),
    #[error("boundary map is not monotone: segment intersection empty or non-unique")]
    NonMonotoneBoundary,
    #[error("glue violation on edge {edge}: residual {residual:.3e} exceeds {allowed:.3e}")]
    GlueViolation {
        edge: String,
        residual: f64,
        allowed: f64,
    },
    #[error("distortion grid too coarse: a rectangle has {0} valid cells (need >= 8)")]
    TooCoarse(usize),
    #[error("config: {0}")]
    Config(String),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Tag an error with the pipeline stage it surfaced in.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True for errors caused by malformed input rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::TooFewVertices(_)
                | Error::DegenerateEdge(_)
                | Error::SelfIntersection(_, _)
                | Error::PointNotOnCurve(_, _)
                | Error::DegenerateArc
                | Error::TooFewSamples { .. }
                | Error::BadAlpha(_)
                | Error::BadLevel(_)
                | Error::BadExponent { .. }
                | Error::BadEpsilon(_)
                | Error::Config(_)
        ) || matches!(self, Error::Stage { source, .. } if source.is_validation())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
