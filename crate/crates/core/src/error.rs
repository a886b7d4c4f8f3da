use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("boundary points are not pairwise distinct")]
    DegeneratePoints,
    #[error("isometry is not hyperbolic (|trace| = {trace})")]
    NotHyperbolic { trace: f64 },
    #[error("geodesics share an endpoint")]
    SharedEndpoint,
    #[error("geodesics intersect")]
    Intersecting,
    #[error("point is {distance:e} away from the geodesic")]
    PointOffGeodesic { distance: f64 },
    #[error("leaf {index} does not cross the axis")]
    LeafMissesAxis { index: usize },
    #[error("leaf {first} crosses the translate of leaf {second} by gamma^{power}")]
    LeavesCross {
        first: usize,
        second: usize,
        power: i32,
    },
    #[error("leaves {first} and {second} cross the axis at the same point")]
    DuplicateCrossing { first: usize, second: usize },
    #[error("sheared isometry at t = {t} is not hyperbolic (|trace| = {trace})")]
    DegenerateResult { t: f64, trace: f64 },
    #[error("crossing of leaf {index} with the axis is lost at t = {t}")]
    CrossingLost { index: usize, t: f64 },
    #[error("the lower bound needs at least two crossings")]
    SingleCrossing,
    #[error("matrix violates the positivity hypotheses at ({row}, {col})")]
    HypothesesFail { row: usize, col: usize },
    #[error("derivative order {0} is not supported")]
    UnsupportedOrder(usize),
    #[error("probe {index} does not cross the axis between h and h'")]
    ProbeOutOfRange { index: usize },
    #[error("bad spiral seed leaves: {0}")]
    BadSeedLeaves(String),
    #[error("non-finite sample at step {step}")]
    NonFiniteSample { step: f64 },
    #[error("trace {trace} too close to 2 for a first derivative of arccosh")]
    TraceTooClose { trace: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
