use thiserror::Error;

/// Errors raised by the geometric, representation and evolution routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point coincides with 1, the pole of the Cayley transform")]
    PoleAtOne,
    #[error("evaluation point coincides with an atom at {0}")]
    PoleAtAtom(f64),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("measure has zero total mass")]
    DegenerateMeasure,
    #[error("point {0} is not a regular contact point")]
    NotRegularContact(f64),
    #[error("endpoints are not fixed: {0}")]
    NotNormalized(String),
    #[error("the identity map is excluded")]
    IdentityExcluded,
    #[error("unsupported measure class: {0}")]
    UnsupportedMeasureClass(String),
    #[error("generator does not vanish at the boundary point (|G| = {0:e})")]
    NotAFixedPoint(f64),
    #[error("angular derivative is infinite at the boundary point")]
    InfiniteDerivative,
    #[error("synthesis infeasible: {0}")]
    InfeasibleSynthesis(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("trajectory stalled within the guard band at t = {t}")]
    GuardBandStall {
        t: f64,
        /// Accepted nodes `[t, re, im]` up to the stall.
        partial: Vec<[f64; 3]>,
    },
    #[error("maximum number of solver steps ({0}) exceeded")]
    MaxStepsExceeded(usize),
    #[error("no angular limit: radial values diverge")]
    NoAngularLimit,
    #[error("angular derivative grows without bound along the radius")]
    InfiniteAngularDerivative,
    #[error("Denjoy-Wolff location inconclusive: {0}")]
    Inconclusive(String),
    #[error("generators have different Denjoy-Wolff points")]
    MixedDenjoyWolff,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
