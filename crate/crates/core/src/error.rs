use thiserror::Error;

/// Errors shared by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown {kind} family `{name}`")]
    UnknownFamily { kind: &'static str, name: String },

    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: String, reason: String },

    #[error("log-depth is not finite at eta = {eta}")]
    NonFiniteDepth { eta: f64 },

    #[error("tabulated curvature must vanish for |xi| >= R (sample {index} = {value})")]
    CurvatureOutsideSupport { index: usize, value: f64 },

    #[error("strip self-intersects: safety margin A = {margin} must be < 1")]
    SelfIntersection { margin: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate drift: <B phi, phi> = {value} (beta' vanishes on the support of phi)")]
    DegenerateDrift { value: f64 },

    #[error("factorization failed at pivot {pivot}: matrix is not positive definite")]
    Factorization { pivot: usize },

    #[error("no positive essential-spectrum edge: the dispersion curve vanishes identically")]
    NoPositiveEdge,

    #[error(
        "dispersion maximum at alpha = {alpha} sits on the search boundary [{lo}, {hi}]; widen the bracket"
    )]
    BoundaryHit { alpha: f64, lo: f64, hi: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("eigensolver did not converge after {iterations} restarts (worst residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 2 for invalid input or violated hypotheses,
    /// 3 for numerical failure, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::Factorization { .. }
            | Error::NoConvergence { .. }
            | Error::NoPositiveEdge
            | Error::BoundaryHit { .. } => 3,
            _ => 2,
        }
    }
}
