use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series operands use different coefficient algebras: {0}")]
    AlgebraMismatch(String),

    #[error("both series operands carry log blocks; log^2 terms never occur in the expansions")]
    DoubleLog,

    #[error("series coefficient index {index} exceeds truncation order {order}")]
    OrderExceeded { index: usize, order: usize },

    #[error("series exponents differ by a non-integer: {0}")]
    ExponentMismatch(String),

    #[error("leading series coefficient is not invertible: {0}")]
    NonInvertibleLeading(String),

    #[error("log-bearing series not supported here: {0}")]
    UnexpectedLog(String),

    #[error("chart axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("field shape does not match chart: {0}")]
    ShapeMismatch(String),

    #[error("metric not positive definite at grid point {point:?} (min eigenvalue {min_eig:.3e})")]
    NotPositiveDefinite { point: Vec<usize>, min_eig: f64 },

    #[error("jet order {have} insufficient, need {need}")]
    JetOrderInsufficient { have: usize, need: usize },

    #[error("probe system singular at grid point {point:?} away from the order-n degeneracy (order {order})")]
    SingularProbe { point: Vec<usize>, order: usize },

    #[error("residual tolerance failed after solve at order {order}: sup norm {norm:.3e}")]
    ResidualTooLarge { order: usize, norm: f64 },

    #[error("spectral parameter s={s} within {dist:.1e} of exceptional value (offending j={j})")]
    ExceptionalS { s: String, j: usize, dist: f64 },

    #[error("invalid order/parameter: {0}")]
    InvalidParameter(String),

    #[error("rational c_(k,s) evaluated at a pole: {0}")]
    RationalPole(String),

    #[error("interpolation failed to stabilise: {0}")]
    InterpolationUnstable(String),

    #[error("matching system ill-conditioned (cond {cond:.3e}); possible eigenvalue collision, try shifting the cap")]
    EigenvalueCollision { cond: f64 },

    #[error("contour residue did not converge under node doubling: {0}")]
    ContourNotConverged(String),

    #[error("s={0} too close to a half-integer for the two-solution formula")]
    NearHalfInteger(String),

    #[error("finite-part subtraction left a non-integrable remainder (coefficient of 1/x is {0:.3e}); exponents are wrong")]
    NonIntegrableRemainder(f64),

    #[error("{msg} at offset {offset}")]
    Parse { msg: String, offset: usize },

    #[error("configuration invalid: {0}")]
    Config(String),

    #[error("numerical tolerance failed: {0}")]
    Tolerance(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
