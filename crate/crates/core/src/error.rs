use thiserror::Error;

/// Every failure the library can report.
///
/// Variants split into validation errors (bad inputs, violated
/// preconditions) and numerical failures; [`Error::is_numerical`] tells
/// them apart, which the command-line front end maps onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("conformal map is not injective: |Phi'| = {min_derivative:e} on the probe grid")]
    NonInjectiveMap { min_derivative: f64 },
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("evaluation point ({x}, {y}) is within {distance:e} of the curve (need > {required:e})")]
    PointTooClose { x: f64, y: f64, distance: f64, required: f64 },
    #[error("curves are too close: separation {separation:e} < {required:e}")]
    CurvesTooClose { separation: f64, required: f64 },
    #[error("dense linear solve failed: {0}")]
    SolveFailure(String),
    #[error("polarization tensor is not sign-definite (eigenvalues {0:?})")]
    NotDefinite([f64; 2]),
    #[error("no positive matrix conductivity solves the neutrality condition (got {0})")]
    NoPositiveSolution(f64),
    #[error("b_D = {0:e} is not zero")]
    BDNotZero(f64),
    #[error("shell conductivity {0} must be below the matrix conductivity 1")]
    ShellTooConductive(f64),
    #[error("bonding parameter is not positive: {0}")]
    NonPositiveBeta(String),
    #[error("|b_D| = {0} exceeds 2 - sqrt(3)")]
    BDTooLarge(f64),
    #[error("singular system: {0}")]
    SingularSystem(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("|gamma| = {gamma} exceeds the positivity bound {bound}")]
    GammaTooLarge { gamma: f64, bound: f64 },
    #[error("point lies inside the core ellipsoid (quadratic form {0})")]
    InsideCore(f64),
    #[error("point lies outside the shell: {0}")]
    OutsideShell(String),
    #[error("foci are degenerate: a_(d-1) = a_d = {0}")]
    DegenerateFoci(f64),
    #[error("ill-conditioned system: condition number {0:e}")]
    IllConditioned(f64),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SolveFailure(_)
                | Error::SingularSystem(_)
                | Error::NoConvergence { .. }
                | Error::IllConditioned(_)
                | Error::NotDefinite(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
