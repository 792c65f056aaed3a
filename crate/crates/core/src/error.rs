use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("string damping vanishes, coherence length is infinite")]
    InfiniteCoherence,

    #[error("unknown quantity kind `{0}`")]
    UnknownKind(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error_estimate:e} after {subdivisions} subdivisions")]
    QuadratureFailure {
        estimate: f64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error(
        "solver did not converge after {iterations} iterations (best residual {best_residual:e})"
    )]
    NonConvergence {
        iterations: usize,
        best_residual: f64,
    },

    #[error("trajectory left the potential domain at gamma*tau = {tau}, x/xi = {x}")]
    RunawayTrajectory { tau: f64, x: f64 },

    #[error(
        "field grid misses {truncated_fraction:e} of the energy integral beyond its last node"
    )]
    GridCoverage { truncated_fraction: f64 },

    #[error("no sample at gamma*tau = {0}")]
    MissingTau(f64),

    #[error("argument {0} is out of range")]
    OutOfRange(f64),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("expected regime {expected}, found {found}")]
    WrongRegime { expected: String, found: String },

    #[error("nonohmic friction is undefined at zero velocity")]
    ZeroVelocity,

    #[error("singular linear system")]
    SingularSystem,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
