use thiserror::Error;

/// Errors produced by the estimation, correction, and forecasting routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("lag exceeds length: lag {lag} with {len} observations")]
    LagExceedsLength { lag: usize, len: usize },

    #[error("series too short: {len} observations, {required} required")]
    TooShort { len: usize, required: usize },

    #[error("constant series: autoregression undefined")]
    ConstantSeries,

    #[error("diff order would become negative")]
    NegativeDiffOrder,

    #[error("singular normal equations")]
    SingularSystem,

    #[error("ill-conditioned system: condition estimate {cond:.3e}")]
    IllConditioned { cond: f64 },

    #[error("nonstationary model: max characteristic root modulus {max_modulus}")]
    NonStationary { max_modulus: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "autocovariance tail not summable: window {window} exceeded without meeting tolerance"
    )]
    TruncationFailure { window: usize },

    #[error("moment not provided for lag pattern {0}")]
    MissingMoment(String),

    #[error("overcorrection: error variance too large for observed variability (corrected gamma0 = {gamma0})")]
    Overcorrection { gamma0: f64 },

    #[error("error-model bound violated: {0}")]
    BoundViolation(String),

    #[error("bootstrap failure rate too high: {failed} of {total} replicates failed")]
    BootstrapFailures { failed: usize, total: usize },

    #[error("asymmetric covariance matrix: asymmetry {asymmetry:.3e} exceeds tolerance")]
    AsymmetricMatrix { asymmetry: f64 },

    #[error("closed-form MSPE only for p=1; use monte_carlo_mspe")]
    MspeOrderUnsupported,

    #[error("eigenvalue iteration failed to converge")]
    EigenNoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
