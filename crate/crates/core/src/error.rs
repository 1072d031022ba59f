use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("model `{0}` has pending normalization; call normalize() first")]
    NotNormalized(String),

    #[error("unknown model id `{0}`")]
    UnknownModel(String),

    #[error("unsupported for model `{model}`: {what}")]
    Unsupported { model: String, what: String },

    #[error("quadrature did not converge: estimate {estimate}, error estimate {error_estimate:e}")]
    QuadratureNonConvergence { estimate: f64, error_estimate: f64 },

    #[error("normalization check failed: integral of normalized density is {integral}")]
    NormalizationCheck { integral: f64 },

    #[error("rejection sampler acceptance rate {rate:e} is below 1e-4")]
    LowAcceptance { rate: f64 },

    #[error("density value {value} exceeds rejection envelope {envelope}")]
    EnvelopeViolated { value: f64, envelope: f64 },

    #[error("radius {r} violates r <= eps/2 (eps = {eps})")]
    RadiusTooLarge { r: f64, eps: f64 },

    #[error("schedule infeasible at n = {n}: {violated}{}", min_valid_hint(.min_valid_n))]
    ScheduleInfeasible {
        n: u64,
        violated: String,
        min_valid_n: Option<u64>,
    },

    #[error("empty feasible region: {0}")]
    EmptyRegion(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn min_valid_hint(n: &Option<u64>) -> String {
    match n {
        Some(n) => format!("; schedule valid from n = {n}"),
        None => "; no n makes the schedule valid".to_string(),
    }
}

impl Error {
    /// True for errors raised by infeasible parameter combinations at run time,
    /// as opposed to malformed input or I/O failures.
    pub fn is_infeasibility(&self) -> bool {
        matches!(
            self,
            Error::RadiusTooLarge { .. }
                | Error::ScheduleInfeasible { .. }
                | Error::EmptyRegion(_)
                | Error::LowAcceptance { .. }
                | Error::RootFinding(_)
                | Error::QuadratureNonConvergence { .. }
        )
    }
}
