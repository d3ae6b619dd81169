use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("mode {mode:?} is outside the index set for M = {modes:?}")]
    ModeOutOfRange { mode: Vec<i64>, modes: Vec<usize> },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("cannot project from M = {fine:?} onto M = {coarse:?}: target must be even and divide the source")]
    Projection { fine: Vec<usize>, coarse: Vec<usize> },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("initial data `{key}` lives on {expected}, grid covers {found}")]
    DomainMismatch {
        key: &'static str,
        expected: String,
        found: String,
    },

    #[error("unknown initial data key `{0}` (expected accuracy-1d, irrational-2d or oscillatory-1d)")]
    UnknownCatalogKey(String),

    #[error("invalid time step: {0}")]
    InvalidStep(String),

    #[error("non-finite value after step {step}")]
    NonFinite { step: u64 },

    #[error("study grid M = {m:?} does not divide reference grid M_ref = {m_ref:?}")]
    ReferenceGrid { m: Vec<usize>, m_ref: Vec<usize> },

    #[error("study step {step:e} is not an integer multiple of reference step {reference:e}")]
    ReferenceStep { step: f64, reference: f64 },

    #[error("no reference checkpoint at reference step {0}")]
    MissingCheckpoint(u64),

    #[error("study cell (eps = {epsilon}, {column}) failed: {source}")]
    Cell {
        epsilon: f64,
        column: String,
        #[source]
        source: Box<Error>,
    },
}
