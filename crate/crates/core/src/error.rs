use thiserror::Error;

/// Errors raised by the engines.
///
/// Every variant carries a stable machine-readable code (see [`Error::code`])
/// which the command-line front end reports verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty or reversed interval [{a}, {b})")]
    EmptyInterval { a: String, b: String },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: String,
        range: &'static str,
    },

    #[error("set is not a wavelet set: {0}")]
    NotWaveletSet(String),

    #[error("point {0} lies outside the dilation orbit of the map's core")]
    OutsideDilationOrbit(String),

    #[error("refinement produced more than {cap} pieces")]
    PieceCapExceeded { cap: usize },

    #[error("torsion mismatch: family order {expected}, map torsion {found:?}")]
    TorsionMismatch { expected: usize, found: Option<usize> },

    #[error("coefficient criterion fails (max deviation {0:.3e})")]
    CriterionFailed(f64),

    #[error("infeasible weights: {0}")]
    Infeasible(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("frame is not Parseval (deviation {0:.3e})")]
    NotParseval(f64),

    #[error("frames are not strongly disjoint (|G F*| = {0:.3e})")]
    NotDisjoint(f64),

    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),

    #[error("invalid unitary system: {0}")]
    InvalidSystem(String),

    #[error("vector is not a complete wandering vector")]
    NotWandering,

    #[error("matrix is singular or not positive definite")]
    Singular,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal check failed: {0}")]
    Postcondition(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyInterval { .. } => "empty_interval",
            Error::ParameterOutOfRange { .. } => "parameter_out_of_range",
            Error::NotWaveletSet(_) => "not_wavelet_set",
            Error::OutsideDilationOrbit(_) => "outside_dilation_orbit",
            Error::PieceCapExceeded { .. } => "piece_cap_exceeded",
            Error::TorsionMismatch { .. } => "torsion_mismatch",
            Error::CriterionFailed(_) => "criterion_failed",
            Error::Infeasible(_) => "infeasible",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NotParseval(_) => "not_parseval",
            Error::NotDisjoint(_) => "not_disjoint",
            Error::InvalidGroupTable(_) => "invalid_group_table",
            Error::InvalidSystem(_) => "invalid_system",
            Error::NotWandering => "not_wandering",
            Error::Singular => "singular",
            Error::InvalidInput(_) => "invalid_input",
            Error::Postcondition(_) => "postcondition",
            Error::Json(_) => "malformed_json",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
