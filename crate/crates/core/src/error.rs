use thiserror::Error;

/// Errors raised by the library. Each variant belongs to one module; see
/// [`Error::module`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("number of sites {n} outside supported range {min}..={max}")]
    Size { n: u32, min: u32, max: u32 },

    #[error("bit pattern {bits:#b} does not fit in {n} sites")]
    InvalidBits { n: u32, bits: u32 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("state is not normalized (norm squared {0})")]
    NotNormalized(f64),

    #[error("phase index {m} out of range for period {period}")]
    PhaseIndexOutOfRange { m: u32, period: u32 },

    #[error("unsupported hamiltonian: {0}")]
    UnsupportedHamiltonian(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{n} sites is outside the tabulated range {min}..={max}")]
    TableRange { n: u32, min: u32, max: u32 },
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Size { .. } => "size_error",
            Error::InvalidBits { .. } => "invalid_bits",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::NotNormalized(_) => "not_normalized",
            Error::PhaseIndexOutOfRange { .. } => "phase_index_out_of_range",
            Error::UnsupportedHamiltonian(_) => "unsupported_hamiltonian",
            Error::EmptyInput(_) => "empty_input",
            Error::Parse(_) => "parse_error",
            Error::TableRange { .. } => "table_range",
        }
    }

    /// Module the error originates from.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Size { .. } | Error::InvalidBits { .. } => "necklace",
            Error::DimensionMismatch { .. } | Error::DegenerateInput(_) | Error::NotNormalized(_) => "hilbert",
            Error::PhaseIndexOutOfRange { .. } => "tibasis",
            Error::UnsupportedHamiltonian(_) | Error::EmptyInput(_) => "hamiltonian",
            Error::Parse(_) => "io",
            Error::TableRange { .. } => "tables",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
