use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("vector norm {norm:e} is too small to define a line")]
    DegenerateVector { norm: f64 },

    #[error("the two lines coincide")]
    DegeneratePair,

    #[error("degenerate triple: {0}")]
    DegenerateTriple(String),

    #[error("lines are not collinear (third singular value {sigma3:e})")]
    NotCollinear { sigma3: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("outside domain: {0}")]
    Domain(String),

    #[error("parameters are not in the required case: {0}")]
    Case(String),

    #[error("witness parameter out of range: {0}")]
    WitnessRange(String),

    #[error("bases do not span the same plane (residual {residual:e})")]
    Span { residual: f64 },

    #[error("images are not induced by a Wigner symmetry (probe {probe}, residual {residual:e})")]
    NotAWignerMap { probe: usize, residual: f64 },
}

impl Error {
    /// Stable machine-readable code, used by the CLI error payload.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "DimensionError",
            Error::DegenerateVector { .. } => "DegenerateVectorError",
            Error::DegeneratePair => "DegeneratePairError",
            Error::DegenerateTriple(_) => "DegenerateTripleError",
            Error::NotCollinear { .. } => "NotCollinearError",
            Error::Parameter(_) => "ParameterError",
            Error::Range(_) => "RangeError",
            Error::Domain(_) => "DomainError",
            Error::Case(_) => "CaseError",
            Error::WitnessRange(_) => "WitnessRangeError",
            Error::Span { .. } => "SpanError",
            Error::NotAWignerMap { .. } => "NotAWignerMapError",
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
