use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("negative exponent not allowed in {0}")]
    NegativeExponent(&'static str),

    #[error("coordinate {0} is zero but carries a negative exponent")]
    ZeroCoordinate(usize),

    #[error("component {0} of the scaling vector is zero")]
    ZeroScaling(usize),

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("non-finite value")]
    NonFinite,

    #[error("combinatorial overflow: {0}")]
    Overflow(String),

    #[error("basis is linearly dependent")]
    LinearlyDependent,

    #[error("empty basis")]
    EmptyBasis,

    #[error("space is not D-invariant: derivative in coordinate {coordinate} of basis element {element} leaves the span (relative residual {residual:e})")]
    NotDInvariant {
        element: usize,
        coordinate: usize,
        residual: f64,
    },

    #[error("space is not spanned by homogeneous polynomials")]
    NotHomogeneouslyGenerated,

    #[error("polynomial lies outside the span (relative residual {0:e})")]
    NotInSpan(f64),

    #[error("singular coefficient matrix")]
    Singular,

    #[error("zeros {first} and {second} coincide")]
    DuplicateZero { first: usize, second: usize },

    #[error("interpolation matrix never reached full row rank up to degree {degree}")]
    RankDeficient { degree: usize },

    #[error("requested {requested} filters but the nullspace has dimension {available}")]
    NullspaceTooSmall { requested: usize, available: usize },

    #[error("dual conditions fail: max violation {max_violation:e}")]
    VerificationFailed { max_violation: f64 },

    #[error("kernel certificate failed: residual {residual:e} exceeds bound {bound:e}")]
    CertificateFailed { residual: f64, bound: f64 },

    #[error("missing sample at {0:?}")]
    Coverage(Vec<i64>),

    #[error("invalid dilation matrix: {0}")]
    InvalidDilation(String),

    #[error("symmetric-zero, subsymbol and kernel tests disagree for candidate {0}")]
    Inconsistent(usize),

    #[error("invalid tolerance")]
    InvalidTolerance,

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("convention calibration failed: {0}")]
    Calibration(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by malformed or inconsistent input data, as
    /// opposed to a mathematical check that ran and failed.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::NegativeExponent(_)
                | Error::ZeroCoordinate(_)
                | Error::ZeroScaling(_)
                | Error::ZeroPolynomial
                | Error::NonFinite
                | Error::LinearlyDependent
                | Error::EmptyBasis
                | Error::NotDInvariant { .. }
                | Error::NotHomogeneouslyGenerated
                | Error::InvalidDilation(_)
                | Error::InvalidTolerance
                | Error::InvalidWindow(_)
                | Error::Parse(_)
        )
    }
}
