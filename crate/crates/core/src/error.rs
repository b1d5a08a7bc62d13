use thiserror::Error;

/// Errors raised across the workbench.
///
/// Variants that describe a mathematically expected outcome (a satisfiable
/// instance, a missing certificate at some degree) are kept distinct from
/// usage errors so the CLI can map them to separate exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("operands live in different fields")]
    LevelMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("tower is degenerate: extension equals base (k = 0)")]
    DegenerateTower,
    #[error("arity mismatch: expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("the zero polynomial has no leading monomial")]
    ZeroPolynomial,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("field of size {size} is too small: need more than {needed} elements")]
    FieldTooSmall { size: String, needed: usize },
    #[error("polynomial is not symmetric on the cube: weights disagree at weight {weight}")]
    NotSymmetric { weight: usize },
    #[error("beta lies in the base field; the Frobenius difference vanishes")]
    BetaInSubfield,
    #[error("polynomial is not of degree at most one")]
    NotLinear,
    #[error("instance is satisfiable on the Boolean cube")]
    SatisfiableInstance,
    #[error("system has a common zero on the Boolean cube (weight {weight})")]
    SatisfiableSystem { weight: usize },
    #[error("no certificate exists within degree bound {bound}")]
    NoCertificateAtDegree { bound: String },
    #[error("denominator vanishes at a cube point")]
    ZeroDenominator,
    #[error("budget exceeded: {what} = {got} exceeds cap {cap}")]
    BudgetExceeded { what: String, got: usize, cap: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Stable snake_case identifier used in machine-readable error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroInverse => "zero_inverse",
            Error::LevelMismatch => "level_mismatch",
            Error::NotPrime(_) => "not_prime",
            Error::InvalidModulus(_) => "invalid_modulus",
            Error::DegenerateTower => "degenerate_tower",
            Error::ArityMismatch { .. } => "arity_mismatch",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::OutOfRange(_) => "out_of_range",
            Error::FieldTooSmall { .. } => "field_too_small",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::BetaInSubfield => "beta_in_subfield",
            Error::NotLinear => "not_linear",
            Error::SatisfiableInstance => "satisfiable_instance",
            Error::SatisfiableSystem { .. } => "satisfiable_system",
            Error::NoCertificateAtDegree { .. } => "no_certificate_at_degree",
            Error::ZeroDenominator => "zero_denominator",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Parse { .. } => "parse_error",
            Error::FieldMismatch(_) => "field_mismatch",
            Error::Unknown { .. } => "unknown_name",
            Error::Internal(_) => "internal",
        }
    }

    /// True for outcomes that are mathematical facts about the input rather
    /// than misuse: satisfiable instances, absent certificates, vanishing
    /// denominators, beta inside the subfield.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::SatisfiableInstance
                | Error::SatisfiableSystem { .. }
                | Error::NoCertificateAtDegree { .. }
                | Error::ZeroDenominator
                | Error::BetaInSubfield
                | Error::NotSymmetric { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
