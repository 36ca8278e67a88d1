use thiserror::Error;

/// Every failure the library reports. Domain errors map to exit code 1 in the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("leading coefficient of the divisor in {0} is not invertible in the coefficient field")]
    NonInvertibleLeadingCoefficient(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("vector field has non-polynomial components")]
    NotPolynomial,
    #[error("singular locus is positive dimensional: components share the factor {0}")]
    PositiveDimensionalSingularLocus(String),
    #[error("unsupported: {0}")]
    UnsupportedDegree(String),
    #[error("interior product of a 0-form")]
    ArityZero,
    #[error("coefficient {0} is not in the span of the declared basis")]
    NonRepresentableCoefficient(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("system is not normalized: a = c = 1 is required")]
    NotNormalized,
    #[error("pole encountered at t = {0}")]
    PoleEncountered(f64),
    #[error("non-finite state at t = {0}")]
    NonFiniteState(f64),
    #[error("{0} changes sign along the trajectory")]
    SignChange(String),
    #[error("parameter {0} has no numeric value")]
    UnspecializedParameter(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate equation for {0}")]
    DuplicateEquation(String),
    #[error("undeclared name {name} at line {line}, column {column}")]
    UndeclaredName {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("missing equation for {0}")]
    MissingEquation(String),
}

impl Error {
    /// Stable name of the variant, used in machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::ZeroDivisor => "ZeroDivisor",
            Error::NonInvertibleLeadingCoefficient(_) => "NonInvertibleLeadingCoefficient",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::NotPolynomial => "NotPolynomial",
            Error::PositiveDimensionalSingularLocus(_) => "PositiveDimensionalSingularLocus",
            Error::UnsupportedDegree(_) => "UnsupportedDegree",
            Error::ArityZero => "ArityZero",
            Error::NonRepresentableCoefficient(_) => "NonRepresentableCoefficient",
            Error::DegenerateParameters(_) => "DegenerateParameters",
            Error::NotNormalized => "NotNormalized",
            Error::PoleEncountered(_) => "PoleEncountered",
            Error::NonFiniteState(_) => "NonFiniteState",
            Error::SignChange(_) => "SignChange",
            Error::UnspecializedParameter(_) => "UnspecializedParameter",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Syntax { .. } => "SyntaxError",
            Error::DuplicateEquation(_) => "DuplicateEquation",
            Error::UndeclaredName { .. } => "UndeclaredName",
            Error::MissingEquation(_) => "MissingEquation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
