use core::fmt;

/// A value left the domain of an elementary operation or the objective
/// produced a non-finite result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainError {
    DivisionByZero,
    SqrtOfNegative(f64),
    /// Derivative of `sqrt` at exactly zero.
    SqrtAtZero,
    PowNonPositiveBase(f64),
    LogNonPositive(f64),
    /// The objective value or a gradient component is NaN or infinite.
    NonFinite {
        coordinate: Option<usize>,
    },
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::DivisionByZero => write!(f, "division by a value with zero real part"),
            DomainError::SqrtOfNegative(v) => write!(f, "sqrt of negative value {v}"),
            DomainError::SqrtAtZero => write!(f, "sqrt is not differentiable at zero"),
            DomainError::PowNonPositiveBase(v) => {
                write!(f, "real power of non-positive base {v}")
            }
            DomainError::LogNonPositive(v) => write!(f, "log of non-positive value {v}"),
            DomainError::NonFinite { coordinate: Some(i) } => {
                write!(f, "non-finite derivative along coordinate {i}")
            }
            DomainError::NonFinite { coordinate: None } => write!(f, "non-finite objective value"),
        }
    }
}

impl core::error::Error for DomainError {}

/// Invalid optimizer or experiment configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    ZeroParticles,
    ZeroDimension,
    DimensionMismatch { expected: usize, found: usize },
    EmptyRange { lower: f64, upper: f64 },
    RequiredConvergences { required: usize, particles: usize },
    Theta(f64),
    LineSearch(&'static str),
    Pso(&'static str),
    UnknownObjective(alloc::string::String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::ZeroParticles => write!(f, "particle count must be at least 1"),
            ConfigError::ZeroDimension => write!(f, "dimension must be at least 1"),
            ConfigError::DimensionMismatch { expected, found } => {
                write!(f, "objective expects dimension {expected}, configuration has {found}")
            }
            ConfigError::EmptyRange { lower, upper } => {
                write!(f, "search range [{lower}, {upper}] is empty")
            }
            ConfigError::RequiredConvergences { required, particles } => {
                write!(f, "required convergences {required} must lie in 1..={particles}")
            }
            ConfigError::Theta(t) => write!(f, "gradient threshold must be positive, got {t}"),
            ConfigError::LineSearch(msg) => write!(f, "line search: {msg}"),
            ConfigError::Pso(msg) => write!(f, "pso: {msg}"),
            ConfigError::UnknownObjective(name) => write!(f, "unknown objective `{name}`"),
        }
    }
}

impl core::error::Error for ConfigError {}

/// Failure of a complete multistart run.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeusError {
    Config(ConfigError),
    /// Every local run ended in a domain error.
    NoValidOptimum,
}

impl fmt::Display for ZeusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeusError::Config(e) => write!(f, "invalid configuration: {e}"),
            ZeusError::NoValidOptimum => write!(f, "every local run ended in a domain error"),
        }
    }
}

impl core::error::Error for ZeusError {}

impl From<ConfigError> for ZeusError {
    fn from(e: ConfigError) -> Self {
        ZeusError::Config(e)
    }
}
