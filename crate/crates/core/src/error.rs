use thiserror::Error;

/// Errors raised by the shell, nodal and entropy machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alpha must be positive and finite, got {0}")]
    InvalidAlpha(f64),

    #[error("shell {shell} needs {expected} coefficients, got {got}")]
    CoefficientCount { shell: usize, expected: usize, got: usize },

    #[error("coefficient vector is zero or not finite")]
    ZeroState,

    #[error("coefficients are not normalized: sum of squares is {0}")]
    NotNormalized(f64),

    #[error("shell index {0} exceeds the supported maximum of {max}", max = crate::shell::MAX_SHELL)]
    ShellTooLarge(usize),

    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("angular function vanishes identically")]
    DegenerateAngularFunction,

    #[error("operation requires shell N = {expected}, got N = {got}")]
    WrongShell { expected: usize, got: usize },

    #[error("Hermite linear constraint violated (relative residual {0:e})")]
    HermiteConstraint(f64),

    #[error("quadrature did not reach {tol:e}: last estimate {estimate} changed by {change:e}")]
    QuadratureNotConverged { estimate: f64, change: f64, tol: f64 },

    #[error("radial moment self-check failed: alpha<r^2> = {got}, expected {expected}")]
    MomentCheck { got: f64, expected: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid quadrature configuration: {0}")]
    InvalidQuadConfig(String),

    #[error("unknown path kind `{0}`")]
    UnknownPath(String),

    #[error("the general family needs N >= 1")]
    GeneralShellZero,

    #[error("path parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("diagnostic `{diagnostic}` does not apply to shell N = {shell}")]
    DiagnosticNotApplicable { diagnostic: &'static str, shell: usize },

    #[error("Monte Carlo needs at least {min} samples, got {got}")]
    TooFewSamples { got: usize, min: usize },

    #[error("cannot parse report: {0}")]
    Parse(String),

    #[error("documented stratum at t = {t} ({kind}) was not bracketed by the diagnostic")]
    StratumNotBracketed { t: f64, kind: String },
}

pub type Result<T> = std::result::Result<T, Error>;
