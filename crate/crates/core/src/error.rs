//! Error taxonomy shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain an evaluator supports.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid configuration or parameters.
    #[error("config error: {0}")]
    Config(String),

    /// A second derivative was requested on the singular line s = x1 - t = 0.
    #[error("singular error: {0}")]
    Singular(String),

    /// The Riccati profile exceeded its safety bound inside the domain.
    #[error("profile blow-up: {0}")]
    ProfileBlowup(String),

    /// Adaptive quadrature failed to converge to the requested tolerance.
    #[error("quadrature error: {0}")]
    Quadrature(String),

    /// ODE integration or dense-output certification failure.
    #[error("ode error: {0}")]
    Ode(String),

    /// Point fails a surface's defining equation.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// An operation's input contract was violated.
    #[error("precondition error: {0}")]
    Precondition(String),

    /// A verification check failed (named constant or bound violated).
    #[error("verification failure: {0}")]
    Verification(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code class per the CLI contract: 2 config, 3 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Precondition(_) => 2,
            Error::Quadrature(_) | Error::Ode(_) | Error::ProfileBlowup(_) => 3,
            _ => 1,
        }
    }
}
