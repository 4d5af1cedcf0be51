use std::path::PathBuf;

use thiserror::Error;

/// Which distance bound a record broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// `D_rho <= 2N`
    Density,
    /// `D_psi <= sqrt(2N)`
    WaveFunction,
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Density => write!(f, "density bound 2N"),
            Bound::WaveFunction => write!(f, "wave-function bound sqrt(2N)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:.3e})")]
    Convergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("{bound} violated: value {value} exceeds limit {limit}")]
    BoundViolation { bound: Bound, value: f64, limit: f64 },

    #[error("sweep point `{param}` failed: {source}")]
    SweepPoint {
        param: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the CLI: 1 validation, 2 solver failure,
    /// 3 bound violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::DomainMismatch(_) | Error::Parse(_) | Error::Io { .. } => 1,
            Error::Convergence { .. } | Error::Solver(_) | Error::Quadrature(_) => 2,
            Error::BoundViolation { .. } => 3,
            Error::SweepPoint { source, .. } => source.exit_code(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Error::invalid("x").exit_code(), 1);
        assert_eq!(Error::Parse("x".into()).exit_code(), 1);
        assert_eq!(Error::Solver("x".into()).exit_code(), 2);
        let bound = Error::BoundViolation {
            bound: Bound::Density,
            value: 5.0,
            limit: 4.0,
        };
        assert_eq!(bound.exit_code(), 3);
        let wrapped = Error::SweepPoint {
            param: "omega=1".into(),
            source: Box::new(bound),
        };
        assert_eq!(wrapped.exit_code(), 3);
        assert!(wrapped.to_string().contains("omega=1"));
    }
}
