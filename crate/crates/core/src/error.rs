use std::fmt;

/// One violated density-matrix invariant together with its measured size.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Largest entrywise |M - M†|.
    NonHermitian { max_asymmetry: f64 },
    /// Trace differs from one.
    Trace { trace: f64, deviation: f64 },
    /// Smallest eigenvalue of the Hermitian part is below the clamp.
    NotPsd { min_eigenvalue: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonHermitian { max_asymmetry } => {
                write!(f, "not Hermitian: max |M - M^dagger| = {max_asymmetry:e}")
            }
            Violation::Trace { trace, deviation } => {
                write!(f, "trace = {trace} (deviation {deviation:.6e} from 1)")
            }
            Violation::NotPsd { min_eigenvalue } => {
                write!(f, "not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")
            }
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: String, got: String },

    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPsd { eigenvalue: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid density matrix: {}", join_violations(.violations))]
    InvalidState { violations: Vec<Violation> },

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("vector norm {norm} is not within 1e-6 of 1")]
    Unnormalized { norm: f64 },

    #[error("SPA construction produced an invalid state (spectrum {spectrum:?}): {detail}")]
    ConstructionInconsistency { spectrum: Vec<f64>, detail: String },

    #[error("{name} must be at least 1")]
    InvalidCount { name: &'static str },

    #[error("state file: {0}")]
    Io(#[from] std::io::Error),

    #[error("state file: {0}")]
    Json(#[from] serde_json::Error),

    #[error("state file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, slack: f64) -> Result<()> {
    if value.is_nan() || value < lo - slack || value > hi + slack {
        return Err(Error::OutOfRange { name, value, lo, hi });
    }
    Ok(())
}
