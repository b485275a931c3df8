use thiserror::Error;

/// Errors raised by the exact, numeric and tropical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("evolution broke down at site {site}: a_n + b_n vanishes")]
    ZeroDenominator { site: usize },

    #[error("singular input: {0}")]
    Singular(String),

    #[error("degenerate spectral data: {0}")]
    DegenerateSpectrum(String),

    #[error("root iteration did not converge after {iterations} sweeps (best log2 residual {log2_residual:.1})")]
    NoConvergence { iterations: usize, log2_residual: f64 },

    #[error("malformed ultradiscrete state: A and B are both +inf at site {site}")]
    MalformedState { site: usize },

    #[error("degenerate tropical grid: {0}")]
    DegenerateGrid(String),

    #[error("U -> (A, B) recovery needs U_1 <= L, got U_1 = {u1}, L = {l}")]
    RecoveryDomain { u1: String, l: String },

    #[error("valuation uncertain: raw slope {slope:.6} is not close to a small rational")]
    ValuationUncertain { slope: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
