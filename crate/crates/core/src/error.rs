use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{func}: argument {value} outside domain ({expected})")]
    Domain {
        func: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("Laguerre degree {0} exceeds the supported maximum of {max}", max = crate::specfun::MAX_LAGUERRE_DEGREE)]
    DegreeTooLarge(usize),

    #[error("Airy zero index {0} outside 1..=10")]
    AiryZeroIndex(usize),

    #[error("nu = 0 is degenerate for the power-law pathway; use the logarithmic solver")]
    DegenerateExponent,

    #[error("no real stationary point in x: b*nu = {bnu} must be positive (sign/exponent mismatch)")]
    NoStationaryPoint { bnu: f64 },

    #[error("correction-factor denominator a1*nu^2 + a2*nu + a3 vanishes at nu = {nu}")]
    SingularDenominator { nu: f64 },

    #[error("no interior minimum of epsilon(d) in [{lo}, {hi}]")]
    NoMinimumInBracket { lo: f64, hi: f64 },

    #[error("least-squares fit did not converge after {iterations} iterations (max residual {max_residual:.3e})")]
    FitNotConverged {
        iterations: usize,
        max_residual: f64,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("energy bracket [{lo}, {hi}] does not straddle node count {target} (nodes: {nodes_lo} .. {nodes_hi})")]
    BracketTooNarrow {
        lo: f64,
        hi: f64,
        target: usize,
        nodes_lo: usize,
        nodes_hi: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
