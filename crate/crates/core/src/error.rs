use thiserror::Error;

/// Errors produced by source construction, analysis, the optimizer and the
/// experiment layer.
#[derive(Debug, Error)]
pub enum Error {
    /// A spec parameter failed validation; the message names the field.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Unknown source id.
    #[error("unknown source id `{0}`")]
    UnknownSource(String),

    /// Unknown benchmark function id.
    #[error("unknown function id {0}")]
    UnknownFunction(u32),

    /// Input vector length does not match the function dimension.
    #[error("dimension mismatch: function {id} expects {expected}, got {got}")]
    DimensionMismatch { id: u32, expected: usize, got: usize },

    /// The objective returned a non-finite value; the run is aborted.
    #[error("non-finite objective value on function {function_id} at {position:?}")]
    NonFiniteObjective { function_id: u32, position: Vec<f64> },

    /// An operation that only applies to chaotic maps was called on a
    /// distribution-backed source.
    #[error("Lyapunov defined for maps only")]
    NotAMap,

    /// A sample was empty where at least one observation is required.
    #[error("empty sample")]
    EmptySample,

    /// Paired-sample operation called with samples of different lengths.
    #[error("paired samples differ in length: {0} vs {1}")]
    UnequalLengths(usize, usize),

    /// Sequence too short for the requested lag range.
    #[error("sequence length {len} must exceed the maximum lag {lmax}")]
    SequenceTooShort { len: usize, lmax: usize },

    /// Autocorrelation report does not cover the lags required for the AUC.
    #[error("autocorrelation report is missing lags 1..={0}")]
    MissingLags(usize),

    /// A sequence had zero variance, so autocorrelation is undefined.
    #[error("autocorrelation undefined for a constant sequence")]
    ConstantSequence,

    /// Not enough data points for the requested summary.
    #[error("need at least {need} data points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    /// Run counts are not divisible into rating blocks.
    #[error("run count {runs} is not divisible by block size {block_size}")]
    IndivisibleRuns { runs: usize, block_size: usize },

    /// Result set does not cover every required (source, function) pair.
    #[error("missing results for: {0}")]
    CoverageGaps(String),

    /// The Glicko-2 volatility iteration failed to converge.
    #[error("volatility iteration did not converge after {0} steps")]
    VolatilityNonConvergence(usize),

    /// Configuration file problem.
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
