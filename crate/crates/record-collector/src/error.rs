//! Crate-wide error type.

use std::path::PathBuf;

/// Anything that can go wrong while building distributions, computing
/// expectations, simulating, or serving the command line.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A distribution was requested over an empty support.
    #[error("support size must be at least 1")]
    EmptySupport,

    /// A probability entry was zero, negative, or not finite. Every support
    /// point must be reachable, so zeros are rejected rather than dropped.
    #[error(
        "probability at position {index} is {value}; entries must be finite and strictly positive"
    )]
    InvalidProbability { index: usize, value: f64 },

    /// Probabilities did not sum to 1 within the construction tolerance.
    #[error("probabilities sum to {sum}, which is further than {tolerance} from 1")]
    NotNormalized { sum: f64, tolerance: f64 },

    /// A parameter lies outside its mathematical domain.
    #[error("{0}")]
    Domain(String),

    /// The infinite normalization series Σ (c+i)^(−θ) diverges.
    #[error("sum of (c+i)^(-theta) diverges for theta = {theta}; the limit needs theta > 1")]
    DivergentSeries { theta: f64 },

    /// More distinct values were requested than the support holds.
    #[error("cannot collect {k} distinct values from a support of size {m}")]
    InfeasibleTarget { k: usize, m: usize },

    /// Estimated work exceeds a configured cap; the message names both.
    #[error("{what} would cost {estimated} {unit}, over the cap of {cap}; {hint}")]
    ResourceLimit {
        what: &'static str,
        estimated: u128,
        unit: &'static str,
        cap: u128,
        hint: &'static str,
    },

    /// Standard errors need at least two replicates.
    #[error("got {replicates} replicate(s); at least 2 are needed to report a standard error")]
    InsufficientReplicates { replicates: u64 },

    /// A simulation ran past the hard draw ceiling without finishing.
    #[error("simulation exceeded {ceiling} draws without reaching its target")]
    RunawaySimulation { ceiling: u64 },

    /// A PMF file line failed to parse or validate.
    #[error("{}:{line}: {message}", path.display())]
    PmfFile {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// File-level I/O failure.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Flag combinations the parser cannot rule out on its own.
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
