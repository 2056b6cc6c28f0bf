//! Benchmark harness for particle swarm optimization driven by interchangeable
//! sequence sources: chaotic map orbits and PRNG-backed random distributions.
//!
//! The crate provides
//! - [`sources`]: six chaotic maps and six random distributions behind one
//!   seeded, reproducible stream interface,
//! - [`analysis`]: empirical densities, Lyapunov exponents and autocorrelation
//!   profiles of those streams,
//! - [`functions`]: the 27-entry benchmark function suite,
//! - [`pso`]: a global-best particle swarm optimizer whose stochasticity is
//!   drawn entirely from an injected source,
//! - [`stats`]: Wilcoxon rank-sum and Friedman comparisons folded into a
//!   per-source-pair comparison matrix,
//! - [`rating`]: Elo and Glicko-2 tournament rating of the sources,
//! - [`experiment`]: configuration, the parallel experiment runner and the
//!   CSV export layer.

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod functions;
pub mod pso;
pub mod rating;
pub mod sources;
pub mod stats;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
