//! Collection times for finite discrete distributions.
//!
//! Given a distribution p = (p_1, …, p_m) on m support points, this crate
//! answers two dual questions:
//!
//! * how many draws are needed, on average, before k *distinct* values have
//!   been observed (the unequal-probability coupon-collector waiting time), and
//! * how many distinct values does a sample of n draws contain on average.
//!
//! Three layers of machinery are provided:
//!
//! * [`exact`] — closed forms and two independent exact algorithms (an
//!   ordered-prefix enumeration and a seen-set dynamic program) that agree to
//!   high precision, plus an inclusion-exclusion full-collection formula;
//! * [`monte_carlo`] — seeded, replicate-substreamed simulation whose output is
//!   byte-identical regardless of thread count;
//! * [`heaps`] — the Heaps-law power-law asymptotic `E[R(n)] ≈ α·n^β` for the
//!   Zipf–Mandelbrot family, its inverse `(k/α)^θ`, and the threshold τ beyond
//!   which the approximation degrades.
//!
//! The [`distribution`] module builds and validates the input distributions,
//! including the Zipf–Mandelbrot family `p_i ∝ (c+i)^{−θ}` and the
//! infinite-support normalization limit used by the asymptotic layer.
//!
//! ```
//! use record_collector::distribution::ProbabilityVector;
//! use record_collector::exact::{expected_draws_dp, expected_distinct_records};
//!
//! let p = ProbabilityVector::uniform(4)?;
//! let table = expected_draws_dp(&p, 4)?;
//! // 1 + 4/3 + 4/2 + 4/1 draws to see all four values.
//! assert!((table.value_at(4).unwrap() - 25.0 / 3.0).abs() < 1e-12);
//!
//! // Dual direction: distinct values expected in a sample of that size.
//! let r = expected_distinct_records(&p, 25.0 / 3.0)?;
//! assert!((r - 4.0).abs() < 0.5);
//! # Ok::<(), record_collector::Error>(())
//! ```
//!
//! A binary of the same name exposes the `exact`, `table`, `curve`, and
//! `simulate` subcommands; see the crate README and `examples/` for entry
//! points into each capability.

pub mod cli;
pub mod distribution;
pub mod error;
pub mod exact;
pub mod heaps;
pub mod monte_carlo;
mod sum;

pub use error::{Error, Result};
