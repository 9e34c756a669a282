//! Load draw probabilities from a file.
//!
//! The format is one probability per line; blank lines and `#` comments are
//! ignored, and the entries must be strictly positive and sum to 1 within
//! 1e-12. The loaded vector then works with every computation in the crate —
//! here the full expected-collection table, a cross-check via
//! inclusion-exclusion, and a seeded simulation.
//!
//! Run with: `cargo run --example pmf_from_file`

use record_collector::distribution::ProbabilityVector;
use record_collector::exact::{expected_completion_maxmin, expected_draws_dp};
use record_collector::monte_carlo::estimate_expected_draws;

fn main() -> record_collector::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/sample.pmf");
    let p = ProbabilityVector::from_file(path)?;
    println!("loaded {}: {} entries", p.label(), p.m());
    for (i, prob) in p.probs().iter().enumerate() {
        println!("  value {:>2}: {prob:.4}", i + 1);
    }

    let m = p.m();
    let table = expected_draws_dp(&p, m)?;
    println!();
    println!("expected draws to collect k distinct faces:");
    for row in table.rows() {
        println!("  k = {}: {:>10.4}", row.k, row.value);
    }

    let maxmin = expected_completion_maxmin(&p)?;
    let est = estimate_expected_draws(&p, m, 20_000, 0)?;
    println!();
    println!("full collection, three ways:");
    println!(
        "  seen-set sweep       {:.4}",
        table.value_at(m).expect("row exists")
    );
    println!("  inclusion-exclusion  {maxmin:.4}");
    println!(
        "  simulation           {:.4} +/- {:.4}",
        est.mean, est.stderr
    );
    Ok(())
}
