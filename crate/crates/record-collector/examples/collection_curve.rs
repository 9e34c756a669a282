//! A whole collection curve from one simulation pass — and the duality
//! between the two expectations.
//!
//! `collection_curve` runs each replicate once, to the largest target, and
//! records when every intermediate target was first met; the estimate for
//! each k is bitwise identical to a dedicated single-target run with the
//! same seed. The printed check exploits the duality: feeding the mean draw
//! count for k distinct values back into the exact distinct-values-in-n-draws
//! formula must land close to k (exactly k would require the mean of the
//! inverse, not the inverse of the mean, so a small positive gap remains).
//!
//! Run with: `cargo run --example collection_curve`

use record_collector::distribution::{MandelbrotParams, ProbabilityVector};
use record_collector::exact::expected_distinct_records;
use record_collector::monte_carlo::{collection_curve, SimulationTarget};

fn main() -> record_collector::Result<()> {
    let params = MandelbrotParams::new(100, 1.75, 0.30)?;
    let p = ProbabilityVector::mandelbrot(&params);
    let ks: Vec<usize> = (1..=30).collect();
    let estimates = collection_curve(&p, &ks, 4000, 0)?;

    println!("m = 100, theta = 1.75, c = 0.30, 4000 replicates");
    println!(
        "{:<4}{:>14}{:>12}{:>18}",
        "k", "mean draws", "stderr", "records at mean"
    );
    for est in &estimates {
        let SimulationTarget::DrawsForRecords { k } = est.target else {
            unreachable!("curve estimates draw counts");
        };
        let records = expected_distinct_records(&p, est.mean)?;
        println!(
            "{k:<4}{:>14.3}{:>12.4}{:>18.3}",
            est.mean, est.stderr, records
        );
    }
    Ok(())
}
