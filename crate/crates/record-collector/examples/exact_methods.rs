//! The same expectation by independent exact routes.
//!
//! Three algorithms compute the expected draw count: the ordered-prefix
//! enumeration (`naive`, cost grows like m!/(m−k)!), the seen-set sweep
//! (`dp`, cost `Σ_{j<k} C(m,j)`), and — for the full collection only — the
//! inclusion-exclusion identity (`maxmin`, cost 2^m). For equal
//! probabilities there is additionally a one-line closed form. They agree to
//! ~14 significant digits, which is the point: each is a check on the
//! others.
//!
//! Run with: `cargo run --example exact_methods`

use record_collector::distribution::{MandelbrotParams, ProbabilityVector};
use record_collector::exact::{
    expected_completion_maxmin, expected_draws_dp, expected_draws_naive, expected_draws_uniform,
};

fn main() -> record_collector::Result<()> {
    let m = 6;
    let params = MandelbrotParams::new(m, 1.75, 0.30)?;
    let p = ProbabilityVector::mandelbrot(&params);

    println!("power-law support, m = {m} (theta = 1.75, c = 0.30)");
    println!("{:<4}{:>20}{:>20}{:>12}", "k", "naive", "dp", "rel diff");
    let naive = expected_draws_naive(&p, m)?;
    let dp = expected_draws_dp(&p, m)?;
    for k in 1..=m {
        let a = naive.value_at(k).expect("row exists");
        let b = dp.value_at(k).expect("row exists");
        println!("{k:<4}{a:>20.12}{b:>20.12}{:>12.1e}", (a - b).abs() / b);
    }

    let maxmin = expected_completion_maxmin(&p)?;
    let full = dp.value_at(m).expect("row exists");
    println!();
    println!("full collection (k = m = {m}):");
    println!("  seen-set sweep       {full:.12}");
    println!("  inclusion-exclusion  {maxmin:.12}");

    let uniform = ProbabilityVector::uniform(m)?;
    let dp_uniform = expected_draws_dp(&uniform, m)?;
    println!();
    println!("uniform support, m = {m}:");
    println!("{:<4}{:>20}{:>20}", "k", "closed form", "dp");
    for k in 1..=m {
        let closed = expected_draws_uniform(m, k)?;
        let swept = dp_uniform.value_at(k).expect("row exists");
        println!("{k:<4}{closed:>20.12}{swept:>20.12}");
    }
    Ok(())
}
