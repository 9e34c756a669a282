//! Reproduce the reference grid of expected draw counts.
//!
//! For supports of m ∈ {5, 8, 10} values drawn with power-law probabilities
//! (θ = 1.75, c = 0.30), print the expected number of draws needed to
//! collect k = 2..8 distinct values, and in parentheses the expected number
//! of distinct values a sample of exactly that (fractional) size contains —
//! the two quantities are duals, so the parenthetical always lands close to
//! k and the gap narrows as k grows.
//!
//! Run with: `cargo run --example reference_table`

use record_collector::distribution::{MandelbrotParams, ProbabilityVector};
use record_collector::exact::{expected_distinct_records, expected_draws_dp};

fn main() -> record_collector::Result<()> {
    let supports = [5usize, 8, 10];
    let max_k = 8;

    let mut columns = Vec::new();
    for m in supports {
        let params = MandelbrotParams::new(m, 1.75, 0.30)?;
        let p = ProbabilityVector::mandelbrot(&params);
        let table = expected_draws_dp(&p, max_k.min(m))?;
        let mut cells = Vec::new();
        for k in 2..=max_k.min(m) {
            let draws = table.value_at(k).expect("table covers 1..=k");
            let records = expected_distinct_records(&p, draws)?;
            cells.push((k, draws, records));
        }
        columns.push((m, cells));
    }

    let mut line = format!("{:<4}", "k");
    for (m, _) in &columns {
        line.push_str(&format!("{:<18}", format!("m={m}")));
    }
    println!("{}", line.trim_end());
    for k in 2..=max_k {
        let mut line = format!("{k:<4}");
        for (_, cells) in &columns {
            let cell = match cells.iter().find(|c| c.0 == k) {
                Some(&(_, draws, records)) => format!("{draws:8.2} ({records:.2})"),
                None => "       -".to_string(),
            };
            line.push_str(&format!("{cell:<18}"));
        }
        println!("{}", line.trim_end());
    }
    Ok(())
}
