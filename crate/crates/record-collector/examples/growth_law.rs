//! The power-law growth of distinct-value counts, and where it stops
//! applying.
//!
//! With decay exponent θ ∈ (1, 2] the expected number of distinct values in
//! n draws grows like `α·n^β` (β = 1/θ), so the draws needed for k distinct
//! values behave like `(k/α)^θ`. The law knows nothing about the finite
//! support, so its error is U-shaped in k: large for small k (the asymptotic
//! regime hasn't kicked in) and growing again once the collection size
//! approaches the support — the turning point is the validity threshold
//! `τ = α·m^((θ−1)/θ)`, printed below both in closed form and as refined
//! against the simulation itself.
//!
//! Run with: `cargo run --example growth_law`

use record_collector::distribution::{MandelbrotParams, ProbabilityVector};
use record_collector::heaps::{validity_threshold_simulated, HeapsApprox};
use record_collector::monte_carlo::{collection_curve, SimulationTarget};

fn main() -> record_collector::Result<()> {
    let (m, theta, c) = (500, 1.75, 0.30);
    let approx = HeapsApprox::new(theta, c)?;
    println!("theta = {theta}, c = {c}");
    println!("  a_inf = {:.12}", approx.a_inf());
    println!("  beta  = {:.12}", approx.beta());
    println!("  alpha = {:.12}", approx.alpha());

    let params = MandelbrotParams::new(m, theta, c)?;
    let p = ProbabilityVector::mandelbrot(&params);
    let tau = approx.validity_threshold(m)?;
    let tau_sim = validity_threshold_simulated(&p, &approx, 4000, 0)?;
    println!();
    println!("validity threshold for m = {m}:");
    println!("  closed form          {tau:.3}");
    println!("  refined by simulation {tau_sim:.3}");

    let ks = [5usize, 10, 15, 20, 25, 30, 40, 60];
    let estimates = collection_curve(&p, &ks, 4000, 0)?;
    println!();
    println!(
        "{:<4}{:>14}{:>14}{:>10}",
        "k", "simulated", "(k/alpha)^theta", "gap"
    );
    for est in &estimates {
        let SimulationTarget::DrawsForRecords { k } = est.target else {
            unreachable!("curve estimates draw counts");
        };
        let predicted = approx.expected_draws(k as f64)?;
        println!(
            "{k:<4}{:>14.2}{:>14.2}{:>9.1}%",
            est.mean,
            predicted,
            100.0 * (predicted - est.mean).abs() / est.mean
        );
    }
    println!();
    println!("the gap is smallest near tau = {tau:.1} and grows on both sides");
    Ok(())
}
