//! Power-law asymptotics for the collection process.
//!
//! When draw probabilities decay like `(c+i)^(−θ)` with θ ∈ (1, 2], the
//! expected number of distinct values in n draws grows like `α·n^β` with
//! exponent `β = 1/θ` and coefficient `α = a_∞^β · Γ(1−β)`, where `a_∞`
//! normalizes the infinite-support version of the distribution. Inverting
//! gives `(k/α)^θ` as an approximation for the expected draws to collect k
//! distinct values.
//!
//! The approximation ignores the finite support: with only m values the
//! sublinear growth must flatten, and the power law stays useful only while
//! the expected collection is below a threshold of roughly
//! `τ = α·m^((θ−1)/θ)` distinct values. [`HeapsApprox::validity_threshold`]
//! evaluates that closed form and [`validity_threshold_simulated`] refines
//! it against a seeded simulation.

use crate::distribution::{normalization_limit, ProbabilityVector};
use crate::error::{Error, Result};
use crate::monte_carlo::{collection_curve, SimulationTarget};

/// Gamma function by the Lanczos approximation (g = 7, 9 terms), with the
/// reflection formula below 1/2. Accurate to ~1e-13 relative over the range
/// used here; non-positive integers are poles and yield [`Error::Domain`].
pub fn gamma(x: f64) -> Result<f64> {
    const G: f64 = 7.0;
    // Digits kept as published; several exceed f64 round-trip precision.
    #[allow(clippy::excessive_precision)]
    const COEFFICIENTS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];

    if !x.is_finite() {
        return Err(Error::Domain(format!(
            "gamma is defined for finite arguments, got {x}"
        )));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Domain(format!("gamma has a pole at {x}")));
    }
    if x < 0.5 {
        // Γ(x) Γ(1−x) = π / sin(πx)
        return Ok(std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x)?));
    }
    let y = x - 1.0;
    let mut a = COEFFICIENTS[0];
    for (i, &c) in COEFFICIENTS.iter().enumerate().skip(1) {
        a += c / (y + i as f64);
    }
    let t = y + G + 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(y + 0.5) * (-t).exp() * a)
}

/// The coefficient α of the `α·n^β` growth law for decay exponent θ and
/// shift c: `α = a_∞^(1/θ) · Γ(1 − 1/θ)`.
pub fn alpha_coefficient(theta: f64, c: f64) -> Result<f64> {
    Ok(HeapsApprox::new(theta, c)?.alpha())
}

/// The `α·n^β` growth law for one (θ, c) pair, with its inverse and validity
/// threshold.
#[derive(Debug, Clone, Copy)]
pub struct HeapsApprox {
    theta: f64,
    c: f64,
    a_inf: f64,
    beta: f64,
    alpha: f64,
}

impl HeapsApprox {
    /// Build the growth law, computing the infinite-support normalization to
    /// a 1e-12 tail bound. Requires θ ∈ (1, 2]: at θ ≤ 1 the normalizing
    /// series diverges, and beyond 2 the power-law decay regime this
    /// approximation models no longer applies.
    pub fn new(theta: f64, c: f64) -> Result<Self> {
        if !(theta > 1.0 && theta <= 2.0) {
            return Err(Error::Domain(format!(
                "growth law requires theta in (1, 2], got {theta}"
            )));
        }
        let a_inf = normalization_limit(theta, c, 1e-12)?;
        Self::from_parts(theta, c, a_inf)
    }

    /// Build the growth law from an already-computed infinite-support
    /// normalization constant.
    pub fn from_parts(theta: f64, c: f64, a_inf: f64) -> Result<Self> {
        if !(theta > 1.0 && theta <= 2.0) {
            return Err(Error::Domain(format!(
                "growth law requires theta in (1, 2], got {theta}"
            )));
        }
        if !c.is_finite() || c < 0.0 {
            return Err(Error::Domain(format!(
                "shift c must be finite and nonnegative, got {c}"
            )));
        }
        if !a_inf.is_finite() || a_inf <= 0.0 {
            return Err(Error::Domain(format!(
                "normalization constant must be finite and positive, got {a_inf}"
            )));
        }
        let beta = 1.0 / theta;
        let alpha = a_inf.powf(beta) * gamma(1.0 - beta)?;
        Ok(Self {
            theta,
            c,
            a_inf,
            beta,
            alpha,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The infinite-support normalization constant `a_∞`.
    pub fn a_inf(&self) -> f64 {
        self.a_inf
    }

    /// The growth exponent `β = 1/θ`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The growth coefficient `α = a_∞^β · Γ(1−β)`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Approximate expected distinct values in n draws: `α·n^β`.
    pub fn expected_records(&self, n: f64) -> Result<f64> {
        if !n.is_finite() || n < 0.0 {
            return Err(Error::Domain(format!(
                "sample size must be a nonnegative real number, got {n}"
            )));
        }
        Ok(self.alpha * n.powf(self.beta))
    }

    /// Approximate expected draws to collect k distinct values: `(k/α)^θ`.
    /// k may be fractional; this is the exact inverse of
    /// [`Self::expected_records`].
    pub fn expected_draws(&self, k: f64) -> Result<f64> {
        if !k.is_finite() || k < 0.0 {
            return Err(Error::Domain(format!(
                "target k must be a nonnegative real number, got {k}"
            )));
        }
        Ok((k / self.alpha).powf(self.theta))
    }

    /// The collection size up to which the growth law tracks a finite
    /// support of m values: `τ = α·m^((θ−1)/θ)`.
    pub fn validity_threshold(&self, m: usize) -> Result<f64> {
        if m == 0 {
            return Err(Error::EmptySupport);
        }
        Ok(self.alpha * (m as f64).powf((self.theta - 1.0) / self.theta))
    }
}

/// Refine the validity threshold against a seeded simulation: probe every
/// integer collection size in an octave around the closed-form τ, locate the
/// one where the relative gap between `(k/α)^θ` and the simulated expected
/// draw count is smallest, and interpolate a parabola through it and its
/// neighbors.
///
/// All probes share one simulation pass (common random numbers), so the
/// result is deterministic in (replicates, seed) and the probed gap curve is
/// not jittered point-to-point.
pub fn validity_threshold_simulated(
    p: &ProbabilityVector,
    approx: &HeapsApprox,
    replicates: u64,
    seed: u64,
) -> Result<f64> {
    let m = p.m();
    let tau = approx.validity_threshold(m)?;
    let lo = ((tau / 2.0).floor() as usize).max(2);
    let hi = ((tau * 2.0).ceil() as usize).min(m.saturating_sub(1));
    if hi < lo + 2 {
        return Err(Error::Domain(format!(
            "support of {m} values leaves no room to bracket the threshold near {tau:.2}"
        )));
    }
    let ks: Vec<usize> = (lo..=hi).collect();
    let estimates = collection_curve(p, &ks, replicates, seed)?;

    let mut gaps = Vec::with_capacity(estimates.len());
    for est in &estimates {
        let SimulationTarget::DrawsForRecords { k } = est.target else {
            unreachable!("collection_curve estimates draw counts");
        };
        let predicted = approx.expected_draws(k as f64)?;
        gaps.push((predicted - est.mean).abs() / est.mean);
    }
    let best = gaps
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("probe range is nonempty");
    if best == 0 || best == gaps.len() - 1 {
        return Ok(ks[best] as f64);
    }
    let (d0, d1, d2) = (gaps[best - 1], gaps[best], gaps[best + 1]);
    let denom = d0 - 2.0 * d1 + d2;
    if denom <= 0.0 {
        return Ok(ks[best] as f64);
    }
    Ok(ks[best] as f64 + 0.5 * (d0 - d2) / denom)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen high-precision reference digits
mod tests {
    use super::*;
    use crate::distribution::MandelbrotParams;

    // 50-digit reference values computed before this module was written.
    const GAMMA_3_OVER_7: f64 = 2.067_511_726_560_229_4;
    const GAMMA_QUARTER: f64 = 3.625_609_908_221_908_3;
    const GAMMA_THREE_QUARTERS: f64 = 1.225_416_702_465_177_6;
    const GAMMA_TENTH: f64 = 9.513_507_698_668_731_8;
    const SQRT_PI: f64 = 1.772_453_850_905_516;
    const ALPHA_175_03: f64 = 1.654_813_480_827_294_5;
    const A_INF_175_03: f64 = 0.677_293_441_610_961_68;
    const TAU_500_175_03: f64 = 23.738_347_365_192_548;
    const SQRT_6_OVER_PI: f64 = 1.381_976_597_885_341_9;
    const TAU_100_2_0: f64 = 13.819_765_978_853_419;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn gamma_matches_factorials() {
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-12);
        assert!(rel(gamma(2.0).unwrap(), 1.0) < 1e-12);
        assert!(rel(gamma(5.0).unwrap(), 24.0) < 1e-12);
        assert!(rel(gamma(11.0).unwrap(), 3_628_800.0) < 1e-12);
    }

    #[test]
    fn gamma_matches_reference_points() {
        assert!(rel(gamma(0.5).unwrap(), SQRT_PI) < 1e-12);
        assert!(rel(gamma(3.0 / 7.0).unwrap(), GAMMA_3_OVER_7) < 1e-11);
        assert!(rel(gamma(0.25).unwrap(), GAMMA_QUARTER) < 1e-11);
        assert!(rel(gamma(0.75).unwrap(), GAMMA_THREE_QUARTERS) < 1e-11);
        assert!(rel(gamma(0.1).unwrap(), GAMMA_TENTH) < 1e-11);
    }

    #[test]
    fn gamma_reflection_identity_holds() {
        for x in [0.1, 0.25, 3.0 / 7.0, 0.5, 0.75] {
            let product = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
            let want = std::f64::consts::PI / (std::f64::consts::PI * x).sin();
            assert!(rel(product, want) < 1e-10, "x={x}");
        }
    }

    #[test]
    fn gamma_handles_negative_non_integers() {
        // Γ(−1/2) = −2√π
        let got = gamma(-0.5).unwrap();
        assert!(rel(got, -2.0 * SQRT_PI) < 1e-10);
    }

    #[test]
    fn gamma_rejects_poles_and_non_finite() {
        for x in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma(x), Err(Error::Domain(_))), "x={x}");
        }
        assert!(gamma(f64::NAN).is_err());
        assert!(gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn alpha_matches_reference_values() {
        assert!(rel(alpha_coefficient(1.75, 0.3).unwrap(), ALPHA_175_03) < 1e-10);
        // θ = 2, c = 0: a_∞ = 6/π² and α = √(6/π).
        assert!(rel(alpha_coefficient(2.0, 0.0).unwrap(), SQRT_6_OVER_PI) < 1e-10);
    }

    #[test]
    fn alpha_requires_supercritical_decay() {
        assert!(alpha_coefficient(1.0, 0.3).is_err());
        assert!(alpha_coefficient(0.8, 0.0).is_err());
        assert!(alpha_coefficient(2.2, 0.0).is_err());
        assert!(alpha_coefficient(1.75, -0.1).is_err());
    }

    #[test]
    fn from_parts_agrees_with_new() {
        let built = HeapsApprox::new(1.75, 0.3).unwrap();
        assert!(rel(built.a_inf(), A_INF_175_03) < 1e-11);
        let supplied = HeapsApprox::from_parts(1.75, 0.3, A_INF_175_03).unwrap();
        assert!(rel(built.alpha(), supplied.alpha()) < 1e-11);
        assert!(rel(built.beta(), 4.0 / 7.0) < 1e-15);
    }

    #[test]
    fn records_and_draws_are_inverse() {
        let approx = HeapsApprox::new(1.75, 0.3).unwrap();
        for n in [10.0, 1_000.0, 1.0e6] {
            let k = approx.expected_records(n).unwrap();
            let back = approx.expected_draws(k).unwrap();
            assert!(rel(back, n) < 1e-12, "n={n}");
        }
        assert_eq!(approx.expected_records(0.0).unwrap(), 0.0);
        assert!(approx.expected_records(-1.0).is_err());
        assert!(approx.expected_draws(-1.0).is_err());
    }

    #[test]
    fn validity_threshold_matches_reference_values() {
        let approx = HeapsApprox::new(1.75, 0.3).unwrap();
        assert!(rel(approx.validity_threshold(500).unwrap(), TAU_500_175_03) < 1e-10);
        let approx = HeapsApprox::new(2.0, 0.0).unwrap();
        assert!(rel(approx.validity_threshold(100).unwrap(), TAU_100_2_0) < 1e-10);
        assert!(matches!(
            approx.validity_threshold(0),
            Err(Error::EmptySupport)
        ));
    }

    #[test]
    fn simulated_threshold_brackets_the_closed_form() {
        let params = MandelbrotParams::new(500, 1.75, 0.3).unwrap();
        let p = ProbabilityVector::mandelbrot(&params);
        let approx = HeapsApprox::new(1.75, 0.3).unwrap();
        let tau_sim = validity_threshold_simulated(&p, &approx, 4000, 2).unwrap();
        let tau = approx.validity_threshold(500).unwrap();
        assert!(
            tau_sim > tau - 5.0 && tau_sim < tau + 6.0,
            "simulated {tau_sim} vs closed form {tau}"
        );
        let again = validity_threshold_simulated(&p, &approx, 4000, 2).unwrap();
        assert_eq!(tau_sim.to_bits(), again.to_bits());
    }

    #[test]
    fn simulated_threshold_needs_probing_room() {
        let params = MandelbrotParams::new(3, 1.75, 0.3).unwrap();
        let p = ProbabilityVector::mandelbrot(&params);
        let approx = HeapsApprox::new(1.75, 0.3).unwrap();
        assert!(validity_threshold_simulated(&p, &approx, 100, 0).is_err());
    }
}
