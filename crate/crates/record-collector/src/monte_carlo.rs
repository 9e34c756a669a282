//! Seeded Monte Carlo estimation of the collection process.
//!
//! Replicates are deterministic and embarrassingly parallel: replicate r of a
//! run seeded with s always uses a ChaCha8 generator seeded with s on stream
//! r, so results are bitwise reproducible regardless of thread count or
//! scheduling. Per-replicate outcomes are gathered in replicate order and
//! reduced sequentially with compensated summation.
//!
//! A run that somehow fails to reach its target within [`DRAW_CEILING`]
//! draws aborts with [`Error::RunawaySimulation`] rather than spinning
//! forever on a pathological input.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distribution::ProbabilityVector;
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Hard per-replicate draw budget.
pub const DRAW_CEILING: u64 = 1_000_000_000;

/// What a [`SimulationEstimate`] estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulationTarget {
    /// Expected draws until k distinct values have been seen.
    DrawsForRecords { k: usize },
    /// Expected distinct values in a sample of n draws.
    RecordsInDraws { n: u64 },
}

/// A seeded mean with its standard error and full provenance: the same
/// (target, distribution, replicates, seed) always reproduces the same bits.
#[derive(Debug, Clone)]
pub struct SimulationEstimate {
    pub mean: f64,
    /// Standard error of the mean, `s / √replicates` with the n−1 sample
    /// standard deviation.
    pub stderr: f64,
    pub replicates: u64,
    pub seed: u64,
    pub target: SimulationTarget,
    pub distribution: String,
}

/// Inverse-CDF sampler over a probability vector.
struct Sampler {
    cum: Vec<f64>,
}

impl Sampler {
    fn new(p: &ProbabilityVector) -> Self {
        let mut cum = Vec::with_capacity(p.m());
        let mut acc = CompensatedSum::new();
        for &pi in p.probs() {
            acc.add(pi);
            cum.push(acc.value());
        }
        // Guard against a sum a hair under 1.0 leaving u ∈ [cum.last(), 1)
        // unmapped.
        *cum.last_mut().expect("probability vectors are nonempty") = 1.0;
        Self { cum }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.random();
        self.cum.partition_point(|&c| c <= u)
    }
}

/// The generator for one replicate of a seeded run.
fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Draw from p until k distinct values have been seen; returns the number of
/// draws.
pub fn draw_until_k_distinct(p: &ProbabilityVector, k: usize, rng: &mut ChaCha8Rng) -> Result<u64> {
    let hits = hit_times(p, &[k], rng, DRAW_CEILING)?;
    Ok(hits[0])
}

/// Core sampling loop: draw until the largest target in `ks` is reached,
/// recording the draw count at which each target was first met. `ks` must be
/// validated (nonempty, strictly increasing, within support) by the caller.
fn hit_times(
    p: &ProbabilityVector,
    ks: &[usize],
    rng: &mut ChaCha8Rng,
    ceiling: u64,
) -> Result<Vec<u64>> {
    let sampler = Sampler::new(p);
    let mut seen = vec![false; p.m()];
    let mut distinct = 0usize;
    let mut draws = 0u64;
    let mut hits = Vec::with_capacity(ks.len());
    let mut next = 0usize;
    while next < ks.len() {
        if draws == ceiling {
            return Err(Error::RunawaySimulation { ceiling });
        }
        let i = sampler.draw(rng);
        draws += 1;
        if !seen[i] {
            seen[i] = true;
            distinct += 1;
            if distinct == ks[next] {
                hits.push(draws);
                next += 1;
            }
        }
    }
    Ok(hits)
}

fn validate_targets(p: &ProbabilityVector, ks: &[usize]) -> Result<()> {
    if ks.is_empty() {
        return Err(Error::Domain("no collection targets given".into()));
    }
    if ks[0] == 0 {
        return Err(Error::Domain("target k must be at least 1".into()));
    }
    for pair in ks.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Domain(format!(
                "collection targets must be strictly increasing: {} follows {}",
                pair[1], pair[0]
            )));
        }
    }
    let last = *ks.last().expect("checked nonempty");
    if last > p.m() {
        return Err(Error::InfeasibleTarget { k: last, m: p.m() });
    }
    Ok(())
}

fn validate_replicates(replicates: u64) -> Result<()> {
    if replicates < 2 {
        return Err(Error::InsufficientReplicates { replicates });
    }
    Ok(())
}

/// Sample mean and standard error of the mean, via a sequential two-pass
/// computation (n−1 variance divisor).
fn mean_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mut total = CompensatedSum::new();
    for &x in samples {
        total.add(x);
    }
    let mean = total.value() / n;
    let mut squares = CompensatedSum::new();
    for &x in samples {
        let d = x - mean;
        squares.add(d * d);
    }
    let variance = squares.value() / (n - 1.0);
    (mean, (variance / n).sqrt())
}

/// Estimate the expected number of draws to see k distinct values.
pub fn estimate_expected_draws(
    p: &ProbabilityVector,
    k: usize,
    replicates: u64,
    seed: u64,
) -> Result<SimulationEstimate> {
    let curve = collection_curve(p, &[k], replicates, seed)?;
    Ok(curve.into_iter().next().expect("one target, one estimate"))
}

/// Estimate the expected number of distinct values in a sample of n draws.
pub fn estimate_expected_records(
    p: &ProbabilityVector,
    n: u64,
    replicates: u64,
    seed: u64,
) -> Result<SimulationEstimate> {
    if n == 0 {
        return Err(Error::Domain("sample size must be at least 1 draw".into()));
    }
    validate_replicates(replicates)?;
    let m = p.m();
    let counts: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            let sampler = Sampler::new(p);
            let mut seen = vec![false; m];
            let mut distinct = 0usize;
            for _ in 0..n {
                // Once everything has been seen the count cannot change.
                if distinct == m {
                    break;
                }
                let i = sampler.draw(&mut rng);
                if !seen[i] {
                    seen[i] = true;
                    distinct += 1;
                }
            }
            distinct as f64
        })
        .collect();
    let (mean, stderr) = mean_stderr(&counts);
    Ok(SimulationEstimate {
        mean,
        stderr,
        replicates,
        seed,
        target: SimulationTarget::RecordsInDraws { n },
        distribution: p.label().to_string(),
    })
}

/// Estimate expected draw counts for several targets from one set of
/// replicates.
///
/// Each replicate runs until the largest target and records the draw count
/// at which every intermediate target was first met, so the estimate for
/// each k is bitwise identical to a single-target run with the same seed and
/// replicate count — the per-replicate draw sequences share their prefix.
pub fn collection_curve(
    p: &ProbabilityVector,
    ks: &[usize],
    replicates: u64,
    seed: u64,
) -> Result<Vec<SimulationEstimate>> {
    validate_targets(p, ks)?;
    validate_replicates(replicates)?;
    let per_replicate: Vec<Vec<u64>> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r);
            hit_times(p, ks, &mut rng, DRAW_CEILING)
        })
        .collect::<Result<_>>()?;
    let mut estimates = Vec::with_capacity(ks.len());
    let mut column = vec![0.0_f64; per_replicate.len()];
    for (idx, &k) in ks.iter().enumerate() {
        for (slot, row) in column.iter_mut().zip(&per_replicate) {
            *slot = row[idx] as f64;
        }
        let (mean, stderr) = mean_stderr(&column);
        estimates.push(SimulationEstimate {
            mean,
            stderr,
            replicates,
            seed,
            target: SimulationTarget::DrawsForRecords { k },
            distribution: p.label().to_string(),
        });
    }
    Ok(estimates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::MandelbrotParams;
    use crate::exact;

    fn mandelbrot(m: usize) -> ProbabilityVector {
        ProbabilityVector::mandelbrot(&MandelbrotParams::new(m, 1.75, 0.3).unwrap())
    }

    #[test]
    fn first_draw_is_always_new() {
        let p = mandelbrot(6);
        let est = estimate_expected_draws(&p, 1, 50, 0).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn single_atom_support_is_deterministic() {
        let p = ProbabilityVector::new(vec![1.0]).unwrap();
        let draws = estimate_expected_draws(&p, 1, 10, 42).unwrap();
        assert_eq!(draws.mean, 1.0);
        let records = estimate_expected_records(&p, 7, 10, 42).unwrap();
        assert_eq!(records.mean, 1.0);
        assert_eq!(records.stderr, 0.0);
    }

    #[test]
    fn same_seed_reproduces_bits() {
        let p = mandelbrot(9);
        let a = estimate_expected_draws(&p, 6, 300, 11).unwrap();
        let b = estimate_expected_draws(&p, 6, 300, 11).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }

    #[test]
    fn different_seeds_differ() {
        let p = mandelbrot(9);
        let a = estimate_expected_draws(&p, 6, 300, 0).unwrap();
        let b = estimate_expected_draws(&p, 6, 300, 1).unwrap();
        assert_ne!(a.mean.to_bits(), b.mean.to_bits());
    }

    #[test]
    fn draw_estimate_brackets_exact_value() {
        let p = mandelbrot(5);
        let exact_value = exact::expected_draws_dp(&p, 4)
            .unwrap()
            .value_at(4)
            .unwrap();
        let est = estimate_expected_draws(&p, 4, 4000, 7).unwrap();
        assert!(est.stderr > 0.0);
        assert!(
            (est.mean - exact_value).abs() <= 4.0 * est.stderr,
            "mean {} vs exact {} (stderr {})",
            est.mean,
            exact_value,
            est.stderr
        );
    }

    #[test]
    fn record_estimate_brackets_closed_form() {
        let p = mandelbrot(8);
        let exact_value = exact::expected_distinct_records(&p, 10.0).unwrap();
        let est = estimate_expected_records(&p, 10, 4000, 5).unwrap();
        assert!(
            (est.mean - exact_value).abs() <= 4.0 * est.stderr,
            "mean {} vs exact {} (stderr {})",
            est.mean,
            exact_value,
            est.stderr
        );
    }

    #[test]
    fn curve_rows_match_single_target_runs_bitwise() {
        let p = mandelbrot(12);
        let curve = collection_curve(&p, &[4, 8, 12], 400, 3).unwrap();
        for est in &curve {
            let SimulationTarget::DrawsForRecords { k } = est.target else {
                panic!("curve rows estimate draw counts");
            };
            let single = estimate_expected_draws(&p, k, 400, 3).unwrap();
            assert_eq!(est.mean.to_bits(), single.mean.to_bits(), "k={k}");
            assert_eq!(est.stderr.to_bits(), single.stderr.to_bits(), "k={k}");
        }
    }

    #[test]
    fn curve_validates_targets() {
        let p = mandelbrot(5);
        assert!(matches!(
            collection_curve(&p, &[], 10, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            collection_curve(&p, &[0, 2], 10, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            collection_curve(&p, &[2, 2], 10, 0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            collection_curve(&p, &[2, 6], 10, 0),
            Err(Error::InfeasibleTarget { k: 6, m: 5 })
        ));
    }

    #[test]
    fn too_few_replicates_is_an_error() {
        let p = mandelbrot(5);
        assert!(matches!(
            estimate_expected_draws(&p, 2, 1, 0),
            Err(Error::InsufficientReplicates { replicates: 1 })
        ));
        assert!(matches!(
            estimate_expected_records(&p, 3, 0, 0),
            Err(Error::InsufficientReplicates { replicates: 0 })
        ));
    }

    #[test]
    fn zero_sample_size_is_an_error() {
        let p = mandelbrot(5);
        assert!(matches!(
            estimate_expected_records(&p, 0, 10, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn runaway_replicates_hit_the_ceiling() {
        // A target that effectively cannot be reached: force the loop to give
        // up at a tiny ceiling instead of draining the real budget.
        let p = ProbabilityVector::new(vec![1.0 - 1e-12, 1e-12]).unwrap();
        let mut rng = replicate_rng(0, 0);
        match hit_times(&p, &[2], &mut rng, 1000) {
            Err(Error::RunawaySimulation { ceiling }) => assert_eq!(ceiling, 1000),
            other => panic!("unexpected result: {other:?}"),
        }
    }

    #[test]
    fn sampler_frequencies_match_probabilities() {
        let p = mandelbrot(6);
        let sampler = Sampler::new(&p);
        let mut rng = replicate_rng(123, 0);
        let n = 200_000u64;
        let mut counts = vec![0u64; p.m()];
        for _ in 0..n {
            counts[sampler.draw(&mut rng)] += 1;
        }
        for (i, (&count, &pi)) in counts.iter().zip(p.probs()).enumerate() {
            let freq = count as f64 / n as f64;
            let band = 4.0 * (pi * (1.0 - pi) / n as f64).sqrt();
            assert!(
                (freq - pi).abs() <= band,
                "coordinate {i}: frequency {freq} vs probability {pi} (band {band})"
            );
        }
    }

    #[test]
    fn records_estimate_caps_at_support_size() {
        let p = ProbabilityVector::uniform(3).unwrap();
        let est = estimate_expected_records(&p, 10_000, 50, 9).unwrap();
        assert!(est.mean <= 3.0);
        assert!(est.mean > 2.99);
    }
}
