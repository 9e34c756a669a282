//! Exact expectations for the collection process.
//!
//! Four independent computations are provided:
//!
//! * [`expected_distinct_records`] — closed form `m − Σ (1−p_i)^n` for the
//!   expected number of distinct values in n draws;
//! * [`expected_draws_uniform`] — closed form `1 + m/(m−1) + … + m/(m−k+1)`
//!   for equal probabilities;
//! * [`expected_draws_naive`] — the ordered-prefix enumeration: a sum over
//!   ordered tuples of pairwise-distinct support indices, evaluated by a
//!   depth-first traversal so every prefix's contribution is accumulated at
//!   every depth in one pass;
//! * [`expected_draws_dp`] — a sweep over "seen so far" subsets that tracks
//!   the probability of visiting each subset and the expected stay in it.
//!
//! The subset sweep is the default path (its state count `Σ_{j<k} C(m,j)`
//! vastly undercuts the ordered-tuple count once m grows past ~10); the
//! enumeration is retained as the formula-literal reference implementation,
//! and [`expected_completion_maxmin`] adds an inclusion-exclusion cross-check
//! for the full-collection case k = m. All three agree to high precision
//! wherever they all run, and the test suite holds them to that.
//!
//! Work is bounded by [`ExactConfig`] caps; exceeding a cap is an error that
//! names the cap and the estimated cost, never a silent truncation.

use rayon::prelude::*;

use crate::distribution::ProbabilityVector;
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// How a value in an [`ExpectationTable`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Ordered-prefix enumeration (formula-literal reference path).
    Naive,
    /// Seen-set dynamic program (default exact path).
    Dp,
    /// Inclusion-exclusion over subsets; full collection only.
    MaxMin,
    /// Closed form for the uniform distribution.
    UniformClosedForm,
    /// Seeded simulation.
    MonteCarlo,
    /// Power-law asymptotic.
    Approx,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::Dp => "dp",
            Method::MaxMin => "maxmin",
            Method::UniformClosedForm => "uniform-closed-form",
            Method::MonteCarlo => "montecarlo",
            Method::Approx => "approx",
        }
    }

    /// True for methods that compute the expectation exactly (up to float
    /// rounding), as opposed to estimating or approximating it.
    pub fn is_exact(self) -> bool {
        matches!(
            self,
            Method::Naive | Method::Dp | Method::MaxMin | Method::UniformClosedForm
        )
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One (k, expected draws) row.
#[derive(Debug, Clone, Copy)]
pub struct TableRow {
    pub k: usize,
    pub value: f64,
    pub method: Method,
    /// Standard error of the mean; only simulation rows carry one.
    pub stderr: Option<f64>,
}

/// Expected draw counts for a range of distinct-value targets, with the
/// context they were computed in.
///
/// Construction checks structural invariants: k strictly increasing; every
/// non-[`Method::Approx`] value at least k (within a 1e-9 rounding allowance —
/// k draws are necessary for k distinct values); exact-method values strictly
/// increasing in k. The asymptotic is exempt from the lower bound because it
/// is not an expectation and legitimately dips below k at small k.
#[derive(Debug, Clone)]
pub struct ExpectationTable {
    m: usize,
    distribution: String,
    rows: Vec<TableRow>,
}

impl ExpectationTable {
    pub fn new(m: usize, distribution: String, rows: Vec<TableRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Domain("expectation table has no rows".into()));
        }
        for pair in rows.windows(2) {
            if pair[1].k <= pair[0].k {
                return Err(Error::Domain(format!(
                    "table rows out of order: k={} follows k={}",
                    pair[1].k, pair[0].k
                )));
            }
            if pair[0].method.is_exact()
                && pair[1].method.is_exact()
                && pair[1].value <= pair[0].value
            {
                return Err(Error::Domain(format!(
                    "exact values must increase with k: {} at k={} after {} at k={}",
                    pair[1].value, pair[1].k, pair[0].value, pair[0].k
                )));
            }
        }
        for row in &rows {
            if row.method != Method::Approx && row.value < row.k as f64 - 1e-9 {
                return Err(Error::Domain(format!(
                    "expected draws {} at k={} is below the k-draw minimum",
                    row.value, row.k
                )));
            }
        }
        Ok(Self {
            m,
            distribution,
            rows,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Description of the distribution the table was computed for.
    pub fn distribution(&self) -> &str {
        &self.distribution
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    /// The value at a given k, if the table has that row.
    pub fn value_at(&self, k: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.k == k).map(|r| r.value)
    }
}

/// Work caps for the exact algorithms. Exceeding a cap yields
/// [`Error::ResourceLimit`]. Defaults are sized so that anything under them
/// finishes in at most minutes on one core.
#[derive(Debug, Clone)]
pub struct ExactConfig {
    /// Ordered-prefix enumeration: maximum number of tuple extensions
    /// (depth-first tree nodes), `Σ_{d=1..k−1} m(m−1)…(m−d+1)`.
    pub naive_extension_cap: u64,
    /// Seen-set sweep: maximum number of subset states, `Σ_{d<k} C(m,d)`.
    /// Each state is one f64 in the level being processed.
    pub dp_state_cap: u64,
    /// Inclusion-exclusion: maximum support size m (the sum has 2^m − 1
    /// terms).
    pub maxmin_support_cap: usize,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            naive_extension_cap: 100_000_000,
            dp_state_cap: 10_000_000,
            maxmin_support_cap: 25,
        }
    }
}

/// Expected number of distinct values in a sample of n draws:
/// `m − Σ_i (1−p_i)^n`.
///
/// n may be fractional: the expression extends to real n, and evaluating it
/// at non-integer expected draw counts is exactly how the dual table columns
/// are produced.
pub fn expected_distinct_records(p: &ProbabilityVector, n: f64) -> Result<f64> {
    if !n.is_finite() || n < 0.0 {
        return Err(Error::Domain(format!(
            "sample size must be a nonnegative real number, got {n}"
        )));
    }
    let mut missing = CompensatedSum::new();
    for &pi in p.probs() {
        missing.add((1.0 - pi).powf(n));
    }
    Ok(p.m() as f64 - missing.value())
}

/// Expected draws to collect k distinct values under the uniform
/// distribution on m points: `1 + m/(m−1) + … + m/(m−k+1)`.
pub fn expected_draws_uniform(m: usize, k: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::EmptySupport);
    }
    if k == 0 {
        return Err(Error::Domain("target k must be at least 1".into()));
    }
    if k > m {
        return Err(Error::InfeasibleTarget { k, m });
    }
    let m = m as f64;
    let mut acc = CompensatedSum::new();
    for i in 0..k {
        acc.add(m / (m - i as f64));
    }
    Ok(acc.value())
}

/// Expected draws for the full collection (all m values seen) by the
/// maximum-minimums inclusion-exclusion identity:
/// `Σ_{∅≠T⊆S} (−1)^(|T|+1) / Σ_{i∈T} p_i`.
pub fn expected_completion_maxmin(p: &ProbabilityVector) -> Result<f64> {
    expected_completion_maxmin_with(p, &ExactConfig::default())
}

pub fn expected_completion_maxmin_with(p: &ProbabilityVector, config: &ExactConfig) -> Result<f64> {
    let m = p.m();
    let cap = config.maxmin_support_cap;
    if m > cap {
        let subsets = |bits: usize| -> u128 {
            if bits >= 128 {
                u128::MAX
            } else {
                (1u128 << bits) - 1
            }
        };
        return Err(Error::ResourceLimit {
            what: "inclusion-exclusion over nonempty subsets",
            estimated: subsets(m),
            unit: "subset terms",
            cap: subsets(cap),
            hint: "the dp method handles large supports; or raise ExactConfig.maxmin_support_cap",
        });
    }
    let probs = p.probs();
    // Gray-code walk: each step flips one element in and out of the subset,
    // so the subset's probability mass is maintained incrementally.
    let mut acc = CompensatedSum::new();
    let mut mask: u64 = 0;
    let mut subset_sum = 0.0_f64;
    for i in 1u64..(1u64 << m) {
        let j = i.trailing_zeros() as usize;
        mask ^= 1 << j;
        if mask & (1 << j) != 0 {
            subset_sum += probs[j];
        } else {
            subset_sum -= probs[j];
        }
        if mask.count_ones() % 2 == 1 {
            acc.add(1.0 / subset_sum);
        } else {
            acc.add(-1.0 / subset_sum);
        }
    }
    Ok(acc.value())
}

/// Expected *extra* draws to pass from k−1 to k distinct values (k ≥ 2), by
/// the ordered-prefix enumeration.
pub fn expected_increment_naive(p: &ProbabilityVector, k: usize) -> Result<f64> {
    expected_increment_naive_with(p, k, &ExactConfig::default())
}

pub fn expected_increment_naive_with(
    p: &ProbabilityVector,
    k: usize,
    config: &ExactConfig,
) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain(
            "increments are defined for k ≥ 2; the first draw is always new".into(),
        ));
    }
    let increments = naive_depth_sums(p, k, config)?;
    Ok(increments[k - 2])
}

/// Expected draws to collect s distinct values for every s = 1..=k, by the
/// ordered-prefix enumeration.
///
/// The sum runs over ordered tuples (i_1, …, i_{s−1}) of pairwise-distinct
/// support indices; each tuple contributes its probability product divided by
/// the product of leftover masses `1 − p_{i_1} − … − p_{i_j}` over its
/// prefixes. A single depth-first traversal over index prefixes accumulates
/// the contribution of every depth at once, so the whole table costs no more
/// than its deepest row.
pub fn expected_draws_naive(p: &ProbabilityVector, k: usize) -> Result<ExpectationTable> {
    expected_draws_naive_with(p, k, &ExactConfig::default())
}

pub fn expected_draws_naive_with(
    p: &ProbabilityVector,
    k: usize,
    config: &ExactConfig,
) -> Result<ExpectationTable> {
    let increments = naive_depth_sums(p, k, config)?;
    Ok(assemble_table(p, Method::Naive, &increments))
}

/// Expected draws to collect s distinct values for every s = 1..=k, by the
/// seen-set sweep.
///
/// States are the subsets already observed, processed level by level in
/// colexicographic order. For each state S the sweep tracks the probability
/// of ever visiting S; the expected stay in S is `1/q(S)` with `q(S)` the
/// mass outside S, and summing visit-weighted stays over all levels below s
/// gives the expectation. Agrees with [`expected_draws_naive`] to relative
/// 1e-10 wherever both run.
pub fn expected_draws_dp(p: &ProbabilityVector, k: usize) -> Result<ExpectationTable> {
    expected_draws_dp_with(p, k, &ExactConfig::default())
}

pub fn expected_draws_dp_with(
    p: &ProbabilityVector,
    k: usize,
    config: &ExactConfig,
) -> Result<ExpectationTable> {
    let level_sums = dp_level_sums(p, k, config)?;
    // level_sums[d] is the expected time spent while exactly d values have
    // been seen; partial sums over d < s give the table rows.
    let mut rows = Vec::with_capacity(k);
    let mut acc = CompensatedSum::new();
    for (d, &a) in level_sums.iter().enumerate() {
        acc.add(a);
        rows.push(TableRow {
            k: d + 1,
            value: acc.value(),
            method: Method::Dp,
            stderr: None,
        });
    }
    ExpectationTable::new(p.m(), p.label().to_string(), rows)
}

/// Shared assembly: turn per-depth increment sums into cumulative table rows.
fn assemble_table(p: &ProbabilityVector, method: Method, increments: &[f64]) -> ExpectationTable {
    let mut rows = Vec::with_capacity(increments.len() + 1);
    let mut acc = CompensatedSum::new();
    acc.add(1.0); // the first draw is always a new value
    rows.push(TableRow {
        k: 1,
        value: 1.0,
        method,
        stderr: None,
    });
    for (d, &inc) in increments.iter().enumerate() {
        acc.add(inc);
        rows.push(TableRow {
            k: d + 2,
            value: acc.value(),
            method,
            stderr: None,
        });
    }
    ExpectationTable::new(p.m(), p.label().to_string(), rows)
        .expect("cumulative positive increments satisfy the table invariants")
}

/// Depth-first enumeration core: returns, for d = 1..k−1, the sum over
/// ordered d-tuples of distinct indices of
/// `Π p_{i_j} / Π_j (1 − p_{i_1} − … − p_{i_j})`,
/// i.e. the expected extra draws for the (d+1)-th distinct value.
fn naive_depth_sums(p: &ProbabilityVector, k: usize, config: &ExactConfig) -> Result<Vec<f64>> {
    let m = p.m();
    if k == 0 {
        return Err(Error::Domain("target k must be at least 1".into()));
    }
    if k > m {
        return Err(Error::InfeasibleTarget { k, m });
    }

    // Cost estimate: number of tree nodes Σ_{d=1..k−1} m(m−1)…(m−d+1).
    let mut work: u128 = 0;
    let mut tuples: u128 = 1;
    for d in 0..k.saturating_sub(1) {
        tuples *= (m - d) as u128;
        work += tuples;
        if work > config.naive_extension_cap as u128 {
            return Err(Error::ResourceLimit {
                what: "ordered-prefix enumeration",
                estimated: work,
                unit: "tuple extensions",
                cap: config.naive_extension_cap as u128,
                hint: "use the dp method, lower k, or raise ExactConfig.naive_extension_cap",
            });
        }
    }
    if k == 1 {
        return Ok(Vec::new());
    }

    let probs = p.probs();
    // Partition by the first index; each partition accumulates sequentially,
    // and partitions are merged in index order, so the result is bitwise
    // independent of how rayon schedules them.
    let partials: Vec<Vec<CompensatedSum>> = (0..m)
        .into_par_iter()
        .map(|first| {
            let mut sums = vec![CompensatedSum::new(); k - 1];
            let mut used = vec![false; m];
            used[first] = true;
            descend(
                probs,
                &mut used,
                1,
                probs[first],
                1.0 - probs[first],
                probs[first],
                k,
                &mut sums,
            );
            sums
        })
        .collect();

    let mut totals = vec![CompensatedSum::new(); k - 1];
    for partial in partials {
        for (total, part) in totals.iter_mut().zip(partial) {
            total.merge(part);
        }
    }
    Ok(totals.into_iter().map(|t| t.value()).collect())
}

/// One step of the prefix traversal. `numerator` is the probability product
/// of the current tuple, `denominator` the running product of leftover
/// masses, `prefix_mass` the tuple's total probability.
#[allow(clippy::too_many_arguments)]
fn descend(
    probs: &[f64],
    used: &mut [bool],
    depth: usize,
    numerator: f64,
    denominator: f64,
    prefix_mass: f64,
    k: usize,
    sums: &mut [CompensatedSum],
) {
    sums[depth - 1].add(numerator / denominator);
    if depth == k - 1 {
        return;
    }
    for j in 0..probs.len() {
        if !used[j] {
            used[j] = true;
            let mass = prefix_mass + probs[j];
            descend(
                probs,
                used,
                depth + 1,
                numerator * probs[j],
                denominator * (1.0 - mass),
                mass,
                k,
                sums,
            );
            used[j] = false;
        }
    }
}

/// Seen-set sweep core: returns, for d = 0..k−1, the total expected time
/// spent in states with exactly d values seen,
/// `A_d = Σ_{|S|=d} P(visit S) / q(S)`.
fn dp_level_sums(p: &ProbabilityVector, k: usize, config: &ExactConfig) -> Result<Vec<f64>> {
    let m = p.m();
    if k == 0 {
        return Err(Error::Domain("target k must be at least 1".into()));
    }
    if k > m {
        return Err(Error::InfeasibleTarget { k, m });
    }

    // State count Σ_{d=0..k−1} C(m,d), checked before any allocation.
    let mut states: u128 = 0;
    let mut level_size: u128 = 1;
    for d in 0..k {
        states += level_size;
        if states > config.dp_state_cap as u128 {
            return Err(Error::ResourceLimit {
                what: "seen-set sweep",
                estimated: states,
                unit: "subset states",
                cap: config.dp_state_cap as u128,
                hint: "lower k or raise ExactConfig.dp_state_cap",
            });
        }
        level_size = level_size * (m - d) as u128 / (d as u128 + 1);
    }

    // After the cap check every binomial we index with fits comfortably in
    // u64 (level sizes are bounded by the cap, and rank terms are bounded by
    // level sizes).
    let binom = binomial_table(m, k);
    let probs = p.probs();

    let complement_mass = |subset: &[usize]| -> f64 {
        let mut q = CompensatedSum::new();
        let mut next = 0;
        for (i, &pi) in probs.iter().enumerate() {
            if next < subset.len() && subset[next] == i {
                next += 1;
            } else {
                q.add(pi);
            }
        }
        q.value()
    };

    let mut level_sums = Vec::with_capacity(k);

    // Level 0: the empty set, visited surely.
    let q0 = complement_mass(&[]);
    level_sums.push(1.0 / q0);
    if k == 1 {
        return Ok(level_sums);
    }
    let mut current: Vec<f64> = {
        // Scatter from the empty set to the singletons.
        let mut next_level = vec![0.0_f64; m];
        for (j, &pj) in probs.iter().enumerate() {
            next_level[j] = pj / q0;
        }
        next_level
    };

    let mut subset: Vec<usize> = Vec::new();
    for d in 1..k {
        let mut acc = CompensatedSum::new();
        let last_level = d == k - 1;
        let mut next_level = if last_level {
            Vec::new()
        } else {
            vec![0.0_f64; binom[m][d + 1] as usize]
        };

        // Enumerate d-subsets in colexicographic order; the loop index is
        // exactly the colex rank used to store visit probabilities.
        subset.clear();
        subset.extend(0..d);
        let mut rank = 0usize;
        loop {
            let visit = current[rank];
            let q = complement_mass(&subset);
            acc.add(visit / q);

            if !last_level {
                // Rank bookkeeping for inserting one element: entries below
                // the insertion point keep their binomial terms, entries
                // above shift one position up.
                let rate = visit / q;
                let mut below = 0u64;
                let mut above = 0u64;
                for (t, &s) in subset.iter().enumerate() {
                    above += binom[s][t + 2];
                }
                let mut pos = 0usize;
                for (j, &pj) in probs.iter().enumerate() {
                    if pos < d && subset[pos] == j {
                        below += binom[subset[pos]][pos + 1];
                        above -= binom[subset[pos]][pos + 2];
                        pos += 1;
                    } else {
                        let new_rank = below + binom[j][pos + 1] + above;
                        next_level[new_rank as usize] += rate * pj;
                    }
                }
            }

            // Colex successor.
            let mut t = 0;
            loop {
                if t == d {
                    break;
                }
                let bound = if t + 1 < d { subset[t + 1] } else { m };
                if subset[t] + 1 < bound {
                    subset[t] += 1;
                    for (u, slot) in subset.iter_mut().enumerate().take(t) {
                        *slot = u;
                    }
                    break;
                }
                t += 1;
            }
            if t == d {
                break;
            }
            rank += 1;
        }
        debug_assert_eq!(rank + 1, binom[m][d] as usize);

        level_sums.push(acc.value());
        if !last_level {
            current = next_level;
        }
    }
    Ok(level_sums)
}

/// Pascal's triangle up to C(m, k−1), the largest entry the rank arithmetic
/// touches. Every entry is a level size bounded by the (already checked)
/// state cap, so the additive fill cannot overflow.
fn binomial_table(m: usize, k: usize) -> Vec<Vec<u64>> {
    let cols = k;
    let mut table = vec![vec![0u64; cols]; m + 1];
    table[0][0] = 1;
    for n in 1..=m {
        table[n][0] = 1;
        for r in 1..cols {
            table[n][r] = table[n - 1][r] + table[n - 1][r - 1];
        }
    }
    table
}
