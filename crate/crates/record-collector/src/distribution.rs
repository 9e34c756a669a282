//! Finite discrete distributions: validated probability vectors, the
//! Zipf–Mandelbrot family, and its infinite-support normalization limit.

use std::path::Path;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Absolute tolerance within which raw entries must sum to 1. Inputs inside
/// the tolerance are renormalized by their exact computed sum, because the
/// exact formulas downstream amplify normalization drift through long
/// products.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// A strictly positive probability mass function on the support {1, …, m}.
///
/// Every entry must be finite and strictly positive: the collection process
/// conditions on each support point being reachable, and the exact formulas
/// divide by leftover masses that would vanish if some point could never be
/// drawn. Zeros are therefore rejected at construction instead of silently
/// dropped.
#[derive(Debug, Clone)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
    label: String,
}

impl ProbabilityVector {
    /// Validates and exactly renormalizes `probs`.
    ///
    /// Fails if the vector is empty, any entry is non-finite or ≤ 0, or the
    /// sum is further than [`NORMALIZATION_TOLERANCE`] from 1.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let label = format!("pmf(m={})", probs.len());
        Self::with_label(probs, label)
    }

    fn with_label(mut probs: Vec<f64>, label: String) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptySupport);
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::InvalidProbability {
                    index: i + 1,
                    value: p,
                });
            }
        }
        let mut acc = CompensatedSum::new();
        for &p in &probs {
            acc.add(p);
        }
        let sum = acc.value();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized {
                sum,
                tolerance: NORMALIZATION_TOLERANCE,
            });
        }
        for p in &mut probs {
            *p /= sum;
        }
        Ok(Self { probs, label })
    }

    /// The uniform distribution on m points.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptySupport);
        }
        Self::with_label(vec![1.0 / m as f64; m], format!("uniform(m={m})"))
    }

    /// The Zipf–Mandelbrot distribution `p_i = a_m (c+i)^(−θ)` described by
    /// `params`.
    pub fn mandelbrot(params: &MandelbrotParams) -> Self {
        let a_m = params.normalization();
        let probs: Vec<f64> = (1..=params.m())
            .map(|i| a_m * (params.c() + i as f64).powf(-params.theta()))
            .collect();
        let label = format!(
            "mandelbrot(m={},theta={},c={})",
            params.m(),
            params.theta(),
            params.c()
        );
        Self::with_label(probs, label).expect("valid parameters yield a valid distribution")
    }

    /// Reads a PMF from a file: one probability per line in plain decimal
    /// text. Lines that are blank or start with `#` are ignored. Violations
    /// are reported with their line number; whole-file problems (no entries,
    /// bad total) use line 0.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        parse_pmf_text(&text, path)
    }

    /// Support size m.
    pub fn m(&self) -> usize {
        self.probs.len()
    }

    /// The (renormalized) probabilities, in support order.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// A short human-readable description (family and parameters).
    pub fn label(&self) -> &str {
        &self.label
    }
}

fn parse_pmf_text(text: &str, path: &Path) -> Result<ProbabilityVector> {
    let mut probs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::PmfFile {
            path: path.to_path_buf(),
            line: lineno + 1,
            message: format!("not a number: {line:?}"),
        })?;
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::PmfFile {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: format!("probability must be finite and strictly positive, got {value}"),
            });
        }
        probs.push(value);
    }
    let label = format!("file({})", path.display());
    ProbabilityVector::with_label(probs, label).map_err(|e| match e {
        Error::EmptySupport => Error::PmfFile {
            path: path.to_path_buf(),
            line: 0,
            message: "no probability entries found".into(),
        },
        Error::NotNormalized { sum, tolerance } => Error::PmfFile {
            path: path.to_path_buf(),
            line: 0,
            message: format!(
                "probabilities sum to {sum}, which is further than {tolerance} from 1"
            ),
        },
        other => other,
    })
}

/// Parameters of the Zipf–Mandelbrot family `p_i = a_m (c+i)^(−θ)` on
/// {1, …, m}, with the normalization constant cached at construction.
///
/// The exponent is restricted to θ ∈ \[1, 2\]: that is the range in which the
/// family is used here, and the asymptotic layer additionally needs θ > 1
/// (see [`normalization_limit`]). The shift must satisfy c ≥ 0.
#[derive(Debug, Clone)]
pub struct MandelbrotParams {
    m: usize,
    theta: f64,
    c: f64,
    a_m: f64,
}

impl MandelbrotParams {
    pub fn new(m: usize, theta: f64, c: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptySupport);
        }
        if !theta.is_finite() || !(1.0..=2.0).contains(&theta) {
            return Err(Error::Domain(format!(
                "theta must lie in [1, 2], got {theta}"
            )));
        }
        if !c.is_finite() || c < 0.0 {
            return Err(Error::Domain(format!("c must be nonnegative, got {c}")));
        }
        // Smallest terms first limits accumulation error in the weight sum.
        let mut acc = CompensatedSum::new();
        for i in (1..=m).rev() {
            acc.add((c + i as f64).powf(-theta));
        }
        Ok(Self {
            m,
            theta,
            c,
            a_m: 1.0 / acc.value(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The cached normalization constant a_m = (Σ_{i=1..m} (c+i)^(−θ))^(−1).
    pub fn normalization(&self) -> f64 {
        self.a_m
    }
}

/// The m → ∞ normalization limit a_∞ = (Σ_{i≥1} (c+i)^(−θ))^(−1).
///
/// The series is summed directly up to an index N chosen so that the
/// integral-test bracket around the tail,
/// `∫_{N+1}^∞ (c+x)^(−θ) dx ≤ Σ_{i>N} (c+i)^(−θ) ≤ ∫_N^∞ (c+x)^(−θ) dx`,
/// has width at most `tol`; the bracket midpoint is then added, so the
/// reciprocal sum carries an absolute error of at most `tol`. Direct terms are
/// accumulated smallest-first with compensated summation.
///
/// The required N grows like `tol^(−1/θ)`, so very tight tolerances combined
/// with θ close to 1 are expensive; choose `tol` accordingly.
pub fn normalization_limit(theta: f64, c: f64, tol: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("theta must be finite, got {theta}")));
    }
    if theta <= 1.0 {
        return Err(Error::DivergentSeries { theta });
    }
    if !c.is_finite() || c < 0.0 {
        return Err(Error::Domain(format!("c must be nonnegative, got {c}")));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }

    // Width of the tail bracket is at most the first omitted term (c+N)^(−θ).
    let integral_to_inf = |a: f64| (c + a).powf(1.0 - theta) / (theta - 1.0);
    let mut n = (tol.powf(-1.0 / theta) - c).ceil().max(16.0) as u64;
    while integral_to_inf(n as f64) - integral_to_inf(n as f64 + 1.0) > tol {
        n *= 2;
    }

    let mut acc = CompensatedSum::new();
    for i in (1..=n).rev() {
        acc.add((c + i as f64).powf(-theta));
    }
    let tail_mid = (integral_to_inf(n as f64) + integral_to_inf(n as f64 + 1.0)) / 2.0;
    acc.add(tail_mid);
    Ok(1.0 / acc.value())
}
