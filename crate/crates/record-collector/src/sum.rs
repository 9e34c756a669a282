//! Compensated (error-carrying) floating-point accumulation.
//!
//! Long alternating or many-term sums feed directly into values that must
//! reproduce a reference table at two decimals, so plain `+=` is not enough.
//! This is Neumaier's variant of Kahan summation: the compensation term also
//! survives the case where the incoming value is larger than the running sum.

/// A running sum with a first-order error term.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Fold another compensated sum into this one, keeping both error terms.
    pub fn merge(&mut self, other: CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
