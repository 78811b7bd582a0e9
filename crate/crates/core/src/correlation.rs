//! Correlation arithmetic: compensated summation, the sample correlation of
//! outcome pairs, and the CHSH statistic.

use crate::error::ValueError;
use crate::value::OutcomeValue;
use serde::{Deserialize, Serialize};

/// Neumaier compensated accumulator.
///
/// Keeps correlation results reproducible across row orderings to well below
/// 1e-12, which the reorder engine relies on when asserting that its
/// permutations preserve averages.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated mean of an iterator of values.
pub fn compensated_mean(values: impl IntoIterator<Item = f64>) -> Result<f64, ValueError> {
    let mut acc = CompensatedSum::new();
    let mut n = 0usize;
    for v in values {
        acc.add(v);
        n += 1;
    }
    if n == 0 {
        return Err(ValueError::EmptySample);
    }
    Ok(acc.total() / n as f64)
}

/// Sample correlation of a sequence of outcome pairs: the mean of products.
///
/// Both inputs are bounded by ±1, so the result lies in [−1, 1].
pub fn correlation(pairs: &[(OutcomeValue, OutcomeValue)]) -> Result<f64, ValueError> {
    compensated_mean(pairs.iter().map(|(x, y)| x.get() * y.get()))
}

/// The four correlations of a run: ⟨AB⟩, ⟨A'B⟩, ⟨AB'⟩, ⟨A'B'⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSet {
    pub c_ab: f64,
    pub c_apb: f64,
    pub c_abp: f64,
    pub c_apbp: f64,
}

impl CorrelationSet {
    pub fn new(c_ab: f64, c_apb: f64, c_abp: f64, c_apbp: f64) -> Self {
        CorrelationSet {
            c_ab,
            c_apb,
            c_abp,
            c_apbp,
        }
    }

    /// Largest |before − after| entry-wise difference against another set.
    pub fn max_abs_diff(&self, other: &CorrelationSet) -> f64 {
        [
            (self.c_ab - other.c_ab).abs(),
            (self.c_apb - other.c_apb).abs(),
            (self.c_abp - other.c_abp).abs(),
            (self.c_apbp - other.c_apbp).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// The CHSH statistic |⟨AB'⟩ + ⟨B'A'⟩ + ⟨A'B⟩ − ⟨BA⟩|.
///
/// Bounded by 4 for arbitrary correlation sets; the classical bound of 2
/// holds only for correlations computed from a genuine joint distribution.
pub fn chsh_statistic(c: &CorrelationSet) -> f64 {
    (c.c_abp + c.c_apbp + c.c_apb - c.c_ab).abs()
}
