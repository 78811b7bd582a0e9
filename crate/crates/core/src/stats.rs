//! Finite-sample statistics: law-of-large-numbers tolerances, multiset
//! distribution-equality tests, and the permutation test for the
//! no-conspiracy assumption. These turn distribution-level claims into
//! desk-scale assertions with explicit, non-asymptotic bounds.

use crate::error::StatError;
use crate::run::{filtered_correlations, full_table_correlations};
use crate::table::OutcomeTable;
use crate::value::{OutcomeValue, Setting};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestMethod {
    TwoProportion,
    Permutation,
    ExactCount,
}

/// One hypothesis-test outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic: f64,
    pub p_value: f64,
    /// Significance level the rejection decision used.
    pub reject_at: f64,
    pub method: TestMethod,
    pub rejected: bool,
}

impl TestReport {
    fn new(statistic: f64, p_value: f64, alpha: f64, method: TestMethod) -> Self {
        TestReport {
            statistic,
            p_value,
            reject_at: alpha,
            method,
            rejected: p_value < alpha,
        }
    }
}

/// Two-sided Hoeffding deviation bound for a mean of `n` independent values
/// in [−1, 1]: t = sqrt(2·ln(2/alpha)/n).
pub fn hoeffding_tolerance(n: usize, alpha: f64) -> Result<f64, StatError> {
    validate_alpha(alpha)?;
    if n == 0 {
        return Err(StatError::InvalidParameter("n must be at least 1".into()));
    }
    Ok((2.0 * (2.0 / alpha).ln() / n as f64).sqrt())
}

/// Union-bound tolerance for the CHSH statistic: the sum of per-correlation
/// Hoeffding bounds at alpha/4.
pub fn chsh_tolerance(n_per_setting: [usize; 4], alpha: f64) -> Result<f64, StatError> {
    let mut total = 0.0;
    for n in n_per_setting {
        total += hoeffding_tolerance(n, alpha / 4.0)?;
    }
    Ok(total)
}

/// Row-count tolerance for the reorder engine's multiset matching:
/// ceil(n · hoeffding_tolerance(n, alpha)), the count form of the
/// two-proportion deviation bound.
pub fn multiset_count_tolerance(n: usize, alpha: f64) -> Result<usize, StatError> {
    Ok((n as f64 * hoeffding_tolerance(n, alpha)?).ceil() as usize)
}

fn validate_alpha(alpha: f64) -> Result<(), StatError> {
    if alpha.is_finite() && 0.0 < alpha && alpha < 1.0 {
        Ok(())
    } else {
        Err(StatError::InvalidParameter(format!(
            "alpha {alpha} outside (0, 1)"
        )))
    }
}

/// Standard normal CDF via the Abramowitz–Stegun 26.2.17 polynomial tail
/// (absolute error below 1e-7).
pub fn standard_normal_cdf(x: f64) -> f64 {
    let tail = |z: f64| {
        let t = 1.0 / (1.0 + 0.2316419 * z);
        let poly = t
            * (0.319381530
                + t * (-0.356563782 + t * (1.781477937 + t * (-1.821255978 + t * 1.330274429))));
        (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt() * poly
    };
    if x >= 0.0 {
        1.0 - tail(x)
    } else {
        tail(-x)
    }
}

/// Multiset equality report: the two-proportion test plus the exact count
/// discrepancy the reorder engine budgets against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultisetEquality {
    pub test: TestReport,
    /// d = |n₊(x) − n₊(y)|.
    pub discrepancy: usize,
}

/// Two-proportion z-test that two dichotomic columns have the same P(+1).
pub fn multiset_equality_test(
    x: &[OutcomeValue],
    y: &[OutcomeValue],
    alpha: f64,
) -> Result<MultisetEquality, StatError> {
    validate_alpha(alpha)?;
    if x.len() != y.len() {
        return Err(StatError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(StatError::InvalidParameter(
            "columns must be non-empty".into(),
        ));
    }
    if x.iter().chain(y).any(|v| !v.is_dichotomic()) {
        return Err(StatError::InvalidParameter(
            "multiset test requires dichotomic columns".into(),
        ));
    }

    let n = x.len() as f64;
    let plus_x = x.iter().filter(|v| v.is_plus()).count();
    let plus_y = y.iter().filter(|v| v.is_plus()).count();
    let discrepancy = plus_x.abs_diff(plus_y);

    let p1 = plus_x as f64 / n;
    let p2 = plus_y as f64 / n;
    let pooled = (plus_x + plus_y) as f64 / (2.0 * n);
    let se = (pooled * (1.0 - pooled) * (2.0 / n)).sqrt();
    let (z, p_value) = if plus_x == plus_y {
        // Equal counts: z is exactly 0 and the two-sided test cannot reject.
        (0.0, 1.0)
    } else {
        let z = (p1 - p2) / se;
        let p = 2.0 * (1.0 - standard_normal_cdf(z.abs()));
        (z, p.clamp(0.0, 1.0))
    };

    Ok(MultisetEquality {
        test: TestReport::new(z, p_value, alpha, TestMethod::TwoProportion),
        discrepancy,
    })
}

/// Parameter-independence reports for the three matched column pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiTestReport {
    pub a1_a2: MultisetEquality,
    pub b1_b3: MultisetEquality,
    pub bp2_bp4: MultisetEquality,
}

impl PiTestReport {
    pub fn all_pass(&self) -> bool {
        !self.a1_a2.test.rejected && !self.b1_b3.test.rejected && !self.bp2_bp4.test.rejected
    }
}

/// Apply the multiset test to (A1, A2), (B1, B3), (B'2, B'4), each at the
/// given level. Callers wanting family-wise control pass alpha/3.
pub fn pi_empirical_test(table: &OutcomeTable, alpha: f64) -> Result<PiTestReport, StatError> {
    let col = |f: fn(&crate::table::Octuple) -> OutcomeValue| -> Vec<OutcomeValue> {
        table.rows().iter().map(|r| f(&r.outcomes)).collect()
    };
    Ok(PiTestReport {
        a1_a2: multiset_equality_test(&col(|o| o.a1), &col(|o| o.a2), alpha)?,
        b1_b3: multiset_equality_test(&col(|o| o.b1), &col(|o| o.b3), alpha)?,
        bp2_bp4: multiset_equality_test(&col(|o| o.bp2), &col(|o| o.bp4), alpha)?,
    })
}

/// Outcome-independence reports per B' subtable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OiTestReport {
    pub plus_class: MultisetEquality,
    pub minus_class: MultisetEquality,
}

impl OiTestReport {
    pub fn all_pass(&self) -> bool {
        !self.plus_class.test.rejected && !self.minus_class.test.rejected
    }
}

/// Within each subtable of equal B', test whether A'3 and A'4 have the same
/// distribution. B'2 is the conditioning column; on tables that have not
/// been through the PI steps this is the documented raw-table reading.
pub fn oi_empirical_test(table: &OutcomeTable, alpha: f64) -> Result<OiTestReport, StatError> {
    let mut reports: [Option<MultisetEquality>; 2] = [None, None];
    for (slot, plus) in [(0usize, true), (1usize, false)] {
        let rows: Vec<_> = table
            .rows()
            .iter()
            .filter(|r| r.outcomes.bp2.is_plus() == plus)
            .collect();
        if rows.is_empty() {
            let class = if plus { "+1" } else { "-1" };
            return Err(StatError::EmptySubtable(class.into()));
        }
        let ap3: Vec<OutcomeValue> = rows.iter().map(|r| r.outcomes.ap3).collect();
        let ap4: Vec<OutcomeValue> = rows.iter().map(|r| r.outcomes.ap4).collect();
        reports[slot] = Some(multiset_equality_test(&ap3, &ap4, alpha)?);
    }
    Ok(OiTestReport {
        plus_class: reports[0].take().expect("filled"),
        minus_class: reports[1].take().expect("filled"),
    })
}

/// The no-conspiracy statistic: the largest per-setting gap between the
/// S-filtered and full-table correlation.
fn conspiracy_statistic(
    products: &[[f64; 4]],
    assignment: &[Setting],
    full_means: &[f64; 4],
) -> f64 {
    let mut sums = [0.0f64; 4];
    let mut counts = [0usize; 4];
    for (row, &s) in assignment.iter().enumerate() {
        let i = s.ordinal();
        sums[i] += products[row][i];
        counts[i] += 1;
    }
    let mut worst = 0.0f64;
    for i in 0..4 {
        if counts[i] > 0 {
            worst = worst.max((sums[i] / counts[i] as f64 - full_means[i]).abs());
        }
    }
    worst
}

type ShuffleInputs = (Vec<[f64; 4]>, Vec<Setting>, [f64; 4]);

fn table_products_and_settings(table: &OutcomeTable) -> Result<ShuffleInputs, StatError> {
    if !table.is_dichotomic() {
        return Err(StatError::InvalidParameter(
            "conspiracy test requires a dichotomic table".into(),
        ));
    }
    // Requires every setting present, like the filtered correlations do.
    filtered_correlations(table)?;
    let full = full_table_correlations(table)?;
    let products: Vec<[f64; 4]> = table
        .rows()
        .iter()
        .map(|r| std::array::from_fn(|i| r.outcomes.product(Setting::ALL[i])))
        .collect();
    let assignment: Vec<Setting> = table.rows().iter().map(|r| r.setting).collect();
    let full_means = [full.c_ab, full.c_abp, full.c_apb, full.c_apbp];
    Ok((products, assignment, full_means))
}

/// Permutation test of the no-conspiracy assumption: reshuffle the S column
/// and compare the filtered-vs-full correlation gap against its shuffle
/// null. The p-value is the fraction of shuffles reaching the observed
/// statistic.
pub fn conspiracy_test(
    table: &OutcomeTable,
    iterations: usize,
    alpha: f64,
    seed: u64,
) -> Result<TestReport, StatError> {
    validate_alpha(alpha)?;
    if iterations < 100 {
        return Err(StatError::InsufficientIterations(iterations));
    }
    let (products, mut assignment, full_means) = table_products_and_settings(table)?;
    let observed = conspiracy_statistic(&products, &assignment, &full_means);

    let mut rng = crate::random::RandomStream::from_words(&[seed, 0x5348554646]);
    let mut reached = 0usize;
    for _ in 0..iterations {
        // Fisher–Yates on the S assignment.
        for i in (1..assignment.len()).rev() {
            let j = rng.below(i + 1);
            assignment.swap(i, j);
        }
        if conspiracy_statistic(&products, &assignment, &full_means) >= observed {
            reached += 1;
        }
    }
    let p_value = reached as f64 / iterations as f64;
    Ok(TestReport::new(
        observed,
        p_value,
        alpha,
        TestMethod::Permutation,
    ))
}

/// Exact version of `conspiracy_test` for tiny tables: enumerate every
/// ordering of the observed S column (n! of them, duplicates weighted
/// naturally) and count how many reach the observed statistic.
pub fn conspiracy_test_exhaustive(
    table: &OutcomeTable,
    alpha: f64,
) -> Result<TestReport, StatError> {
    validate_alpha(alpha)?;
    let n = table.len();
    if n == 0 || n > 8 {
        return Err(StatError::InvalidParameter(format!(
            "exhaustive enumeration supports 1..=8 rows, got {n}"
        )));
    }
    let (products, assignment, full_means) = table_products_and_settings(table)?;
    let observed = conspiracy_statistic(&products, &assignment, &full_means);

    let mut reached = 0usize;
    let mut total = 0usize;
    let mut arrangement = assignment.clone();
    heap_permutations(&mut arrangement, n, &mut |perm| {
        total += 1;
        if conspiracy_statistic(&products, perm, &full_means) >= observed {
            reached += 1;
        }
    });
    let p_value = reached as f64 / total as f64;
    Ok(TestReport::new(
        observed,
        p_value,
        alpha,
        TestMethod::ExactCount,
    ))
}

fn heap_permutations(arr: &mut Vec<Setting>, k: usize, visit: &mut impl FnMut(&[Setting])) {
    if k <= 1 {
        visit(arr);
        return;
    }
    for i in 0..k {
        heap_permutations(arr, k - 1, visit);
        if k.is_multiple_of(2) {
            arr.swap(i, k - 1);
        } else {
            arr.swap(0, k - 1);
        }
    }
}
