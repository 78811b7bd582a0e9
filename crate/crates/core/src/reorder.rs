//! The reorder engine: three parameter-independence column-pair matchings,
//! one outcome-independence within-subtable matching, and the production of
//! the reduced {A, B, B', A'} joint table.
//!
//! Matching is stable greedy: walk target rows in order and take the
//! earliest unconsumed moved-pair row with the required value. For
//! dichotomic columns this achieves the minimum possible discrepancy, the
//! multiset count bound |n₊(target) − n₊(moved)|. On a mismatch beyond the
//! caller's tolerance the engine stops and reports: the mismatch is the
//! finding, and a repaired table would manufacture evidence.

use crate::correlation::{chsh_statistic, compensated_mean, CorrelationSet};
use crate::error::ReorderError;
use crate::table::{OutcomeTable, TrialRow};
use crate::value::{OutcomeValue, Setting};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// The four proof steps, in application order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReorderStep {
    #[serde(rename = "PI_A1A2")]
    PiA1A2,
    #[serde(rename = "PI_B1B3")]
    PiB1B3,
    #[serde(rename = "PI_Bp2Bp4")]
    PiBp2Bp4,
    #[serde(rename = "OI_Ap3Ap4")]
    OiAp3Ap4,
}

/// The three parameter-independence matching steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiStep {
    /// Match A2 to A1, moving (A2, B'2) jointly.
    A1A2,
    /// Match B3 to B1, moving (A'3, B3) jointly.
    B1B3,
    /// Match B'4 to the (already reordered) B'2, moving (A'4, B'4) jointly.
    Bp2Bp4,
}

impl From<PiStep> for ReorderStep {
    fn from(step: PiStep) -> ReorderStep {
        match step {
            PiStep::A1A2 => ReorderStep::PiA1A2,
            PiStep::B1B3 => ReorderStep::PiB1B3,
            PiStep::Bp2Bp4 => ReorderStep::PiBp2Bp4,
        }
    }
}

/// Record of one reordering step. The moved pair's full-table correlation is
/// preserved exactly; `correlations_before`/`correlations_after` hold all
/// four column-pair averages so tests can assert that nothing drifted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReorderAudit {
    pub step: ReorderStep,
    /// Unmatched rows (total across subtables for the OI step).
    pub discrepancy: usize,
    /// OI step only: (d₊, d₋) per B' subtable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subtable_discrepancies: Option<(usize, usize)>,
    pub correlations_before: CorrelationSet,
    pub correlations_after: CorrelationSet,
    /// Row moves as (from, to) pairs; identity moves are omitted.
    pub permutation_applied: Vec<(usize, usize)>,
}

/// A row of the reduced joint table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointRow {
    pub a: OutcomeValue,
    pub b: OutcomeValue,
    pub bp: OutcomeValue,
    pub ap: OutcomeValue,
}

/// The {A, B, B', A'} table whose existence the reordering establishes.
/// Its four pair correlations satisfy the CHSH bound algebraically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointTable {
    rows: Vec<JointRow>,
}

impl JointTable {
    pub fn new(rows: Vec<JointRow>) -> Self {
        JointTable { rows }
    }

    pub fn rows(&self) -> &[JointRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_dichotomic(&self) -> bool {
        self.rows
            .iter()
            .all(|r| [r.a, r.b, r.bp, r.ap].iter().all(|v| v.is_dichotomic()))
    }

    /// The four pair correlations as plain averages over every row.
    /// An empty table yields the all-zero set.
    pub fn correlations(&self) -> CorrelationSet {
        let mean = |f: fn(&JointRow) -> f64| {
            compensated_mean(self.rows.iter().map(f)).unwrap_or(0.0)
        };
        CorrelationSet {
            c_ab: mean(|r| r.a.get() * r.b.get()),
            c_apb: mean(|r| r.ap.get() * r.b.get()),
            c_abp: mean(|r| r.a.get() * r.bp.get()),
            c_apbp: mean(|r| r.ap.get() * r.bp.get()),
        }
    }

    pub fn chsh(&self) -> f64 {
        chsh_statistic(&self.correlations())
    }
}

/// Full-table column-pair correlations with the all-zero convention for
/// empty tables (audit bookkeeping only).
fn full_corrs(table: &OutcomeTable) -> CorrelationSet {
    let mean = |s: Setting| {
        compensated_mean(table.rows().iter().map(move |r| r.outcomes.product(s))).unwrap_or(0.0)
    };
    CorrelationSet {
        c_ab: mean(Setting::S1),
        c_abp: mean(Setting::S2),
        c_apb: mean(Setting::S3),
        c_apbp: mean(Setting::S4),
    }
}

/// Stable greedy assignment of a moved dichotomic column onto a target
/// column. Returns `assignment` (for each position, the position whose
/// moved value lands there) and the number of unmatched rows.
fn greedy_assign(target: &[bool], moved: &[bool]) -> (Vec<usize>, usize) {
    debug_assert_eq!(target.len(), moved.len());
    let mut queues: [VecDeque<usize>; 2] = [VecDeque::new(), VecDeque::new()];
    for (j, &v) in moved.iter().enumerate() {
        queues[usize::from(v)].push_back(j);
    }
    let mut assignment = vec![usize::MAX; target.len()];
    let mut unfilled = Vec::new();
    for (i, &t) in target.iter().enumerate() {
        match queues[usize::from(t)].pop_front() {
            Some(j) => assignment[i] = j,
            None => unfilled.push(i),
        }
    }
    let mismatches = unfilled.len();
    let mut leftovers: Vec<usize> = queues[0].iter().chain(queues[1].iter()).copied().collect();
    leftovers.sort_unstable();
    for (dest, src) in unfilled.into_iter().zip(leftovers) {
        assignment[dest] = src;
    }
    (assignment, mismatches)
}

fn moves_of(assignment: &[usize]) -> Vec<(usize, usize)> {
    assignment
        .iter()
        .enumerate()
        .filter(|&(dest, &src)| dest != src)
        .map(|(dest, &src)| (src, dest))
        .collect()
}

/// One parameter-independence step: permute the step's column pair jointly
/// so the matched column equals its target wherever possible.
///
/// The pair's internal row-for-row pairing is preserved, so the pair's
/// full-table correlation is unchanged exactly. Steps must be applied in
/// `PiStep` order; the third step matches against the reordered B'2.
pub fn match_pair_pi(
    table: &OutcomeTable,
    step: PiStep,
    tolerance: usize,
) -> Result<(OutcomeTable, ReorderAudit), ReorderError> {
    if !table.is_dichotomic() {
        return Err(ReorderError::RequiresDichotomic);
    }
    let rows = table.rows();
    let target: Vec<bool> = rows
        .iter()
        .map(|r| {
            match step {
                PiStep::A1A2 => r.outcomes.a1,
                PiStep::B1B3 => r.outcomes.b1,
                PiStep::Bp2Bp4 => r.outcomes.bp2,
            }
            .is_plus()
        })
        .collect();
    let moved: Vec<bool> = rows
        .iter()
        .map(|r| {
            match step {
                PiStep::A1A2 => r.outcomes.a2,
                PiStep::B1B3 => r.outcomes.b3,
                PiStep::Bp2Bp4 => r.outcomes.bp4,
            }
            .is_plus()
        })
        .collect();

    let plus_target = target.iter().filter(|&&v| v).count();
    let plus_moved = moved.iter().filter(|&&v| v).count();
    let discrepancy = plus_target.abs_diff(plus_moved);
    if discrepancy > tolerance {
        return Err(ReorderError::PiMismatch {
            step: step.into(),
            discrepancy,
            tolerance,
        });
    }

    let (assignment, mismatches) = greedy_assign(&target, &moved);
    debug_assert_eq!(mismatches, discrepancy);

    let correlations_before = full_corrs(table);
    let new_rows: Vec<TrialRow> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let src = &rows[assignment[i]].outcomes;
            let mut outcomes = row.outcomes;
            match step {
                PiStep::A1A2 => {
                    outcomes.a2 = src.a2;
                    outcomes.bp2 = src.bp2;
                }
                PiStep::B1B3 => {
                    outcomes.ap3 = src.ap3;
                    outcomes.b3 = src.b3;
                }
                PiStep::Bp2Bp4 => {
                    outcomes.ap4 = src.ap4;
                    outcomes.bp4 = src.bp4;
                }
            }
            TrialRow { outcomes, ..*row }
        })
        .collect();
    let reordered = OutcomeTable::new(new_rows).expect("indices preserved");
    let correlations_after = full_corrs(&reordered);

    let audit = ReorderAudit {
        step: step.into(),
        discrepancy,
        subtable_discrepancies: None,
        correlations_before,
        correlations_after,
        permutation_applied: moves_of(&assignment),
    };
    Ok((reordered, audit))
}

/// The outcome-independence step: within each subtable of equal B', permute
/// only the A'4 values until they match A'3 wherever possible.
///
/// Subtables are keyed by B'2; rows are additionally partitioned by their
/// B'4 value so that a defective (tolerated) third PI step cannot let A'4
/// values cross B'4 classes, which keeps ⟨A'4·B'4⟩ unchanged exactly. The
/// rowwise precondition B'2 = B'4 is enforced up to the same tolerance.
pub fn match_oi(
    table: &OutcomeTable,
    tolerance: usize,
) -> Result<(OutcomeTable, ReorderAudit), ReorderError> {
    if !table.is_dichotomic() {
        return Err(ReorderError::RequiresDichotomic);
    }
    let rows = table.rows();
    let disagreement = rows
        .iter()
        .filter(|r| r.outcomes.bp2.is_plus() != r.outcomes.bp4.is_plus())
        .count();
    if disagreement > tolerance {
        return Err(ReorderError::PiStepsNotApplied { disagreement });
    }

    let mut assignment: Vec<usize> = (0..rows.len()).collect();
    let mut d_by_class = [0usize; 2]; // indexed by bp2 sign: [minus, plus]

    for bp2_plus in [false, true] {
        for bp4_plus in [false, true] {
            let cell: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| {
                    r.outcomes.bp2.is_plus() == bp2_plus && r.outcomes.bp4.is_plus() == bp4_plus
                })
                .map(|(i, _)| i)
                .collect();
            if cell.is_empty() {
                continue;
            }
            let target: Vec<bool> = cell.iter().map(|&i| rows[i].outcomes.ap3.is_plus()).collect();
            let moved: Vec<bool> = cell.iter().map(|&i| rows[i].outcomes.ap4.is_plus()).collect();
            let (local, mismatches) = greedy_assign(&target, &moved);
            d_by_class[usize::from(bp2_plus)] += mismatches;
            for (k, &src_k) in local.iter().enumerate() {
                assignment[cell[k]] = cell[src_k];
            }
        }
    }

    let (d_minus, d_plus) = (d_by_class[0], d_by_class[1]);
    if d_plus + d_minus > tolerance {
        return Err(ReorderError::OiMismatch {
            d_plus,
            d_minus,
            tolerance,
        });
    }

    let correlations_before = full_corrs(table);
    let new_rows: Vec<TrialRow> = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut outcomes = row.outcomes;
            outcomes.ap4 = rows[assignment[i]].outcomes.ap4;
            TrialRow { outcomes, ..*row }
        })
        .collect();
    let reordered = OutcomeTable::new(new_rows).expect("indices preserved");
    let correlations_after = full_corrs(&reordered);

    let audit = ReorderAudit {
        step: ReorderStep::OiAp3Ap4,
        discrepancy: d_plus + d_minus,
        subtable_discrepancies: Some((d_plus, d_minus)),
        correlations_before,
        correlations_after,
        permutation_applied: moves_of(&assignment),
    };
    Ok((reordered, audit))
}

/// Apply the three parameter-independence steps in order, keeping the
/// audits of every step that completed even when a later step fails.
pub fn apply_pi_steps(
    table: &OutcomeTable,
    tolerance: usize,
) -> (Vec<ReorderAudit>, Result<OutcomeTable, ReorderError>) {
    let mut audits = Vec::with_capacity(3);
    let mut current = table.clone();
    for step in [PiStep::A1A2, PiStep::B1B3, PiStep::Bp2Bp4] {
        match match_pair_pi(&current, step, tolerance) {
            Ok((next, audit)) => {
                audits.push(audit);
                current = next;
            }
            Err(e) => return (audits, Err(e)),
        }
    }
    (audits, Ok(current))
}

/// Run the four steps in order and reduce to the {A, B, B', A'} table,
/// keeping the audits of every step that completed even when a later step
/// fails.
///
/// On success the joint table is (A1, B1, B'2, A'3) and its CHSH statistic
/// is at most 2, an algebraic consequence of being a genuine joint
/// distribution, asserted unconditionally.
pub fn replay(
    table: &OutcomeTable,
    tolerance: usize,
) -> (Vec<ReorderAudit>, Result<JointTable, ReorderError>) {
    let (mut audits, pi_result) = apply_pi_steps(table, tolerance);
    let current = match pi_result {
        Ok(t) => t,
        Err(e) => return (audits, Err(e)),
    };
    let matched = match match_oi(&current, tolerance) {
        Ok((next, audit)) => {
            audits.push(audit);
            next
        }
        Err(e) => return (audits, Err(e)),
    };

    let joint = JointTable::new(
        matched
            .rows()
            .iter()
            .map(|r| JointRow {
                a: r.outcomes.a1,
                b: r.outcomes.b1,
                bp: r.outcomes.bp2,
                ap: r.outcomes.ap3,
            })
            .collect(),
    );
    let chsh = joint.chsh();
    assert!(
        chsh <= 2.0,
        "joint-table CHSH {chsh} exceeded 2: arithmetic invariant broken"
    );
    (audits, Ok(joint))
}

/// `replay`, flattened to a plain result for callers that have no use for
/// partial audits.
pub fn derive_joint(
    table: &OutcomeTable,
    tolerance: usize,
) -> Result<(JointTable, Vec<ReorderAudit>), ReorderError> {
    let (audits, result) = replay(table, tolerance);
    result.map(|joint| (joint, audits))
}
