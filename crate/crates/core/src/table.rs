//! The potential-outcome table: eight outcome columns (one pair per setting)
//! plus the realized-setting column S.

use crate::error::ValueError;
use crate::value::{OutcomeValue, Setting};
use serde::{Deserialize, Serialize};

/// The eight potential outcomes of one trial, one (wing A, wing B) pair per
/// setting. Six of the eight are counterfactual in any given trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Octuple {
    pub a1: OutcomeValue,
    pub b1: OutcomeValue,
    pub a2: OutcomeValue,
    pub bp2: OutcomeValue,
    pub ap3: OutcomeValue,
    pub b3: OutcomeValue,
    pub ap4: OutcomeValue,
    pub bp4: OutcomeValue,
}

impl Octuple {
    /// The (wing A, wing B) outcome pair for a setting.
    pub fn pair(&self, setting: Setting) -> (OutcomeValue, OutcomeValue) {
        match setting.index() {
            1 => (self.a1, self.b1),
            2 => (self.a2, self.bp2),
            3 => (self.ap3, self.b3),
            _ => (self.ap4, self.bp4),
        }
    }

    /// Product of the outcome pair for a setting.
    pub fn product(&self, setting: Setting) -> f64 {
        let (a, b) = self.pair(setting);
        a.get() * b.get()
    }

    pub fn values(&self) -> [OutcomeValue; 8] {
        [
            self.a1, self.b1, self.a2, self.bp2, self.ap3, self.b3, self.ap4, self.bp4,
        ]
    }

    pub fn is_dichotomic(&self) -> bool {
        self.values().iter().all(|v| v.is_dichotomic())
    }

    /// All eight values equal to the given sign, the all-plus/all-minus tables
    /// used throughout the tests.
    pub fn constant(v: OutcomeValue) -> Self {
        Octuple {
            a1: v,
            b1: v,
            a2: v,
            bp2: v,
            ap3: v,
            b3: v,
            ap4: v,
            bp4: v,
        }
    }
}

/// One row of the potential-outcome table: the octuple, the realized setting,
/// and the trial position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub outcomes: Octuple,
    pub setting: Setting,
    pub trial_index: usize,
}

impl TrialRow {
    /// The outcome pair actually measured in this trial.
    pub fn realized(&self) -> (OutcomeValue, OutcomeValue) {
        self.outcomes.pair(self.setting)
    }
}

/// An ordered potential-outcome table.
///
/// Construction validates that trial indices run 0..n−1 in order and records
/// whether every value in the table is dichotomic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeTable {
    rows: Vec<TrialRow>,
    dichotomic: bool,
}

impl OutcomeTable {
    pub fn new(rows: Vec<TrialRow>) -> Result<Self, ValueError> {
        for (position, row) in rows.iter().enumerate() {
            if row.trial_index != position {
                return Err(ValueError::NonSequentialIndex {
                    position,
                    found: row.trial_index,
                });
            }
        }
        let dichotomic = rows.iter().all(|r| r.outcomes.is_dichotomic());
        Ok(OutcomeTable { rows, dichotomic })
    }

    pub fn rows(&self) -> &[TrialRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_dichotomic(&self) -> bool {
        self.dichotomic
    }

    /// Number of rows realized with each setting, indexed by `Setting::ordinal`.
    pub fn setting_counts(&self) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for row in &self.rows {
            counts[row.setting.ordinal()] += 1;
        }
        counts
    }
}
