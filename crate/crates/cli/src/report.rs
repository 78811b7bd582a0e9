//! JSON report schema, version "chsh-report/1".
//!
//! Every number in a report is reproducible from (model, params, n, seed,
//! alpha) alone; the timestamp is the one explicitly labeled exception and
//! is suppressible.

use chsh_core::chain::ChainReport;
use chsh_core::correlation::CorrelationSet;
use chsh_core::model::ModelProfile;
use chsh_core::reorder::ReorderAudit;
use chsh_core::stats::{OiTestReport, PiTestReport, TestReport};
use serde::Serialize;

pub const SCHEMA: &str = "chsh-report/1";

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub model: String,
    pub params: serde_json::Value,
    pub source: String,
    pub trials: usize,
    pub seed: u64,
    pub alpha: f64,
    pub iterations: usize,
}

#[derive(Debug, Serialize)]
pub struct LifecycleSummary {
    pub all_pass: bool,
    /// (trial, violation code, sequence number) for each failing trial.
    pub violations: Vec<(usize, String, u64)>,
}

#[derive(Debug, Serialize)]
pub struct CorrelationsSection {
    pub filtered: CorrelationSet,
    pub full: CorrelationSet,
    pub chsh_filtered: f64,
    pub chsh_full: f64,
}

#[derive(Debug, Serialize)]
pub struct TolerancesSection {
    pub per_setting_counts: [usize; 4],
    /// Union-bound deviation allowance for the CHSH statistic at alpha.
    pub chsh: f64,
    /// Row-count tolerance handed to the reorder engine (alpha/4 per step).
    pub reorder: usize,
    /// All tolerance choices are artifact decisions: the source material
    /// quantifies "experimental error" only asymptotically.
    pub note: String,
}

#[derive(Debug, Serialize)]
pub struct AssumptionTests {
    pub conspiracy: TestReport,
    /// Per-pair multiset tests, each at alpha/3 (union bound).
    pub pi: PiTestReport,
    /// Per-subtable tests at alpha/2, conditioning on the raw B'2 column.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oi: Option<OiTestReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oi_note: Option<String>,
}

/// Assumption truth values as the tests see them, next to the declaration.
#[derive(Debug, Serialize)]
pub struct EmpiricalProfile {
    pub no_conspiracy: bool,
    pub parameter_independence: bool,
    /// None when the OI test could not run (empty subtable).
    pub outcome_independence: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct ProfileComparison {
    pub declared: ModelProfile,
    pub empirical: EmpiricalProfile,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct ReorderSection {
    /// "success" or the failing error code.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_step: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub audits: Vec<ReorderAudit>,
}

#[derive(Debug, Serialize)]
pub struct JointSection {
    pub chsh: f64,
    pub chain: ChainReport,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    /// Unix seconds; null under --no-timestamp.
    pub timestamp_unix: Option<u64>,
    pub config: ConfigEcho,
    pub lifecycle: LifecycleSummary,
    pub correlations: CorrelationsSection,
    pub tolerances: TolerancesSection,
    pub assumption_tests: AssumptionTests,
    pub profile: ProfileComparison,
    pub reorder: ReorderSection,
    /// Present only when the proof replay succeeded.
    pub joint: Option<JointSection>,
}

#[derive(Debug, Serialize)]
pub struct ProveReport {
    pub schema: String,
    pub command: String,
    pub timestamp_unix: Option<u64>,
    pub table_path: String,
    pub trials: usize,
    pub tolerance: usize,
    pub full_correlations: CorrelationSet,
    pub chsh_full: f64,
    pub reorder: ReorderSection,
    pub joint: Option<JointSection>,
}

#[derive(Debug, Serialize)]
pub struct SweepCell {
    pub trials: usize,
    pub seed: u64,
    pub chsh_filtered: f64,
    pub chsh_full: f64,
    pub chsh_tolerance: f64,
    pub reorder_status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint_chsh: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub trials: usize,
    pub seeds: u64,
    pub max_chsh_filtered: f64,
    pub mean_chsh_filtered: f64,
    /// max(0, max filtered CHSH − 2).
    pub max_excess_over_two: f64,
    pub chsh_tolerance: f64,
    pub within_bound: u64,
    pub replay_successes: u64,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub schema: String,
    pub command: String,
    pub timestamp_unix: Option<u64>,
    pub config: ConfigEcho,
    pub trials_list: Vec<usize>,
    pub cells: Vec<SweepCell>,
    pub summary: Vec<SweepSummary>,
}

pub fn timestamp(suppress: bool) -> Option<u64> {
    if suppress {
        None
    } else {
        Some(
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    }
}
