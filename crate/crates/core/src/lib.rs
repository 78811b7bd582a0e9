//! Simulator and constructive proof engine for CHSH experiments over
//! generalized local hidden-variable models.
//!
//! The crate builds the potential-outcome table of a seeded run (eight
//! outcome columns plus the realized setting), tests the no-conspiracy,
//! parameter-independence and outcome-independence assumptions on it,
//! mechanically replays the reordering argument that reduces the table to a
//! joint {A, B, B', A'} distribution, and verifies every link of the chain
//! that bounds the CHSH statistic of such a distribution by 2.
//!
//! Modules:
//! - [`value`], [`table`], [`mod@correlation`]: domain types and CHSH arithmetic.
//! - [`model`], [`models`]: the hidden-variable model contract and the zoo:
//!   local models (deterministic, memory, clocked) plus assumption-violating
//!   ones (singlet statistics, the extremal no-signaling box, a signaling
//!   model) and setting sources.
//! - [`run`]: the experiment runner and trial-lifecycle validation.
//! - [`reorder`], [`chain`]: the proof replay and the bound verifier.
//! - [`stats`]: finite-sample tolerances and assumption tests.
//! - [`csv`]: table and event-log serialization.

pub mod chain;
pub mod correlation;
pub mod csv;
pub mod error;
pub mod model;
pub mod models;
pub mod random;
pub mod reorder;
pub mod run;
pub mod stats;
pub mod table;
pub mod value;

pub use chain::{verify_chain, ChainReport};
pub use correlation::{chsh_statistic, correlation, CorrelationSet};
pub use model::{HvModel, ModelProfile, SettingSource};
pub use reorder::{derive_joint, match_oi, match_pair_pi, replay, JointTable, PiStep, ReorderAudit};
pub use run::{
    filtered_correlations, full_table_correlations, run_experiment, validate_lifecycle, RunConfig,
    RunOutput,
};
pub use table::{Octuple, OutcomeTable, TrialRow};
pub use value::{AssumptionProfile, Observable, OutcomeValue, Setting, Wing};
