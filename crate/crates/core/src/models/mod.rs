//! The model zoo: hidden-variable models spanning every generalization the
//! framework admits (deterministic, memory, clock-modulated) plus the
//! assumption-violating counterexamples (singlet statistics, the extremal
//! no-signaling box, a signaling model) and the setting sources.

mod clocked;
mod deterministic;
mod memory;
mod prbox;
mod signaling;
mod singlet;
mod sources;

pub use clocked::ClockedLocal;
pub use deterministic::{DeterministicLocal, StrategyEntry};
pub use memory::{BiasQuery, MemoryLocal, MemoryRule};
pub use prbox::PrBox;
pub use signaling::SignalingModel;
pub use singlet::SingletModel;
pub use sources::{ConspiracySource, ConspiracyTarget, PeekBlind, UniformSource};
