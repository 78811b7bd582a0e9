//! Deterministic local model: a periodic strategy table assigns fixed
//! dichotomic values to (A, A', B, B') as a function of the trial counter.

use crate::error::ModelError;
use crate::model::{HvModel, Microstate, ModelProfile, OutcomeQuery, TrialContext};
use crate::random::RandomStream;
use crate::value::{Observable, OutcomeValue, Setting, Wing};
use std::borrow::Cow;

/// Fixed outcomes for all four observables at one strategy slot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyEntry {
    pub a: OutcomeValue,
    pub ap: OutcomeValue,
    pub b: OutcomeValue,
    pub bp: OutcomeValue,
}

impl StrategyEntry {
    pub fn from_signs(a: bool, ap: bool, b: bool, bp: bool) -> Self {
        StrategyEntry {
            a: OutcomeValue::sign(a),
            ap: OutcomeValue::sign(ap),
            b: OutcomeValue::sign(b),
            bp: OutcomeValue::sign(bp),
        }
    }

    pub fn value(&self, wing: Wing, observable: Observable) -> OutcomeValue {
        match (wing, observable) {
            (Wing::A, Observable::Unprimed) => self.a,
            (Wing::A, Observable::Primed) => self.ap,
            (Wing::B, Observable::Unprimed) => self.b,
            (Wing::B, Observable::Primed) => self.bp,
        }
    }

    /// CHSH contribution of this single strategy: |ab' + a'b' + a'b − ab|.
    pub fn chsh(&self) -> f64 {
        let (a, ap, b, bp) = (self.a.get(), self.ap.get(), self.b.get(), self.bp.get());
        (a * bp + ap * bp + ap * b - a * b).abs()
    }
}

/// The classic λ-determines-everything model. The microstate is the strategy
/// slot for the trial; outcomes are functions of the microstate only.
#[derive(Debug, Clone)]
pub struct DeterministicLocal {
    strategy: Vec<StrategyEntry>,
}

impl DeterministicLocal {
    pub fn new(strategy: Vec<StrategyEntry>) -> Result<Self, ModelError> {
        if strategy.is_empty() {
            return Err(ModelError::InvalidStrategy(
                "strategy period must be at least 1".into(),
            ));
        }
        for (i, entry) in strategy.iter().enumerate() {
            let all = [entry.a, entry.ap, entry.b, entry.bp];
            if let Some(bad) = all.iter().find(|v| !v.is_dichotomic()) {
                return Err(ModelError::InvalidStrategy(format!(
                    "entry {i} contains non-dichotomic value {}",
                    bad.get()
                )));
            }
        }
        Ok(DeterministicLocal { strategy })
    }

    /// Constant all-+1 strategy.
    pub fn all_plus() -> Self {
        DeterministicLocal::new(vec![StrategyEntry::from_signs(true, true, true, true)])
            .expect("constant strategy is valid")
    }

    /// Sign alternating with the parity of the trial counter.
    pub fn parity_alternating() -> Self {
        DeterministicLocal::new(vec![
            StrategyEntry::from_signs(true, true, true, true),
            StrategyEntry::from_signs(false, false, false, false),
        ])
        .expect("alternating strategy is valid")
    }

    /// Period-16 strategy enumerating every deterministic sign assignment,
    /// so a long run averages the sixteen strategies with equal weight.
    pub fn full_enumeration() -> Self {
        let mut entries = Vec::with_capacity(16);
        for bits in 0u8..16 {
            entries.push(StrategyEntry::from_signs(
                bits & 1 != 0,
                bits & 2 != 0,
                bits & 4 != 0,
                bits & 8 != 0,
            ));
        }
        DeterministicLocal::new(entries).expect("enumeration strategy is valid")
    }

    /// Random strategy table of the given period, derived from a seed.
    pub fn random(seed: u64, period: usize) -> Result<Self, ModelError> {
        if period == 0 {
            return Err(ModelError::InvalidStrategy(
                "strategy period must be at least 1".into(),
            ));
        }
        let mut rng = RandomStream::from_words(&[seed, 0xDE7E_2017]);
        let entries = (0..period)
            .map(|_| StrategyEntry::from_signs(rng.sign(), rng.sign(), rng.sign(), rng.sign()))
            .collect();
        DeterministicLocal::new(entries)
    }

    pub fn strategy(&self) -> &[StrategyEntry] {
        &self.strategy
    }

    fn entry_for(&self, microstate: &Microstate) -> &StrategyEntry {
        let idx = microstate.payload.as_u64().unwrap_or(0) as usize;
        &self.strategy[idx % self.strategy.len()]
    }
}

impl HvModel for DeterministicLocal {
    fn profile(&self) -> ModelProfile {
        ModelProfile::LOCAL_DICHOTOMIC
    }

    fn draw_microstate(
        &self,
        context: &TrialContext<'_>,
        _setting: Setting,
        _rng: &mut RandomStream,
    ) -> Microstate {
        let idx = context.time_index % self.strategy.len();
        Microstate {
            payload: serde_json::Value::from(idx as u64),
            label: Cow::Borrowed("strategy"),
        }
    }

    fn outcome_probability(&self, query: &OutcomeQuery<'_>) -> Result<f64, ModelError> {
        let value = self.entry_for(query.microstate).value(query.wing, query.local);
        Ok(if value.is_plus() { 1.0 } else { 0.0 })
    }
}
