//! Local model with memory: outcome biases evolve with the realized history
//! through a caller-supplied update rule.

use crate::error::ModelError;
use crate::model::{HvModel, Microstate, ModelProfile, OutcomeQuery, RealizedTrial, TrialContext};
use crate::random::RandomStream;
use crate::value::{Observable, OutcomeValue, Setting, Wing};

/// What a memory rule's bias function may see for one outcome query. The
/// remote fields are present so that an ill-formed (non-local) rule is
/// expressible, and rejected at construction.
#[derive(Debug, Clone, Copy)]
pub struct BiasQuery {
    pub wing: Wing,
    pub local: Observable,
    pub remote_observable: Option<Observable>,
    pub remote_outcome: Option<OutcomeValue>,
}

type UpdateFn = Box<dyn Fn(i64, &RealizedTrial) -> i64 + Send + Sync>;
type BiasFn = Box<dyn Fn(i64, &BiasQuery) -> f64 + Send + Sync>;

/// A memory update rule: an initial internal state, a fold over realized
/// trials, and a bias function giving P(outcome = +1) per wing/observable.
pub struct MemoryRule {
    pub initial_state: i64,
    update: UpdateFn,
    bias: BiasFn,
}

impl MemoryRule {
    pub fn new(
        initial_state: i64,
        update: impl Fn(i64, &RealizedTrial) -> i64 + Send + Sync + 'static,
        bias: impl Fn(i64, &BiasQuery) -> f64 + Send + Sync + 'static,
    ) -> Self {
        MemoryRule {
            initial_state,
            update: Box::new(update),
            bias: Box::new(bias),
        }
    }

    /// The trivial rule: a fair coin on every observable, history ignored.
    /// This is the stochastic memoryless model.
    pub fn fair_coin() -> Self {
        MemoryRule::new(0, |state, _| state, |_, _| 0.5)
    }

    /// Flips wing A's output bias after every trial in which wing A measured
    /// +1. Wing B stays an unbiased coin; the memory lives on wing A.
    pub fn bias_flip(delta: f64) -> Self {
        MemoryRule::new(
            1,
            |state, realized| {
                if realized.outcome_a.is_plus() {
                    -state
                } else {
                    state
                }
            },
            move |state, q| match q.wing {
                Wing::A => 0.5 + delta * state as f64,
                Wing::B => 0.5,
            },
        )
    }

    /// Deterministic two-trial-period rule: every observable is +1 on even
    /// trials and −1 on odd trials (counted by realized history length).
    pub fn period_two() -> Self {
        MemoryRule::new(
            0,
            |state, _| (state + 1) % 2,
            |state, _| if state == 0 { 1.0 } else { 0.0 },
        )
    }
}

/// Local model with memory. The rule is probed at construction: any
/// dependence of its bias on the remote observable or remote outcome is a
/// locality breach, and any bias outside [0, 1] is rejected.
pub struct MemoryLocal {
    rule: MemoryRule,
    state: i64,
}

impl std::fmt::Debug for MemoryLocal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MemoryLocal").field("state", &self.state).finish()
    }
}

impl MemoryLocal {
    pub fn new(rule: MemoryRule) -> Result<Self, ModelError> {
        probe_rule(&rule)?;
        let state = rule.initial_state;
        Ok(MemoryLocal { rule, state })
    }

    pub fn state(&self) -> i64 {
        self.state
    }
}

/// Deterministic probe battery: fold the update over a canned realized
/// sequence to collect reachable states, then check the bias function for
/// remote-field sensitivity and range on every (state, wing, observable).
fn probe_rule(rule: &MemoryRule) -> Result<(), ModelError> {
    let mut states = vec![rule.initial_state];
    let mut state = rule.initial_state;
    for i in 0..16usize {
        let realized = RealizedTrial {
            setting: Setting::ALL[i % 4],
            outcome_a: OutcomeValue::sign(i % 2 == 0),
            outcome_b: OutcomeValue::sign(i % 3 == 0),
        };
        state = (rule.update)(state, &realized);
        if !states.contains(&state) {
            states.push(state);
        }
    }

    for &s in &states {
        for wing in [Wing::A, Wing::B] {
            for local in [Observable::Unprimed, Observable::Primed] {
                let masked = BiasQuery {
                    wing,
                    local,
                    remote_observable: None,
                    remote_outcome: None,
                };
                let p0 = (rule.bias)(s, &masked);
                if !(0.0..=1.0).contains(&p0) {
                    return Err(ModelError::InvalidParameter(format!(
                        "memory rule bias {p0} outside [0, 1]"
                    )));
                }
                for remote_observable in [None, Some(Observable::Unprimed), Some(Observable::Primed)]
                {
                    for remote_outcome in [None, Some(OutcomeValue::PLUS), Some(OutcomeValue::MINUS)]
                    {
                        let q = BiasQuery {
                            wing,
                            local,
                            remote_observable,
                            remote_outcome,
                        };
                        if (rule.bias)(s, &q) != p0 {
                            return Err(ModelError::LocalityBreach(
                                "memory rule bias depends on the remote wing".into(),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

impl HvModel for MemoryLocal {
    fn profile(&self) -> ModelProfile {
        ModelProfile::LOCAL_DICHOTOMIC
    }

    fn draw_microstate(
        &self,
        _context: &TrialContext<'_>,
        _setting: Setting,
        _rng: &mut RandomStream,
    ) -> Microstate {
        Microstate {
            payload: serde_json::Value::from(self.state),
            label: std::borrow::Cow::Borrowed("memory"),
        }
    }

    fn outcome_probability(&self, query: &OutcomeQuery<'_>) -> Result<f64, ModelError> {
        let state = query.microstate.payload.as_i64().unwrap_or(self.state);
        Ok((self.rule.bias)(
            state,
            &BiasQuery {
                wing: query.wing,
                local: query.local,
                remote_observable: query.remote_observable,
                remote_outcome: query.remote_outcome,
            },
        ))
    }

    fn observe_realized(&mut self, realized: &RealizedTrial) {
        self.state = (self.rule.update)(self.state, realized);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_profile_honesty;

    #[test]
    fn leaky_rule_is_rejected_at_construction() {
        let leaky = MemoryRule::new(
            0,
            |s, _| s,
            |_, q| match q.remote_observable {
                Some(Observable::Primed) => 0.25,
                _ => 0.75,
            },
        );
        assert_eq!(
            MemoryLocal::new(leaky).unwrap_err().code(),
            "locality-breach-in-local-model"
        );
    }

    #[test]
    fn outcome_dependent_rule_is_rejected() {
        let leaky = MemoryRule::new(
            0,
            |s, _| s,
            |_, q| if q.remote_outcome.is_some() { 1.0 } else { 0.5 },
        );
        assert_eq!(
            MemoryLocal::new(leaky).unwrap_err().code(),
            "locality-breach-in-local-model"
        );
    }

    #[test]
    fn out_of_range_bias_is_rejected() {
        let bad = MemoryRule::new(0, |s, _| s, |_, _| 1.5);
        assert_eq!(
            MemoryLocal::new(bad).unwrap_err().code(),
            "invalid-parameter"
        );
    }

    #[test]
    fn bias_flip_state_follows_history() {
        let mut model = MemoryLocal::new(MemoryRule::bias_flip(0.3)).unwrap();
        assert_eq!(model.state(), 1);
        model.observe_realized(&RealizedTrial {
            setting: Setting::S1,
            outcome_a: OutcomeValue::PLUS,
            outcome_b: OutcomeValue::MINUS,
        });
        assert_eq!(model.state(), -1);
        model.observe_realized(&RealizedTrial {
            setting: Setting::S2,
            outcome_a: OutcomeValue::MINUS,
            outcome_b: OutcomeValue::MINUS,
        });
        assert_eq!(model.state(), -1);
    }

    #[test]
    fn presets_are_honest() {
        for rule in [MemoryRule::fair_coin(), MemoryRule::bias_flip(0.2), MemoryRule::period_two()]
        {
            let model = MemoryLocal::new(rule).unwrap();
            let report = check_profile_honesty(&model, 128, 5).unwrap();
            assert!(report.pi_honest && report.oi_honest);
        }
    }
}
