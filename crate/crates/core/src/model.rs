//! Behavioral contracts for hidden-variable models and setting sources.
//!
//! A model supplies, per trial: classical messages (before the setting is
//! chosen), a microstate per setting, and outcome distributions for each
//! wing given the microstate and trial context. A setting source chooses
//! which observable pair is actually measured; honest sources ignore the
//! potential outcomes offered to them, conspiring ones do not.

use crate::error::ModelError;
use crate::random::RandomStream;
use crate::table::Octuple;
use crate::value::{AssumptionProfile, Observable, OutcomeValue, Setting, Wing};
use serde::{Deserialize, Serialize};
use std::borrow::Cow;

/// A hidden-variable draw for one trial (per setting when the model is
/// setting-dependent). The payload is opaque to everything but the model
/// that produced it; the label is for audit logs.
#[derive(Debug, Clone, PartialEq)]
pub struct Microstate {
    pub payload: serde_json::Value,
    pub label: Cow<'static, str>,
}

impl Microstate {
    pub fn empty(label: &'static str) -> Self {
        Microstate {
            payload: serde_json::Value::Null,
            label: Cow::Borrowed(label),
        }
    }
}

/// The realized record of one past trial: the setting and the two outcomes
/// actually measured, never the six counterfactual columns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealizedTrial {
    pub setting: Setting,
    pub outcome_a: OutcomeValue,
    pub outcome_b: OutcomeValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MessageSender {
    WingA,
    WingB,
    Source,
}

/// A classical message exchanged during a trial's communication phase.
/// Temporal ordering (every message precedes the setting choice) is enforced
/// by the experiment runner, not by this type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMessage {
    pub sender: MessageSender,
    pub body: serde_json::Value,
    pub sequence_number: u64,
}

/// Everything a model may legitimately condition on at one instant: the
/// trial counter (which doubles as the instant of time), the realized
/// history, and this trial's messages.
#[derive(Debug, Clone, Copy)]
pub struct TrialContext<'a> {
    pub time_index: usize,
    pub history: &'a [RealizedTrial],
    pub messages: &'a [ClassicalMessage],
}

impl<'a> TrialContext<'a> {
    pub fn without_history(time_index: usize) -> TrialContext<'static> {
        TrialContext {
            time_index,
            history: &[],
            messages: &[],
        }
    }
}

/// Declared behavior of a model: its assumption profile plus whether its
/// outcomes are dichotomic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelProfile {
    pub assumptions: AssumptionProfile,
    pub dichotomic: bool,
}

impl ModelProfile {
    pub const LOCAL_DICHOTOMIC: ModelProfile = ModelProfile {
        assumptions: AssumptionProfile::ALL_TRUE,
        dichotomic: true,
    };
}

/// One outcome-distribution query.
///
/// `remote_observable` and `remote_outcome` may be absent; a model declaring
/// parameter independence must return identical probabilities whether
/// `remote_observable` is supplied or not (with the remote outcome absent),
/// and a model declaring outcome independence must be insensitive to
/// `remote_outcome`.
#[derive(Debug, Clone, Copy)]
pub struct OutcomeQuery<'a> {
    pub wing: Wing,
    pub microstate: &'a Microstate,
    pub context: &'a TrialContext<'a>,
    pub local: Observable,
    pub remote_observable: Option<Observable>,
    pub remote_outcome: Option<OutcomeValue>,
}

impl<'a> OutcomeQuery<'a> {
    /// Copy of the query with both remote fields removed.
    pub fn masked(&self) -> Self {
        OutcomeQuery {
            remote_observable: None,
            remote_outcome: None,
            ..*self
        }
    }
}

/// The hidden-variable model contract.
///
/// Implementations must be deterministic given (seed, context): all
/// randomness comes in through the streams handed to them.
pub trait HvModel: Send {
    fn profile(&self) -> ModelProfile;

    /// Messages exchanged before this trial's setting is chosen.
    fn communicate(&mut self, _context: &TrialContext<'_>) -> Vec<ClassicalMessage> {
        Vec::new()
    }

    /// Messages a model attempts to send after the measurement phase.
    /// Anything returned here arrives after the setting choice and is a
    /// lifecycle violation; the default honest implementation sends nothing.
    fn communicate_after_measurement(
        &mut self,
        _context: &TrialContext<'_>,
        _realized: &RealizedTrial,
    ) -> Vec<ClassicalMessage> {
        Vec::new()
    }

    /// Draw the microstate compatible with this context and setting.
    /// Setting-independent models return the same microstate for all four
    /// settings of a trial.
    fn draw_microstate(
        &self,
        context: &TrialContext<'_>,
        setting: Setting,
        rng: &mut RandomStream,
    ) -> Microstate;

    /// Probability that the queried wing's outcome is +1.
    fn outcome_probability(&self, query: &OutcomeQuery<'_>) -> Result<f64, ModelError>;

    /// Sampling rule mapping a uniform draw to an outcome. The default is
    /// the dichotomic inverse-CDF of `outcome_probability`; bounded
    /// (non-dichotomic) models override it.
    fn sample_outcome(
        &self,
        query: &OutcomeQuery<'_>,
        u: f64,
    ) -> Result<OutcomeValue, ModelError> {
        let p = self.outcome_probability(query)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(ModelError::InvalidParameter(format!(
                "outcome probability {p} outside [0, 1]"
            )));
        }
        Ok(OutcomeValue::sign(u < p))
    }

    /// Hook called once per trial with the realized record; models with
    /// memory fold it into their internal state.
    fn observe_realized(&mut self, _realized: &RealizedTrial) {}
}

/// The setting-source contract. `peek` offers the trial's eight potential
/// outcomes; honest sources ignore it and must declare `no_conspiracy`.
pub trait SettingSource: Send {
    fn no_conspiracy(&self) -> bool;

    fn choose(
        &mut self,
        trial_index: usize,
        rng: &mut RandomStream,
        peek: Option<&Octuple>,
    ) -> Setting;
}

/// Outcome of a structural profile-honesty check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HonestyReport {
    pub probes: usize,
    /// Largest |p(with remote observable) − p(without)| seen with the remote
    /// outcome absent. Must be 0 for models declaring parameter independence.
    pub max_pi_deviation: f64,
    /// Largest |p(with remote outcome) − p(without)| seen. Must be 0 for
    /// models declaring outcome independence.
    pub max_oi_deviation: f64,
    pub pi_honest: bool,
    pub oi_honest: bool,
}

/// Fuzz a model's `outcome_probability` against its declared profile.
///
/// Runs `probes` contexts; in each, compares the probability with the remote
/// observable supplied vs absent (remote outcome absent: the parameter-
/// independence form) and with the remote outcome supplied vs absent (the
/// outcome-independence form). Deviations are required to be exactly zero
/// for the corresponding declared-true assumption.
pub fn check_profile_honesty(
    model: &dyn HvModel,
    probes: usize,
    seed: u64,
) -> Result<HonestyReport, ModelError> {
    let mut rng = RandomStream::from_words(&[seed, 0x484F4E4553545921]);
    let profile = model.profile();
    let mut max_pi = 0.0f64;
    let mut max_oi = 0.0f64;

    for probe in 0..probes {
        let ctx = TrialContext::without_history(probe);
        let setting = Setting::ALL[rng.below(4)];
        let microstate = model.draw_microstate(&ctx, setting, &mut rng);
        let wing = if rng.sign() { Wing::A } else { Wing::B };
        let local = setting.observable(wing);
        let remote_wing = match wing {
            Wing::A => Wing::B,
            Wing::B => Wing::A,
        };
        let remote_obs = setting.observable(remote_wing);
        let base = OutcomeQuery {
            wing,
            microstate: &microstate,
            context: &ctx,
            local,
            remote_observable: None,
            remote_outcome: None,
        };
        let p_masked = model.outcome_probability(&base)?;

        for obs in [Observable::Unprimed, Observable::Primed] {
            let p = model.outcome_probability(&OutcomeQuery {
                remote_observable: Some(obs),
                ..base
            })?;
            max_pi = max_pi.max((p - p_masked).abs());
        }
        for outcome in [OutcomeValue::PLUS, OutcomeValue::MINUS] {
            let p = model.outcome_probability(&OutcomeQuery {
                remote_observable: Some(remote_obs),
                remote_outcome: Some(outcome),
                ..base
            })?;
            let p_no_outcome = model.outcome_probability(&OutcomeQuery {
                remote_observable: Some(remote_obs),
                remote_outcome: None,
                ..base
            })?;
            max_oi = max_oi.max((p - p_no_outcome).abs());
        }
    }

    let pi_honest = !profile.assumptions.parameter_independence || max_pi == 0.0;
    let oi_honest = !profile.assumptions.outcome_independence || max_oi == 0.0;
    Ok(HonestyReport {
        probes,
        max_pi_deviation: max_pi,
        max_oi_deviation: max_oi,
        pi_honest,
        oi_honest,
    })
}
