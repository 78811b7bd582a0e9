//! Time-dependent local model: synchronized periodic clocks modulate each
//! wing's outcome bias. Microstates are setting-dependent (the per-wing bias
//! depends on which observable that wing measures) but strictly local.

use crate::error::ModelError;
use crate::model::{HvModel, Microstate, ModelProfile, OutcomeQuery, TrialContext};
use crate::random::RandomStream;
use crate::value::{Observable, Setting, Wing};
use std::borrow::Cow;

type PhaseFn = Box<dyn Fn(usize, Observable, Option<Observable>) -> f64 + Send + Sync>;

/// Clock-modulated local model. Each wing has a phase function
/// `(clock tick, own observable, remote observable) -> P(+1)`; the remote
/// argument exists only so that a non-local phase is expressible, and any
/// dependence on it is rejected at construction.
pub struct ClockedLocal {
    period: usize,
    phase_a: PhaseFn,
    phase_b: PhaseFn,
}

impl std::fmt::Debug for ClockedLocal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClockedLocal").field("period", &self.period).finish()
    }
}

impl ClockedLocal {
    pub fn new(
        period: usize,
        phase_a: impl Fn(usize, Observable, Option<Observable>) -> f64 + Send + Sync + 'static,
        phase_b: impl Fn(usize, Observable, Option<Observable>) -> f64 + Send + Sync + 'static,
    ) -> Result<Self, ModelError> {
        if period == 0 {
            return Err(ModelError::InvalidParameter(
                "clock period must be at least 1".into(),
            ));
        }
        let model = ClockedLocal {
            period,
            phase_a: Box::new(phase_a),
            phase_b: Box::new(phase_b),
        };
        model.probe_phases()?;
        Ok(model)
    }

    /// Constant phases: reduces to the stochastic memoryless model.
    pub fn constant(bias_a: f64, bias_b: f64) -> Result<Self, ModelError> {
        ClockedLocal::new(1, move |_, _, _| bias_a, move |_, _, _| bias_b)
    }

    /// Sinusoidal clock modulating wing A's outcome bias by ±amplitude
    /// around 1/2, with a phase offset between the primed and unprimed
    /// observables. Wing B stays an unbiased coin; the time dependence
    /// lives in wing A's device.
    pub fn sinusoid(period: usize, amplitude: f64) -> Result<Self, ModelError> {
        if !(0.0..=0.5).contains(&amplitude) {
            return Err(ModelError::InvalidParameter(format!(
                "clock amplitude {amplitude} outside [0, 0.5]"
            )));
        }
        let tick = move |t: usize| t as f64 * std::f64::consts::TAU / period as f64;
        let offset = |obs: Observable| match obs {
            Observable::Unprimed => 0.0,
            Observable::Primed => std::f64::consts::FRAC_PI_3,
        };
        ClockedLocal::new(
            period,
            move |t, obs, _| 0.5 + amplitude * (tick(t) + offset(obs)).sin(),
            move |_, _, _| 0.5,
        )
    }

    /// Deterministic period-2 clock: all outcomes +1 on even ticks, −1 on
    /// odd ticks. Hand-enumerable.
    pub fn period_two_deterministic() -> Self {
        ClockedLocal::new(
            2,
            |t, _, _| if t == 0 { 1.0 } else { 0.0 },
            |t, _, _| if t == 0 { 1.0 } else { 0.0 },
        )
        .expect("deterministic clock is valid")
    }

    fn probe_phases(&self) -> Result<(), ModelError> {
        for t in 0..self.period {
            for (name, phase) in [("A", &self.phase_a), ("B", &self.phase_b)] {
                for local in [Observable::Unprimed, Observable::Primed] {
                    let p0 = phase(t, local, None);
                    if !(0.0..=1.0).contains(&p0) {
                        return Err(ModelError::InvalidParameter(format!(
                            "wing-{name} phase value {p0} outside [0, 1]"
                        )));
                    }
                    for remote in [Some(Observable::Unprimed), Some(Observable::Primed)] {
                        if phase(t, local, remote) != p0 {
                            return Err(ModelError::LocalityBreach(format!(
                                "wing-{name} phase depends on the remote observable"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl HvModel for ClockedLocal {
    fn profile(&self) -> ModelProfile {
        ModelProfile::LOCAL_DICHOTOMIC
    }

    fn draw_microstate(
        &self,
        context: &TrialContext<'_>,
        setting: Setting,
        _rng: &mut RandomStream,
    ) -> Microstate {
        let tick = context.time_index % self.period;
        let bias_a = (self.phase_a)(tick, setting.alice(), Some(setting.bob()));
        let bias_b = (self.phase_b)(tick, setting.bob(), Some(setting.alice()));
        Microstate {
            payload: serde_json::json!([bias_a, bias_b]),
            label: Cow::Borrowed("clock"),
        }
    }

    fn outcome_probability(&self, query: &OutcomeQuery<'_>) -> Result<f64, ModelError> {
        let slot = match query.wing {
            Wing::A => 0,
            Wing::B => 1,
        };
        query.microstate.payload[slot]
            .as_f64()
            .ok_or_else(|| ModelError::InvalidParameter("clock microstate lost its biases".into()))
    }
}
