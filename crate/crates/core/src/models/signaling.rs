//! A deliberately parameter-independence-violating model: wing A's outcome
//! bias shifts with wing B's observable choice. Wing B stays a fair coin and
//! neither wing conditions on the other's outcome.

use crate::error::ModelError;
use crate::model::{HvModel, Microstate, ModelProfile, OutcomeQuery, TrialContext};
use crate::random::RandomStream;
use crate::value::{AssumptionProfile, Observable, Setting, Wing};

#[derive(Debug, Clone, Copy)]
pub struct SignalingModel {
    leak: f64,
}

impl SignalingModel {
    /// `leak` in [0, 1]: 0 reduces to a parameter-independent fair coin,
    /// 1 makes P(A = +1) equal 1 when the remote wing measures B and 0 when
    /// it measures B'.
    pub fn new(leak: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&leak) {
            return Err(ModelError::InvalidParameter(format!(
                "leak strength {leak} outside [0, 1]"
            )));
        }
        Ok(SignalingModel { leak })
    }

    pub fn leak(&self) -> f64 {
        self.leak
    }
}

impl HvModel for SignalingModel {
    fn profile(&self) -> ModelProfile {
        ModelProfile {
            assumptions: AssumptionProfile {
                no_conspiracy: true,
                parameter_independence: false,
                outcome_independence: true,
            },
            dichotomic: true,
        }
    }

    fn draw_microstate(
        &self,
        _context: &TrialContext<'_>,
        _setting: Setting,
        _rng: &mut RandomStream,
    ) -> Microstate {
        Microstate::empty("signaling")
    }

    fn outcome_probability(&self, query: &OutcomeQuery<'_>) -> Result<f64, ModelError> {
        match query.wing {
            Wing::B => Ok(0.5),
            Wing::A => Ok(match query.remote_observable {
                Some(Observable::Unprimed) => 0.5 + self.leak / 2.0,
                Some(Observable::Primed) => 0.5 - self.leak / 2.0,
                None => 0.5,
            }),
        }
    }
}
