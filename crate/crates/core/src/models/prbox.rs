//! The no-signaling extremal box: uniform ±1 marginals on both wings with
//! the outcome product pinned per setting: +1 except when both wings
//! measure their unprimed observable, where it is −1. Reaches CHSH = 4.

use crate::error::ModelError;
use crate::model::{HvModel, Microstate, ModelProfile, OutcomeQuery, TrialContext};
use crate::random::RandomStream;
use crate::value::{AssumptionProfile, Observable, Setting, Wing};

#[derive(Debug, Clone, Copy, Default)]
pub struct PrBox;

impl PrBox {
    pub fn new() -> Self {
        PrBox
    }

    /// The pinned outcome product for an observable pair.
    pub fn product_sign(alice: Observable, bob: Observable) -> f64 {
        if alice == Observable::Unprimed && bob == Observable::Unprimed {
            -1.0
        } else {
            1.0
        }
    }
}

impl HvModel for PrBox {
    fn profile(&self) -> ModelProfile {
        ModelProfile {
            assumptions: AssumptionProfile {
                no_conspiracy: true,
                parameter_independence: true,
                outcome_independence: false,
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
        Microstate::empty("prbox")
    }

    fn outcome_probability(&self, query: &OutcomeQuery<'_>) -> Result<f64, ModelError> {
        match (query.remote_outcome, query.remote_observable) {
            (None, _) | (Some(_), None) => Ok(0.5),
            (Some(remote), Some(remote_obs)) => {
                let (alice_obs, bob_obs) = match query.wing {
                    Wing::A => (query.local, remote_obs),
                    Wing::B => (remote_obs, query.local),
                };
                let required = Self::product_sign(alice_obs, bob_obs) * remote.get();
                Ok(if required > 0.0 { 1.0 } else { 0.0 })
            }
        }
    }
}
