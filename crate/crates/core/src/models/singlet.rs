//! Singlet-statistics model: a correlation oracle reproducing
//! E(x, y) = −cos(x − y) with uniform ±1 marginals on both wings.
//!
//! This is not a state simulation. Outcomes for a setting are drawn in two
//! stages: wing B first from its (uniform) marginal, then wing A conditioned
//! on B's outcome. Parameter independence holds (each wing's marginal is 1/2
//! whatever the other wing measures); outcome independence does not.

use crate::error::ModelError;
use crate::model::{HvModel, Microstate, ModelProfile, OutcomeQuery, TrialContext};
use crate::random::RandomStream;
use crate::value::{AssumptionProfile, Observable, Setting, Wing};

#[derive(Debug, Clone, Copy)]
pub struct SingletModel {
    pub angle_a: f64,
    pub angle_ap: f64,
    pub angle_b: f64,
    pub angle_bp: f64,
}

impl SingletModel {
    pub fn new(angle_a: f64, angle_ap: f64, angle_b: f64, angle_bp: f64) -> Result<Self, ModelError> {
        for (name, v) in [
            ("angle_a", angle_a),
            ("angle_ap", angle_ap),
            ("angle_b", angle_b),
            ("angle_bp", angle_bp),
        ] {
            if !v.is_finite() {
                return Err(ModelError::InvalidParameter(format!("{name} must be finite")));
            }
        }
        Ok(SingletModel {
            angle_a,
            angle_ap,
            angle_b,
            angle_bp,
        })
    }

    /// Analyzer angles maximizing the CHSH statistic at 2√2, chosen so that
    /// ⟨AB⟩ = −1/√2 and the other three correlations are +1/√2.
    pub fn chsh_optimal() -> Self {
        SingletModel {
            angle_a: 0.0,
            angle_ap: std::f64::consts::FRAC_PI_2,
            angle_b: -std::f64::consts::FRAC_PI_4,
            angle_bp: -3.0 * std::f64::consts::FRAC_PI_4,
        }
    }

    fn angle(&self, wing: Wing, observable: Observable) -> f64 {
        match (wing, observable) {
            (Wing::A, Observable::Unprimed) => self.angle_a,
            (Wing::A, Observable::Primed) => self.angle_ap,
            (Wing::B, Observable::Unprimed) => self.angle_b,
            (Wing::B, Observable::Primed) => self.angle_bp,
        }
    }

    /// The analytic correlation for (wing-A observable, wing-B observable).
    pub fn correlation(&self, alice: Observable, bob: Observable) -> f64 {
        -(self.angle(Wing::A, alice) - self.angle(Wing::B, bob)).cos()
    }
}

impl HvModel for SingletModel {
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
        Microstate::empty("singlet")
    }

    fn outcome_probability(&self, query: &OutcomeQuery<'_>) -> Result<f64, ModelError> {
        match (query.remote_outcome, query.remote_observable) {
            // Marginal: uniform whatever the remote wing measures. Also the
            // fallback when a remote outcome arrives without its observable,
            // since the conditional is undefined without the remote setting.
            (None, _) | (Some(_), None) => Ok(0.5),
            (Some(remote), Some(remote_obs)) => {
                let remote_wing = match query.wing {
                    Wing::A => Wing::B,
                    Wing::B => Wing::A,
                };
                let own = self.angle(query.wing, query.local);
                let other = self.angle(remote_wing, remote_obs);
                let e = -(own - other).cos();
                Ok((1.0 + remote.get() * e) / 2.0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_profile_honesty;
    use crate::value::OutcomeValue;

    #[test]
    fn equal_angles_are_perfectly_anti_correlated() {
        let m = SingletModel::new(0.7, 1.0, 0.7, 2.0).unwrap();
        assert!((m.correlation(Observable::Unprimed, Observable::Unprimed) + 1.0).abs() < 1e-15);
        // Conditional: A is forced opposite to B.
        let ctx = TrialContext::without_history(0);
        let ms = Microstate::empty("singlet");
        let q = OutcomeQuery {
            wing: Wing::A,
            microstate: &ms,
            context: &ctx,
            local: Observable::Unprimed,
            remote_observable: Some(Observable::Unprimed),
            remote_outcome: Some(OutcomeValue::PLUS),
        };
        assert!(m.outcome_probability(&q).unwrap().abs() < 1e-15);
    }

    #[test]
    fn optimal_angles_hit_the_quantum_correlations() {
        let m = SingletModel::chsh_optimal();
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m.correlation(Observable::Unprimed, Observable::Unprimed) + inv).abs() < 1e-12);
        assert!((m.correlation(Observable::Unprimed, Observable::Primed) - inv).abs() < 1e-12);
        assert!((m.correlation(Observable::Primed, Observable::Unprimed) - inv).abs() < 1e-12);
        assert!((m.correlation(Observable::Primed, Observable::Primed) - inv).abs() < 1e-12);
    }

    #[test]
    fn non_finite_angles_rejected() {
        assert_eq!(
            SingletModel::new(f64::NAN, 0.0, 0.0, 0.0).unwrap_err().code(),
            "invalid-parameter"
        );
    }

    #[test]
    fn parameter_independence_is_honest_outcome_independence_is_not_claimed() {
        let m = SingletModel::chsh_optimal();
        let report = check_profile_honesty(&m, 512, 4).unwrap();
        assert!(report.pi_honest);
        assert_eq!(report.max_pi_deviation, 0.0);
        // The model really does condition on the remote outcome.
        assert!(report.max_oi_deviation > 0.1);
        assert!(report.oi_honest, "OI is declared false, so no claim is made");
    }
}
