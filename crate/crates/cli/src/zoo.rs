//! Construct models and sources from CLI flags.

use crate::args::ModelArgs;
use crate::CliError;
use chsh_core::error::ModelError;
use chsh_core::model::{
    ClassicalMessage, HvModel, MessageSender, Microstate, ModelProfile, OutcomeQuery,
    RealizedTrial, SettingSource, TrialContext,
};
use chsh_core::models::{
    ClockedLocal, ConspiracySource, ConspiracyTarget, DeterministicLocal, MemoryLocal, MemoryRule,
    PrBox, SignalingModel, SingletModel, UniformSource,
};
use chsh_core::random::RandomStream;
use chsh_core::value::Setting;

pub const MODEL_NAMES: [&str; 7] = [
    "deterministic",
    "memory",
    "clocked",
    "singlet",
    "prbox",
    "signaling",
    "leaky",
];

pub const SOURCE_NAMES: [&str; 3] = ["uniform", "conspiracy:max", "conspiracy:min"];

/// Diagnostic model that sends a classical message after the measurement
/// phase of every trial, violating the communication lifecycle. Exists to
/// exercise the setting-leakage contract breach end to end.
struct LeakyModel;

impl HvModel for LeakyModel {
    fn profile(&self) -> ModelProfile {
        ModelProfile::LOCAL_DICHOTOMIC
    }

    fn draw_microstate(
        &self,
        _context: &TrialContext<'_>,
        _setting: Setting,
        _rng: &mut RandomStream,
    ) -> Microstate {
        Microstate::empty("leaky")
    }

    fn outcome_probability(&self, _query: &OutcomeQuery<'_>) -> Result<f64, ModelError> {
        Ok(0.5)
    }

    fn communicate_after_measurement(
        &mut self,
        _context: &TrialContext<'_>,
        realized: &RealizedTrial,
    ) -> Vec<ClassicalMessage> {
        vec![ClassicalMessage {
            sender: MessageSender::WingA,
            body: serde_json::json!({ "setting": realized.setting.index() }),
            sequence_number: 0,
        }]
    }
}

fn parse_angles(raw: &str) -> Result<[f64; 4], CliError> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::usage(format!(
            "--angles expects four comma-separated values, got {}",
            parts.len()
        )));
    }
    let mut angles = [0.0; 4];
    for (slot, part) in angles.iter_mut().zip(parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("invalid angle \"{part}\"")))?;
    }
    Ok(angles)
}

/// Build a model from flags. The seed feeds the "random" deterministic
/// strategy so sweeps vary the strategy with the cell seed.
pub fn build_model(args: &ModelArgs, seed: u64) -> Result<Box<dyn HvModel>, CliError> {
    let model: Box<dyn HvModel> = match args.model.as_str() {
        "deterministic" => Box::new(match args.strategy.as_str() {
            "plus" => DeterministicLocal::all_plus(),
            "alternating" => DeterministicLocal::parity_alternating(),
            "enumerate" => DeterministicLocal::full_enumeration(),
            "random" => DeterministicLocal::random(seed, args.strategy_period)?,
            other => {
                return Err(CliError::usage(format!(
                    "unknown strategy \"{other}\" (expected plus | alternating | enumerate | random)"
                )))
            }
        }),
        "memory" => {
            let rule = match args.memory_rule.as_str() {
                "coin" => MemoryRule::fair_coin(),
                "flip" => MemoryRule::bias_flip(args.memory_delta),
                "period2" => MemoryRule::period_two(),
                other => {
                    return Err(CliError::usage(format!(
                        "unknown memory rule \"{other}\" (expected coin | flip | period2)"
                    )))
                }
            };
            Box::new(MemoryLocal::new(rule)?)
        }
        "clocked" => Box::new(ClockedLocal::sinusoid(args.clock_period, args.clock_amplitude)?),
        "singlet" => match &args.angles {
            None => Box::new(SingletModel::chsh_optimal()),
            Some(raw) => {
                let [a, ap, b, bp] = parse_angles(raw)?;
                Box::new(SingletModel::new(a, ap, b, bp)?)
            }
        },
        "prbox" => Box::new(PrBox::new()),
        "signaling" => Box::new(SignalingModel::new(args.leak)?),
        "leaky" => Box::new(LeakyModel),
        other => {
            return Err(CliError::usage(format!(
                "unknown model \"{other}\"; valid names: {}",
                MODEL_NAMES.join(", ")
            )))
        }
    };
    Ok(model)
}

pub fn build_source(name: &str) -> Result<Box<dyn SettingSource>, CliError> {
    match name {
        "uniform" => Ok(Box::new(UniformSource::new())),
        "conspiracy:max" => Ok(Box::new(ConspiracySource::new(ConspiracyTarget::Maximize))),
        "conspiracy:min" => Ok(Box::new(ConspiracySource::new(ConspiracyTarget::Minimize))),
        other => Err(CliError::usage(format!(
            "unknown source \"{other}\"; valid names: {}",
            SOURCE_NAMES.join(", ")
        ))),
    }
}

/// Echo of the model parameters that actually apply, for the report.
pub fn model_params_json(args: &ModelArgs) -> serde_json::Value {
    match args.model.as_str() {
        "deterministic" => serde_json::json!({
            "strategy": args.strategy,
            "strategy_period": args.strategy_period,
        }),
        "memory" => serde_json::json!({
            "memory_rule": args.memory_rule,
            "memory_delta": args.memory_delta,
        }),
        "clocked" => serde_json::json!({
            "clock_period": args.clock_period,
            "clock_amplitude": args.clock_amplitude,
        }),
        "singlet" => {
            let m = SingletModel::chsh_optimal();
            let angles = match &args.angles {
                Some(raw) => raw.clone(),
                None => format!("{},{},{},{}", m.angle_a, m.angle_ap, m.angle_b, m.angle_bp),
            };
            serde_json::json!({ "angles": angles })
        }
        "signaling" => serde_json::json!({ "leak": args.leak }),
        _ => serde_json::json!({}),
    }
}

