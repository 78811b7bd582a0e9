//! Experiment runner: enforces the trial lifecycle (communication → setting
//! choice → measurement), fills the 9-column potential-outcome table, and
//! computes S-filtered and full-table correlations.

use crate::correlation::{compensated_mean, correlation, CorrelationSet};
use crate::error::RunError;
use crate::model::{HvModel, OutcomeQuery, RealizedTrial, SettingSource, TrialContext};
use crate::random::{Purpose, RandomStream};
use crate::table::{Octuple, OutcomeTable, TrialRow};
use crate::value::{OutcomeValue, Setting, Wing};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    Message,
    SettingChosen,
    MeasurementA,
    MeasurementB,
    Recorded,
}

/// One lifecycle event. Sequence numbers start at 1 within each trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialEvent {
    pub kind: EventKind,
    pub payload: String,
    pub sequence_number: u64,
}

/// The ordered event record of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialEventLog {
    pub trial_index: usize,
    pub events: Vec<TrialEvent>,
}

/// Result of checking one trial log against the lifecycle rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifecycleReport {
    pub pass: bool,
    /// First violation: (code, sequence number), when any.
    pub violation: Option<(String, u64)>,
}

impl LifecycleReport {
    fn pass() -> Self {
        LifecycleReport {
            pass: true,
            violation: None,
        }
    }

    fn fail(code: &str, seq: u64) -> Self {
        LifecycleReport {
            pass: false,
            violation: Some((code.to_string(), seq)),
        }
    }
}

/// Check a trial log: exactly one of each non-message phase, and every
/// message strictly before the setting choice.
pub fn validate_lifecycle(log: &TrialEventLog) -> LifecycleReport {
    let mut seen_setting: Option<u64> = None;
    let mut counts = [0usize; 4]; // SettingChosen, MeasurementA, MeasurementB, Recorded

    for event in &log.events {
        let slot = match event.kind {
            EventKind::Message => {
                if seen_setting.is_some() {
                    return LifecycleReport::fail("message-after-setting", event.sequence_number);
                }
                continue;
            }
            EventKind::SettingChosen => 0,
            EventKind::MeasurementA => 1,
            EventKind::MeasurementB => 2,
            EventKind::Recorded => 3,
        };
        counts[slot] += 1;
        if counts[slot] > 1 {
            return LifecycleReport::fail("duplicate-phase", event.sequence_number);
        }
        if event.kind == EventKind::SettingChosen {
            seen_setting = Some(event.sequence_number);
        }
    }

    if counts.contains(&0) {
        let last_seq = log.events.last().map_or(0, |e| e.sequence_number);
        return LifecycleReport::fail("incomplete-trial", last_seq);
    }
    LifecycleReport::pass()
}

/// Configuration of one run. The model and source are consumed: a run owns
/// their internal state for its full duration.
pub struct RunConfig {
    pub n_trials: usize,
    pub seed: u64,
    pub model: Box<dyn HvModel>,
    pub source: Box<dyn SettingSource>,
}

#[derive(Debug)]
pub struct RunOutput {
    pub table: OutcomeTable,
    pub logs: Vec<TrialEventLog>,
}

/// Execute a run. Each trial proceeds in order: communication, octuple
/// generation (a microstate and both wings' potential outcomes for each of
/// the four settings), setting choice, measurement record.
///
/// Wing B's potential outcome is always sampled before wing A's, and wing
/// A's query carries B's outcome; models declaring outcome independence
/// ignore it, violating models condition on it.
pub fn run_experiment(config: RunConfig) -> Result<RunOutput, RunError> {
    let RunConfig {
        n_trials,
        seed,
        mut model,
        mut source,
    } = config;
    if n_trials == 0 {
        return Err(RunError::InvalidParameter(
            "n_trials must be at least 1".into(),
        ));
    }

    let dichotomic = model.profile().dichotomic;
    let mut history: Vec<RealizedTrial> = Vec::with_capacity(n_trials);
    let mut rows: Vec<TrialRow> = Vec::with_capacity(n_trials);
    let mut logs: Vec<TrialEventLog> = Vec::with_capacity(n_trials);

    for trial in 0..n_trials {
        let mut events: Vec<TrialEvent> = Vec::new();
        let mut seq = 0u64;
        let mut push = |events: &mut Vec<TrialEvent>, kind, payload: String| {
            seq += 1;
            events.push(TrialEvent {
                kind,
                payload,
                sequence_number: seq,
            });
        };

        // Communication phase: everything here precedes the setting choice.
        let messages = {
            let ctx = TrialContext {
                time_index: trial,
                history: &history,
                messages: &[],
            };
            model.communicate(&ctx)
        };
        for m in &messages {
            push(&mut events, EventKind::Message, format!("{:?}", m.sender));
        }

        let ctx = TrialContext {
            time_index: trial,
            history: &history,
            messages: &messages,
        };

        // Potential outcomes for all four settings.
        let mut ms_rng = RandomStream::for_trial(seed, trial as u64, Purpose::Microstate);
        let mut a_rng = RandomStream::for_trial(seed, trial as u64, Purpose::OutcomeA);
        let mut b_rng = RandomStream::for_trial(seed, trial as u64, Purpose::OutcomeB);

        let mut pairs = [(OutcomeValue::PLUS, OutcomeValue::PLUS); 4];
        for s in Setting::ALL {
            let microstate = model.draw_microstate(&ctx, s, &mut ms_rng);

            let b_query = OutcomeQuery {
                wing: Wing::B,
                microstate: &microstate,
                context: &ctx,
                local: s.bob(),
                remote_observable: Some(s.alice()),
                remote_outcome: None,
            };
            let b = model.sample_outcome(&b_query, b_rng.uniform())?;

            let a_query = OutcomeQuery {
                wing: Wing::A,
                microstate: &microstate,
                context: &ctx,
                local: s.alice(),
                remote_observable: Some(s.bob()),
                remote_outcome: Some(b),
            };
            let a = model.sample_outcome(&a_query, a_rng.uniform())?;

            for v in [a, b] {
                if dichotomic && !v.is_dichotomic() {
                    return Err(RunError::ContractBreach {
                        trial,
                        value: v.get(),
                    });
                }
            }
            pairs[s.ordinal()] = (a, b);
        }
        let octuple = Octuple {
            a1: pairs[0].0,
            b1: pairs[0].1,
            a2: pairs[1].0,
            bp2: pairs[1].1,
            ap3: pairs[2].0,
            b3: pairs[2].1,
            ap4: pairs[3].0,
            bp4: pairs[3].1,
        };

        // Setting choice. Honest sources ignore the peek.
        let mut s_rng = RandomStream::for_trial(seed, trial as u64, Purpose::Setting);
        let setting = source.choose(trial, &mut s_rng, Some(&octuple));
        push(&mut events, EventKind::SettingChosen, setting.to_string());

        // Measurement: read off the realized pair.
        let (out_a, out_b) = octuple.pair(setting);
        push(&mut events, EventKind::MeasurementA, out_a.to_string());
        push(&mut events, EventKind::MeasurementB, out_b.to_string());
        push(&mut events, EventKind::Recorded, String::new());

        let realized = RealizedTrial {
            setting,
            outcome_a: out_a,
            outcome_b: out_b,
        };

        // Any message the model tries to send now arrives after the setting
        // choice: a lifecycle breach.
        let late = model.communicate_after_measurement(&ctx, &realized);
        if !late.is_empty() {
            for m in &late {
                push(&mut events, EventKind::Message, format!("{:?}", m.sender));
            }
            return Err(RunError::SettingLeakage { trial });
        }

        history.push(realized);
        model.observe_realized(&realized);
        rows.push(TrialRow {
            outcomes: octuple,
            setting,
            trial_index: trial,
        });
        logs.push(TrialEventLog {
            trial_index: trial,
            events,
        });
    }

    let table = OutcomeTable::new(rows)?;
    Ok(RunOutput { table, logs })
}

/// Correlations restricted to rows realized with the corresponding setting.
pub fn filtered_correlations(table: &OutcomeTable) -> Result<CorrelationSet, RunError> {
    let mut per_setting: [Vec<(OutcomeValue, OutcomeValue)>; 4] = Default::default();
    for row in table.rows() {
        per_setting[row.setting.ordinal()].push(row.outcomes.pair(row.setting));
    }
    for s in Setting::ALL {
        if per_setting[s.ordinal()].is_empty() {
            return Err(RunError::MissingSetting(s));
        }
    }
    Ok(CorrelationSet {
        c_ab: correlation(&per_setting[0])?,
        c_abp: correlation(&per_setting[1])?,
        c_apb: correlation(&per_setting[2])?,
        c_apbp: correlation(&per_setting[3])?,
    })
}

/// The same four column-pair correlations averaged over every row of the
/// table, realized or not.
pub fn full_table_correlations(table: &OutcomeTable) -> Result<CorrelationSet, RunError> {
    if table.is_empty() {
        return Err(RunError::EmptySample);
    }
    let mean_over = |setting: Setting| {
        compensated_mean(table.rows().iter().map(move |r| r.outcomes.product(setting)))
    };
    Ok(CorrelationSet {
        c_ab: mean_over(Setting::S1)?,
        c_abp: mean_over(Setting::S2)?,
        c_apb: mean_over(Setting::S3)?,
        c_apbp: mean_over(Setting::S4)?,
    })
}
