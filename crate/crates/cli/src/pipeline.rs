//! The three subcommands: run, prove, sweep.

use crate::args::{ProveArgs, RunArgs, SweepArgs};
use crate::report::{
    AssumptionTests, ConfigEcho, CorrelationsSection, EmpiricalProfile, JointSection,
    LifecycleSummary, ProfileComparison, ProveReport, ReorderSection, RunReport, SweepCell,
    SweepReport, SweepSummary, TolerancesSection, SCHEMA,
};
use crate::zoo::{build_model, build_source, model_params_json};
use crate::CliError;
use chsh_core::chain::verify_chain;
use chsh_core::correlation::chsh_statistic;
use chsh_core::csv::{joint_to_csv, table_from_csv, table_to_csv};
use chsh_core::error::ReorderError;
use chsh_core::reorder::{replay, JointTable, ReorderAudit, ReorderStep};
use chsh_core::run::{
    filtered_correlations, full_table_correlations, run_experiment, validate_lifecycle, RunConfig,
    RunOutput,
};
use chsh_core::stats::{
    chsh_tolerance, conspiracy_test, multiset_count_tolerance, oi_empirical_test,
    pi_empirical_test,
};
use chsh_core::table::OutcomeTable;
use rayon::prelude::*;
use std::io::Write;

const TOLERANCE_NOTE: &str =
    "tolerances are artifact choices: Hoeffding bounds at the stated alpha, union-bounded \
     across the four correlations (alpha/4) and the four matching steps (alpha/4)";

fn write_output(path: &Option<std::path::PathBuf>, json: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, json)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(json.as_bytes())
                .and_then(|_| stdout.write_all(b"\n"))
                .map_err(|e| CliError::usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map_err(|e| CliError::usage(format!("cannot serialize report: {e}")))
}

fn step_name(step: ReorderStep) -> String {
    serde_json::to_value(step)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_else(|| format!("{step:?}"))
}

fn reorder_section(
    audits: Vec<ReorderAudit>,
    result: &Result<JointTable, ReorderError>,
) -> ReorderSection {
    match result {
        Ok(_) => ReorderSection {
            status: "success".into(),
            failing_step: None,
            detail: None,
            audits,
        },
        Err(e) => {
            let failing_step = match e {
                ReorderError::PiMismatch { step, .. } => Some(step_name(*step)),
                ReorderError::OiMismatch { .. } => Some(step_name(ReorderStep::OiAp3Ap4)),
                _ => None,
            };
            ReorderSection {
                status: e.code().into(),
                failing_step,
                detail: Some(e.to_string()),
                audits,
            }
        }
    }
}

fn joint_section(joint: &JointTable) -> JointSection {
    JointSection {
        chsh: joint.chsh(),
        chain: verify_chain(joint),
    }
}

pub fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let model = build_model(&args.model, args.seed)?;
    let source = build_source(&args.source)?;
    let declared = model.profile();

    let RunOutput { table, logs } = run_experiment(RunConfig {
        n_trials: args.trials,
        seed: args.seed,
        model,
        source,
    })?;

    let mut violations = Vec::new();
    for log in &logs {
        let report = validate_lifecycle(log);
        if let Some((code, seq)) = report.violation {
            violations.push((log.trial_index, code, seq));
        }
    }
    let lifecycle = LifecycleSummary {
        all_pass: violations.is_empty(),
        violations,
    };

    let filtered = filtered_correlations(&table)?;
    let full = full_table_correlations(&table)?;
    let counts = table.setting_counts();
    let chsh_tol = chsh_tolerance(counts, args.alpha)?;
    let reorder_tol = multiset_count_tolerance(table.len(), args.alpha / 4.0)?;

    let conspiracy = conspiracy_test(&table, args.iterations, args.alpha, args.seed)?;
    let pi = pi_empirical_test(&table, args.alpha / 3.0)?;
    // The OI test belongs on the table with the PI steps already applied
    // (B'4 matched to B'2); on raw tables it conditions on B'2 alone, which
    // is blind to value-coupled violations. Fall back to raw only when the
    // PI steps themselves fail.
    let (_, pi_table) = chsh_core::reorder::apply_pi_steps(&table, reorder_tol);
    let (oi_input, oi_note_base) = match &pi_table {
        Ok(t) => (t, None),
        Err(e) => (
            &table,
            Some(format!("PI steps failed ({e}); OI tested on the raw table")),
        ),
    };
    let (oi, oi_note) = match oi_empirical_test(oi_input, args.alpha / 2.0) {
        Ok(report) => (Some(report), oi_note_base),
        Err(e) => (None, Some(e.to_string())),
    };

    let empirical = EmpiricalProfile {
        no_conspiracy: !conspiracy.rejected,
        parameter_independence: pi.all_pass(),
        outcome_independence: oi.as_ref().map(|o| o.all_pass()),
    };
    let agree = empirical.no_conspiracy == declared.assumptions.no_conspiracy
        && empirical.parameter_independence == declared.assumptions.parameter_independence
        && empirical
            .outcome_independence
            .is_none_or(|oi| oi == declared.assumptions.outcome_independence);

    let (audits, result) = replay(&table, reorder_tol);
    let joint = result.as_ref().ok().map(joint_section);

    eprintln!(
        "model={} source={} n={} seed={}",
        args.model.model, args.source, args.trials, args.seed
    );
    eprintln!(
        "filtered chsh = {:.4} (allowance 2 + {:.4}), full chsh = {:.4}",
        chsh_statistic(&filtered),
        chsh_tol,
        chsh_statistic(&full)
    );
    eprintln!(
        "conspiracy p = {:.4}{}; PI {}; OI {}",
        conspiracy.p_value,
        if conspiracy.rejected { " (REJECTED)" } else { "" },
        if empirical.parameter_independence { "pass" } else { "FAIL" },
        match empirical.outcome_independence {
            Some(true) => "pass".to_string(),
            Some(false) => "FAIL".to_string(),
            None => format!("skipped ({})", oi_note.as_deref().unwrap_or("")),
        }
    );
    match &result {
        Ok(joint_table) => eprintln!(
            "replay: success (tolerance {reorder_tol}); joint chsh = {:.4}",
            joint_table.chsh()
        ),
        Err(e) => eprintln!("replay: {e}"),
    }

    if let Some(path) = &args.table {
        std::fs::write(path, table_to_csv(&table))
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if let (Some(path), Ok(joint_table)) = (&args.joint, &result) {
        std::fs::write(path, joint_to_csv(joint_table))
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let report = RunReport {
        schema: SCHEMA.into(),
        command: "run".into(),
        timestamp_unix: crate::report::timestamp(args.no_timestamp),
        config: ConfigEcho {
            model: args.model.model.clone(),
            params: model_params_json(&args.model),
            source: args.source.clone(),
            trials: args.trials,
            seed: args.seed,
            alpha: args.alpha,
            iterations: args.iterations,
        },
        lifecycle,
        correlations: CorrelationsSection {
            filtered,
            full,
            chsh_filtered: chsh_statistic(&filtered),
            chsh_full: chsh_statistic(&full),
        },
        tolerances: TolerancesSection {
            per_setting_counts: counts,
            chsh: chsh_tol,
            reorder: reorder_tol,
            note: TOLERANCE_NOTE.into(),
        },
        assumption_tests: AssumptionTests {
            conspiracy,
            pi,
            oi,
            oi_note,
        },
        profile: ProfileComparison {
            declared,
            empirical,
            agree,
        },
        reorder: reorder_section(audits, &result),
        joint,
    };

    write_output(&args.out, &to_pretty_json(&report)?)
}

pub fn cmd_prove(args: ProveArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.table)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", args.table.display())))?;
    let table: OutcomeTable = table_from_csv(&text)?;
    if !table.is_dichotomic() {
        return Err(CliError::usage(
            "requires-dichotomic: the proof replay accepts dichotomic tables only",
        ));
    }
    if table.is_empty() {
        return Err(CliError::usage("empty-sample: table has no rows"));
    }

    let tolerance = match args.tolerance {
        Some(t) => t,
        None => multiset_count_tolerance(table.len(), args.alpha / 4.0)?,
    };
    let full = full_table_correlations(&table)?;
    let (audits, result) = replay(&table, tolerance);
    let joint = result.as_ref().ok().map(joint_section);

    match &result {
        Ok(joint_table) => eprintln!(
            "replay: success (tolerance {tolerance}); joint chsh = {:.4}",
            joint_table.chsh()
        ),
        Err(e) => eprintln!("replay: {e}"),
    }

    if let (Some(path), Ok(joint_table)) = (&args.joint, &result) {
        std::fs::write(path, joint_to_csv(joint_table))
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let report = ProveReport {
        schema: SCHEMA.into(),
        command: "prove".into(),
        timestamp_unix: crate::report::timestamp(args.no_timestamp),
        table_path: args.table.display().to_string(),
        trials: table.len(),
        tolerance,
        full_correlations: full,
        chsh_full: chsh_statistic(&full),
        reorder: reorder_section(audits, &result),
        joint,
    };

    write_output(&args.out, &to_pretty_json(&report)?)
}

fn parse_trials_list(raw: &str) -> Result<Vec<usize>, CliError> {
    let mut list = Vec::new();
    for part in raw.split(',') {
        let n: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("invalid trial count \"{part}\"")))?;
        if n == 0 {
            return Err(CliError::usage("invalid-parameter: trial count 0"));
        }
        list.push(n);
    }
    if list.len() < 2 {
        return Err(CliError::usage(
            "need >= 2 trial counts in --trials-list",
        ));
    }
    Ok(list)
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("CHSH_FORGE_THREADS") {
        let n: usize = raw.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::usage(format!(
                "CHSH_FORGE_THREADS must be a positive integer, got \"{raw}\""
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::usage(format!("cannot build thread pool: {e}")))
}

pub fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let trials_list = parse_trials_list(&args.trials_list)?;
    if args.seeds == 0 {
        return Err(CliError::usage("--seeds must be at least 1"));
    }
    // Validate names once up front so errors surface before any work runs.
    build_model(&args.model, args.seed)?;
    build_source(&args.source)?;

    let cell_grid: Vec<(usize, u64)> = trials_list
        .iter()
        .flat_map(|&n| (0..args.seeds).map(move |k| (n, args.seed.wrapping_add(k))))
        .collect();

    let pool = thread_pool()?;
    let cells: Vec<SweepCell> = pool.install(|| {
        cell_grid
            .par_iter()
            .map(|&(n, seed)| -> Result<SweepCell, CliError> {
                let model = build_model(&args.model, seed)?;
                let source = build_source(&args.source)?;
                let out = run_experiment(RunConfig {
                    n_trials: n,
                    seed,
                    model,
                    source,
                })?;
                let filtered = filtered_correlations(&out.table)?;
                let full = full_table_correlations(&out.table)?;
                let tol = chsh_tolerance(out.table.setting_counts(), args.alpha)?;
                let reorder_tol = multiset_count_tolerance(n, args.alpha / 4.0)?;
                let (_, result) = replay(&out.table, reorder_tol);
                Ok(SweepCell {
                    trials: n,
                    seed,
                    chsh_filtered: chsh_statistic(&filtered),
                    chsh_full: chsh_statistic(&full),
                    chsh_tolerance: tol,
                    reorder_status: match &result {
                        Ok(_) => "success".into(),
                        Err(e) => e.code().into(),
                    },
                    joint_chsh: result.ok().map(|j| j.chsh()),
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    let summary: Vec<SweepSummary> = trials_list
        .iter()
        .map(|&n| {
            let group: Vec<&SweepCell> = cells.iter().filter(|c| c.trials == n).collect();
            let max = group.iter().map(|c| c.chsh_filtered).fold(0.0, f64::max);
            let mean =
                group.iter().map(|c| c.chsh_filtered).sum::<f64>() / group.len() as f64;
            let tol = group.first().map_or(0.0, |c| c.chsh_tolerance);
            SweepSummary {
                trials: n,
                seeds: args.seeds,
                max_chsh_filtered: max,
                mean_chsh_filtered: mean,
                max_excess_over_two: (max - 2.0).max(0.0),
                chsh_tolerance: tol,
                within_bound: group
                    .iter()
                    .filter(|c| c.chsh_filtered <= 2.0 + c.chsh_tolerance)
                    .count() as u64,
                replay_successes: group
                    .iter()
                    .filter(|c| c.reorder_status == "success")
                    .count() as u64,
            }
        })
        .collect();

    for s in &summary {
        eprintln!(
            "n={}: max chsh = {:.4} (excess {:.4}, allowance {:.4}), {}/{} within bound, {}/{} replays",
            s.trials,
            s.max_chsh_filtered,
            s.max_excess_over_two,
            s.chsh_tolerance,
            s.within_bound,
            args.seeds,
            s.replay_successes,
            args.seeds
        );
    }

    let report = SweepReport {
        schema: SCHEMA.into(),
        command: "sweep".into(),
        timestamp_unix: crate::report::timestamp(args.no_timestamp),
        config: ConfigEcho {
            model: args.model.model.clone(),
            params: model_params_json(&args.model),
            source: args.source.clone(),
            trials: 0,
            seed: args.seed,
            alpha: args.alpha,
            iterations: 0,
        },
        trials_list,
        cells,
        summary,
    };

    write_output(&args.out, &to_pretty_json(&report)?)
}
