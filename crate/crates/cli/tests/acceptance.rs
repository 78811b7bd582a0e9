//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Criteria:
//!  1. joint-table CHSH bound, fuzzed
//!  2. finite-n CHSH bound for the four local model families
//!  3. proof replay succeeds on local models with exact audit preservation
//!  4. quantum violation reproduced by the singlet model
//!  5. extremal no-signaling box
//!  6. conspiracy demonstration
//!  7. bound chain verifier
//!  8. tiny-n exhaustive oracle equivalence
//!  9. lifecycle enforcement
//! 10. statistical calibration

use chsh_core::chain::verify_chain;
use chsh_core::correlation::chsh_statistic;
use chsh_core::error::ReorderError;
use chsh_core::model::HvModel;
use chsh_core::models::{
    ClockedLocal, ConspiracySource, ConspiracyTarget, DeterministicLocal, MemoryLocal, MemoryRule,
    PrBox, SingletModel, UniformSource,
};
use chsh_core::random::RandomStream;
use chsh_core::reorder::{
    derive_joint, match_oi, match_pair_pi, JointRow, JointTable, PiStep, ReorderStep,
};
use chsh_core::run::{
    filtered_correlations, full_table_correlations, run_experiment, validate_lifecycle, RunConfig,
};
use chsh_core::stats::{
    chsh_tolerance, conspiracy_test, hoeffding_tolerance, multiset_count_tolerance,
    multiset_equality_test, oi_empirical_test, pi_empirical_test,
};
use chsh_core::table::{Octuple, OutcomeTable, TrialRow};
use chsh_core::value::{OutcomeValue, Setting};
use rayon::prelude::*;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

const ALPHA: f64 = 0.01;
const LOCAL_N: usize = 100_000;
const SEEDS_PER_FAMILY: u64 = 50;

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

// ───────────────────────── shared local-model runs ─────────────────────────

struct RunSummary {
    family: &'static str,
    seed: u64,
    chsh_filtered: f64,
    bound: f64,
    replay_ok: bool,
    failing_step: Option<String>,
    max_audit_drift: f64,
    joint_chsh: Option<f64>,
    chain_pass: Option<bool>,
}

fn build_family(family: &'static str, seed: u64) -> Box<dyn HvModel> {
    match family {
        "deterministic" => Box::new(DeterministicLocal::random(seed, 16).unwrap()),
        "stochastic" => Box::new(MemoryLocal::new(MemoryRule::fair_coin()).unwrap()),
        "memory" => Box::new(MemoryLocal::new(MemoryRule::bias_flip(0.3)).unwrap()),
        "clocked" => Box::new(ClockedLocal::sinusoid(7, 0.3).unwrap()),
        other => panic!("unknown family {other}"),
    }
}

fn local_runs() -> &'static (Vec<RunSummary>, Duration) {
    static RUNS: OnceLock<(Vec<RunSummary>, Duration)> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let families = ["deterministic", "stochastic", "memory", "clocked"];
        let cells: Vec<(&'static str, u64)> = families
            .iter()
            .flat_map(|&f| (0..SEEDS_PER_FAMILY).map(move |s| (f, s)))
            .collect();
        let tolerance = multiset_count_tolerance(LOCAL_N, ALPHA / 4.0).unwrap();

        let summaries = cells
            .par_iter()
            .map(|&(family, seed)| {
                let out = run_experiment(RunConfig {
                    n_trials: LOCAL_N,
                    seed: seed.wrapping_mul(0x9E37_79B9).wrapping_add(family.len() as u64),
                    model: build_family(family, seed),
                    source: Box::new(UniformSource::new()),
                })
                .unwrap();
                let filtered = filtered_correlations(&out.table).unwrap();
                let bound = 2.0 + chsh_tolerance(out.table.setting_counts(), ALPHA).unwrap();

                let (audits, result) = chsh_core::reorder::replay(&out.table, tolerance);
                let max_audit_drift = audits
                    .iter()
                    .map(|a| a.correlations_before.max_abs_diff(&a.correlations_after))
                    .fold(0.0, f64::max);
                let (replay_ok, failing_step, joint_chsh, chain_pass) = match &result {
                    Ok(joint) => (
                        true,
                        None,
                        Some(joint.chsh()),
                        Some(verify_chain(joint).pass),
                    ),
                    Err(e) => (false, Some(e.code().to_string()), None, None),
                };
                RunSummary {
                    family,
                    seed,
                    chsh_filtered: chsh_statistic(&filtered),
                    bound,
                    replay_ok,
                    failing_step,
                    max_audit_drift,
                    joint_chsh,
                    chain_pass,
                }
            })
            .collect();
        (summaries, start.elapsed())
    })
}

fn random_joint_table(stream: &mut RandomStream, max_n: usize) -> JointTable {
    let n = 1 + stream.below(max_n);
    let flavor = stream.below(3);
    // Per-table random biases exercise more than fair coins.
    let biases: [f64; 4] = std::array::from_fn(|_| 0.1 + 0.8 * stream.uniform());
    // How often a row copies one sign across all four columns; high values
    // push the statistic toward the boundary at 2.
    let copy_rate = 0.5 + 0.5 * stream.uniform();
    JointTable::new(
        (0..n)
            .map(|_| match flavor {
                0 => {
                    let mut v = |i: usize| OutcomeValue::sign(stream.uniform() < biases[i]);
                    JointRow {
                        a: v(0),
                        b: v(1),
                        bp: v(2),
                        ap: v(3),
                    }
                }
                1 => {
                    // Strongly correlated rows.
                    let shared = OutcomeValue::sign(stream.sign());
                    let mut v = |i: usize| {
                        if stream.uniform() < copy_rate {
                            shared
                        } else {
                            OutcomeValue::sign(stream.uniform() < biases[i])
                        }
                    };
                    JointRow {
                        a: v(0),
                        b: v(1),
                        bp: v(2),
                        ap: v(3),
                    }
                }
                _ => {
                    // Deterministic strategy rows: each row is one of the 16
                    // sign assignments, weighted toward a per-table favorite.
                    let favorite = stream.below(16);
                    let bits = if stream.uniform() < copy_rate {
                        favorite
                    } else {
                        stream.below(16)
                    };
                    let v = |bit: usize| OutcomeValue::sign(bits >> bit & 1 == 1);
                    JointRow {
                        a: v(0),
                        b: v(1),
                        bp: v(2),
                        ap: v(3),
                    }
                }
            })
            .collect(),
    )
}

// ───────────────────────────── criteria 1..10 ─────────────────────────────

#[test]
fn criterion_01_joint_table_bound() {
    let start = Instant::now();
    let mut stream = RandomStream::from_words(&[0xC1]);
    let mut max_seen = 0.0f64;
    let mut exceptions = 0usize;
    for _ in 0..1000 {
        let joint = random_joint_table(&mut stream, 10_000);
        let chsh = joint.chsh();
        max_seen = max_seen.max(chsh);
        if chsh > 2.0 + 1e-12 {
            exceptions += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = exceptions == 0 && elapsed < Duration::from_secs(10);
    println!(
        "criterion 1: {}: joint-table CHSH <= 2 + 1e-12 on 1000 fuzzed tables \
         (max {max_seen:.12}, {exceptions} exceptions, {elapsed:.2?})",
        verdict(pass)
    );
    assert_eq!(exceptions, 0, "joint-table bound violated (max {max_seen})");
    assert!(
        elapsed < Duration::from_secs(10),
        "criterion 1 exceeded its 10 s budget: {elapsed:?}"
    );
}

#[test]
fn criterion_02_local_model_finite_n_bound() {
    let (runs, elapsed) = local_runs();
    let exceed: Vec<&RunSummary> = runs
        .iter()
        .filter(|r| r.chsh_filtered > r.bound)
        .collect();
    let budget = Duration::from_secs(120);
    let pass = exceed.len() <= 2 && *elapsed < budget;
    println!(
        "criterion 2: {}: filtered CHSH <= 2 + tolerance on {} runs across 4 families \
         ({} exceedances, allowance 2; runs took {elapsed:.2?})",
        verdict(pass),
        runs.len(),
        exceed.len()
    );
    for r in &exceed {
        println!(
            "  exceedance: family={} seed={} chsh={:.4} bound={:.4}",
            r.family, r.seed, r.chsh_filtered, r.bound
        );
    }
    assert!(exceed.len() <= 2, "too many bound exceedances");
    assert!(*elapsed < budget, "criterion 2 exceeded its 2 min budget: {elapsed:?}");
}

#[test]
fn criterion_03_proof_replay_on_local_models() {
    let (runs, _) = local_runs();
    let successes = runs.iter().filter(|r| r.replay_ok).count();
    let required = (runs.len() * 98).div_ceil(100);
    let max_drift = runs.iter().map(|r| r.max_audit_drift).fold(0.0, f64::max);
    let worst_joint = runs
        .iter()
        .filter_map(|r| r.joint_chsh)
        .fold(0.0, f64::max);
    let joint_ok = runs.iter().all(|r| r.joint_chsh.is_none_or(|c| c <= 2.0));
    let pass = successes >= required && max_drift <= 1e-12 && joint_ok;
    println!(
        "criterion 3: {}: replay succeeded on {successes}/{} local runs (need {required}), \
         max audit drift {max_drift:.2e}, max joint CHSH {worst_joint:.6}",
        verdict(pass),
        runs.len()
    );
    for r in runs.iter().filter(|r| !r.replay_ok) {
        println!(
            "  replay failure: family={} seed={} step={:?}",
            r.family, r.seed, r.failing_step
        );
    }
    assert!(successes >= required);
    assert!(max_drift <= 1e-12, "audit correlation drift {max_drift}");
    assert!(joint_ok, "a joint table broke the algebraic bound");
}

#[test]
fn criterion_04_singlet_violation() {
    let n = 100_000;
    let seeds = 20u64;
    let tolerance = multiset_count_tolerance(n, ALPHA / 4.0).unwrap();
    let two_sqrt2 = 2.0 * std::f64::consts::SQRT_2;

    let results: Vec<(f64, bool, bool)> = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let out = run_experiment(RunConfig {
                n_trials: n,
                seed: 0x51A6 + seed,
                model: Box::new(SingletModel::chsh_optimal()),
                source: Box::new(UniformSource::new()),
            })
            .unwrap();
            let chsh = chsh_statistic(&filtered_correlations(&out.table).unwrap());
            let oi_mismatch = matches!(
                derive_joint(&out.table, tolerance),
                Err(ReorderError::OiMismatch { .. })
            );
            let pi_pass = pi_empirical_test(&out.table, ALPHA / 3.0).unwrap().all_pass();
            (chsh, oi_mismatch, pi_pass)
        })
        .collect();

    let mean: f64 = results.iter().map(|r| r.0).sum::<f64>() / seeds as f64;
    let all_oi_mismatch = results.iter().all(|r| r.1);
    let all_pi_pass = results.iter().all(|r| r.2);
    let pass = (mean - two_sqrt2).abs() <= 0.03 && all_oi_mismatch && all_pi_pass;
    println!(
        "criterion 4: {}: singlet mean filtered CHSH {mean:.4} (target {two_sqrt2:.4} ± 0.03), \
         oi-mismatch on all runs: {all_oi_mismatch}, PI passes: {all_pi_pass}",
        verdict(pass)
    );
    assert!((mean - two_sqrt2).abs() <= 0.03, "mean {mean}");
    assert!(all_oi_mismatch);
    assert!(all_pi_pass);
}

#[test]
fn criterion_05_pr_box_extremal() {
    let n = 10_000;
    let tolerance = multiset_count_tolerance(n, ALPHA / 4.0).unwrap();
    let mut worst_gap = 0.0f64;
    let mut all_oi_mismatch = true;
    let mut all_pi_pass = true;
    for seed in 0..3u64 {
        let out = run_experiment(RunConfig {
            n_trials: n,
            seed: 0x9B05 + seed,
            model: Box::new(PrBox::new()),
            source: Box::new(UniformSource::new()),
        })
        .unwrap();
        let chsh = chsh_statistic(&filtered_correlations(&out.table).unwrap());
        worst_gap = worst_gap.max((chsh - 4.0).abs());
        all_oi_mismatch &= matches!(
            derive_joint(&out.table, tolerance),
            Err(ReorderError::OiMismatch { .. })
        );
        all_pi_pass &= pi_empirical_test(&out.table, ALPHA / 3.0).unwrap().all_pass();
    }
    let pass = worst_gap <= 0.05 && all_oi_mismatch && all_pi_pass;
    println!(
        "criterion 5: {}: PR box filtered CHSH within {worst_gap:.4} of 4.0, \
         oi-mismatch: {all_oi_mismatch}, PI (no-signaling) passes: {all_pi_pass}",
        verdict(pass)
    );
    assert!(worst_gap <= 0.05);
    assert!(all_oi_mismatch);
    assert!(all_pi_pass);
}

#[test]
fn criterion_06_conspiracy_demonstration() {
    let n = 10_000;
    let seeds = 20u64;
    let results: Vec<(f64, f64, f64, bool)> = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let out = run_experiment(RunConfig {
                n_trials: n,
                seed: 0xC0_115 + seed,
                model: Box::new(MemoryLocal::new(MemoryRule::fair_coin()).unwrap()),
                source: Box::new(ConspiracySource::new(ConspiracyTarget::Maximize)),
            })
            .unwrap();
            let filtered = chsh_statistic(&filtered_correlations(&out.table).unwrap());
            let full = chsh_statistic(&full_table_correlations(&out.table).unwrap());
            let bound = 2.0 + chsh_tolerance(out.table.setting_counts(), ALPHA).unwrap();
            let rejected = conspiracy_test(&out.table, 1000, 0.01, seed)
                .unwrap()
                .p_value
                < 0.01;
            (filtered, full, bound, rejected)
        })
        .collect();

    let all_amplified = results.iter().all(|r| r.0 > 2.5);
    let all_full_honest = results.iter().all(|r| r.1 <= r.2.min(2.0));
    let rejections = results.iter().filter(|r| r.3).count();
    let min_filtered = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let pass = all_amplified && all_full_honest && rejections >= 19;
    println!(
        "criterion 6: {}: conspiracy filtered CHSH > 2.5 on all seeds (min {min_filtered:.4}), \
         full table within bound: {all_full_honest}, test rejections {rejections}/{seeds}",
        verdict(pass)
    );
    assert!(all_amplified);
    assert!(all_full_honest);
    assert!(rejections >= 19);
}

#[test]
fn criterion_07_chain_verifier() {
    // Every joint table the local-model replays produced.
    let (runs, _) = local_runs();
    let replay_chains_ok = runs.iter().all(|r| r.chain_pass.is_none_or(|p| p));
    let chains_checked = runs.iter().filter(|r| r.chain_pass.is_some()).count();

    // Fuzzed joint tables, same construction as criterion 1.
    let mut stream = RandomStream::from_words(&[0xC7]);
    let mut fuzz_ok = true;
    let mut max_l6_l7_gap = 0.0f64;
    for _ in 0..1000 {
        let joint = random_joint_table(&mut stream, 2_000);
        let report = verify_chain(&joint);
        fuzz_ok &= report.pass;
        let l6 = report.quantities[5].value;
        let l7 = report.quantities[6].value;
        max_l6_l7_gap = max_l6_l7_gap.max((l6 - l7).abs());
    }

    // A bounded, non-dichotomic synthetic table.
    let mut stream = RandomStream::from_words(&[0xB0]);
    let bounded = JointTable::new(
        (0..5_000)
            .map(|_| {
                let mut v = || OutcomeValue::new(stream.uniform() * 2.0 - 1.0).unwrap();
                JointRow {
                    a: v(),
                    b: v(),
                    bp: v(),
                    ap: v(),
                }
            })
            .collect(),
    );
    let bounded_report = verify_chain(&bounded);
    let bounded_gap = (bounded_report.quantities[5].value - bounded_report.quantities[6].value).abs();
    max_l6_l7_gap = max_l6_l7_gap.max(bounded_gap);

    let pass = replay_chains_ok && fuzz_ok && bounded_report.pass && max_l6_l7_gap <= 1e-12;
    println!(
        "criterion 7: {}: all seven links hold on {chains_checked} replay joints, 1000 fuzzed \
         joints, and a bounded synthetic table; max |L6 - L7| = {max_l6_l7_gap:.2e}",
        verdict(pass)
    );
    assert!(replay_chains_ok);
    assert!(fuzz_ok);
    assert!(bounded_report.pass);
    assert!(max_l6_l7_gap <= 1e-12);
}

// Exhaustive oracle for tiny tables: the minimum discrepancy of each step
// over every permutation of its movable values, applied to the engine's own
// intermediate tables.
mod oracle {
    use super::*;

    pub fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut all = Vec::new();
        let mut indices: Vec<usize> = (0..n).collect();
        heap(&mut indices, n, &mut all);
        all
    }

    fn heap(arr: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(arr.clone());
            return;
        }
        for i in 0..k {
            heap(arr, k - 1, out);
            if k.is_multiple_of(2) {
                arr.swap(i, k - 1);
            } else {
                arr.swap(0, k - 1);
            }
        }
    }

    /// Minimum mismatches of a PI step over all permutations of the moved
    /// pair.
    pub fn pi_min(table: &OutcomeTable, step: PiStep) -> usize {
        let rows = table.rows();
        let (target, moved): (Vec<bool>, Vec<bool>) = rows
            .iter()
            .map(|r| {
                let o = &r.outcomes;
                match step {
                    PiStep::A1A2 => (o.a1.is_plus(), o.a2.is_plus()),
                    PiStep::B1B3 => (o.b1.is_plus(), o.b3.is_plus()),
                    PiStep::Bp2Bp4 => (o.bp2.is_plus(), o.bp4.is_plus()),
                }
            })
            .unzip();
        permutations(rows.len())
            .into_iter()
            .map(|perm| (0..rows.len()).filter(|&i| moved[perm[i]] != target[i]).count())
            .min()
            .unwrap_or(0)
    }

    /// Minimum mismatches of the OI step over all permutations of A'4 that
    /// keep every value inside its (B'2, B'4) cell.
    pub fn oi_min(table: &OutcomeTable) -> usize {
        let rows = table.rows();
        let cell = |i: usize| {
            (
                rows[i].outcomes.bp2.is_plus(),
                rows[i].outcomes.bp4.is_plus(),
            )
        };
        permutations(rows.len())
            .into_iter()
            .filter(|perm| (0..rows.len()).all(|i| cell(perm[i]) == cell(i)))
            .map(|perm| {
                (0..rows.len())
                    .filter(|&i| rows[perm[i]].outcomes.ap4 != rows[i].outcomes.ap3)
                    .count()
            })
            .min()
            .unwrap_or(0)
    }
}

#[test]
fn criterion_08_tiny_table_oracle_equivalence() {
    let mut stream = RandomStream::from_words(&[0xC8]);
    let mut checked_steps = 0usize;
    for case in 0..500 {
        let n = 1 + stream.below(4);
        let rows: Vec<TrialRow> = (0..n)
            .map(|i| {
                let mut v = || OutcomeValue::sign(stream.sign());
                TrialRow {
                    outcomes: Octuple {
                        a1: v(),
                        b1: v(),
                        a2: v(),
                        bp2: v(),
                        ap3: v(),
                        b3: v(),
                        ap4: v(),
                        bp4: v(),
                    },
                    setting: Setting::ALL[stream.below(4)],
                    trial_index: i,
                }
            })
            .collect();
        let table = OutcomeTable::new(rows).unwrap();
        let tolerance = stream.below(3);

        // Walk the engine step by step, checking each reported discrepancy
        // against the exhaustive minimum on the same intermediate table.
        let mut current = table.clone();
        let mut oracle_failure: Option<ReorderStep> = None;
        for step in [PiStep::A1A2, PiStep::B1B3, PiStep::Bp2Bp4] {
            let exhaustive = oracle::pi_min(&current, step);
            let (next, audit) = match_pair_pi(&current, step, usize::MAX).unwrap();
            assert_eq!(
                audit.discrepancy, exhaustive,
                "case {case}: step {step:?} greedy {} vs exhaustive {exhaustive}",
                audit.discrepancy
            );
            checked_steps += 1;
            if exhaustive > tolerance {
                oracle_failure = Some(step.into());
                break;
            }
            current = next;
        }
        if oracle_failure.is_none() {
            let disagreement = current
                .rows()
                .iter()
                .filter(|r| r.outcomes.bp2.is_plus() != r.outcomes.bp4.is_plus())
                .count();
            if disagreement > tolerance {
                oracle_failure = Some(ReorderStep::OiAp3Ap4);
            } else {
                let exhaustive = oracle::oi_min(&current);
                let (_, audit) = match_oi(&current, usize::MAX).unwrap();
                assert_eq!(
                    audit.discrepancy, exhaustive,
                    "case {case}: OI greedy {} vs exhaustive {exhaustive}",
                    audit.discrepancy
                );
                checked_steps += 1;
                if exhaustive > tolerance {
                    oracle_failure = Some(ReorderStep::OiAp3Ap4);
                }
            }
        }

        // Engine success must coincide with the oracle's verdict.
        let engine = derive_joint(&table, tolerance);
        match (&oracle_failure, &engine) {
            (None, Ok(_)) => {}
            (Some(_), Err(_)) => {}
            (oracle, engine) => panic!(
                "case {case}: oracle says {oracle:?}, engine says {}",
                if engine.is_ok() { "success" } else { "failure" }
            ),
        }
    }
    println!(
        "criterion 8: PASS: engine matches the exhaustive permutation oracle on 500 tiny \
         tables ({checked_steps} step comparisons)"
    );
}

#[test]
fn criterion_09_lifecycle_enforcement() {
    // The deliberately leaking model must trip the contract breach with
    // exit code 2, end to end through the binary.
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_chsh-forge"))
        .args(["run", "--model", "leaky", "--trials", "8", "--seed", "0"])
        .output()
        .expect("binary runs");
    let exit_two = out.status.code() == Some(2);
    let named = String::from_utf8_lossy(&out.stderr).contains("setting-leakage");

    // Every bundled model produces logs that pass validation.
    let bundled: Vec<(&str, Box<dyn HvModel>)> = vec![
        ("deterministic", Box::new(DeterministicLocal::full_enumeration())),
        ("stochastic", Box::new(MemoryLocal::new(MemoryRule::fair_coin()).unwrap())),
        ("memory", Box::new(MemoryLocal::new(MemoryRule::bias_flip(0.3)).unwrap())),
        ("clocked", Box::new(ClockedLocal::sinusoid(7, 0.3).unwrap())),
        ("singlet", Box::new(SingletModel::chsh_optimal())),
        ("prbox", Box::new(PrBox::new())),
        ("signaling", Box::new(chsh_core::models::SignalingModel::new(0.5).unwrap())),
    ];
    let mut all_logs_pass = true;
    for (name, model) in bundled {
        let out = run_experiment(RunConfig {
            n_trials: 64,
            seed: 0x11FE,
            model,
            source: Box::new(UniformSource::new()),
        })
        .unwrap_or_else(|e| panic!("{name} failed to run: {e}"));
        all_logs_pass &= out.logs.iter().all(|log| validate_lifecycle(log).pass);
    }

    let pass = exit_two && named && all_logs_pass;
    println!(
        "criterion 9: {}: leaking model exits 2 naming setting-leakage ({exit_two}/{named}), \
         all bundled models pass lifecycle validation: {all_logs_pass}",
        verdict(pass)
    );
    assert!(exit_two, "exit code was {:?}", out.status.code());
    assert!(named);
    assert!(all_logs_pass);
}

#[test]
fn criterion_10_statistical_calibration() {
    let alpha = 0.05;
    let seeds = 200u64;
    let band = |rate: f64| (alpha / 2.0..=2.0 * alpha).contains(&rate);

    fn coin_table(n: usize, seed: u64) -> OutcomeTable {
        run_experiment(RunConfig {
            n_trials: n,
            seed,
            model: Box::new(MemoryLocal::new(MemoryRule::fair_coin()).unwrap()),
            source: Box::new(UniformSource::new()),
        })
        .unwrap()
        .table
    }

    // Multiset equality on independent coin columns.
    let multiset_rejections: usize = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let table = coin_table(2_000, 0xA110 + seed);
            let cols = |f: fn(&Octuple) -> OutcomeValue| -> Vec<OutcomeValue> {
                table.rows().iter().map(|r| f(&r.outcomes)).collect()
            };
            usize::from(
                multiset_equality_test(&cols(|o| o.a1), &cols(|o| o.a2), alpha)
                    .unwrap()
                    .test
                    .rejected,
            )
        })
        .sum();
    let multiset_rate = multiset_rejections as f64 / seeds as f64;

    // PI test: three pairs per table, pooled per-pair rate.
    let pi_rejections: usize = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let report = pi_empirical_test(&coin_table(2_000, 0x9100 + seed), alpha).unwrap();
            [&report.a1_a2, &report.b1_b3, &report.bp2_bp4]
                .iter()
                .filter(|m| m.test.rejected)
                .count()
        })
        .sum();
    let pi_rate = pi_rejections as f64 / (3 * seeds as usize) as f64;

    // OI test: two subtables per table, pooled.
    let oi_rejections: usize = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let report = oi_empirical_test(&coin_table(2_000, 0x01E + seed), alpha).unwrap();
            [&report.plus_class, &report.minus_class]
                .iter()
                .filter(|m| m.test.rejected)
                .count()
        })
        .sum();
    let oi_rate = oi_rejections as f64 / (2 * seeds as usize) as f64;

    // Conspiracy permutation test under the honest-source null.
    let conspiracy_rejections: usize = (0..seeds)
        .into_par_iter()
        .map(|seed| {
            let table = coin_table(512, 0xC0 + seed);
            usize::from(conspiracy_test(&table, 400, alpha, seed).unwrap().rejected)
        })
        .sum();
    let conspiracy_rate = conspiracy_rejections as f64 / seeds as f64;

    // Hoeffding soundness: coverage of the fair-coin mean at 1 - alpha.
    let replications = 1_000u64;
    let n_cov = 2_000usize;
    let t = hoeffding_tolerance(n_cov, alpha).unwrap();
    let covered: usize = (0..replications)
        .into_par_iter()
        .map(|seed| {
            let mut stream = RandomStream::from_words(&[0xC0FFEE, seed]);
            let mean: f64 = (0..n_cov)
                .map(|_| if stream.sign() { 1.0 } else { -1.0 })
                .sum::<f64>()
                / n_cov as f64;
            usize::from(mean.abs() <= t)
        })
        .sum();
    let coverage = covered as f64 / replications as f64;

    let pass = band(multiset_rate)
        && band(pi_rate)
        && band(oi_rate)
        && band(conspiracy_rate)
        && coverage >= 1.0 - alpha;
    println!(
        "criterion 10: {}: null rejection rates in [{}, {}]: multiset {multiset_rate:.3}, \
         pi {pi_rate:.3}, oi {oi_rate:.3}, conspiracy {conspiracy_rate:.3}; \
         hoeffding coverage {coverage:.3} (need >= {:.2})",
        verdict(pass),
        alpha / 2.0,
        2.0 * alpha,
        1.0 - alpha
    );
    assert!(band(multiset_rate), "multiset rate {multiset_rate}");
    assert!(band(pi_rate), "pi rate {pi_rate}");
    assert!(band(oi_rate), "oi rate {oi_rate}");
    assert!(band(conspiracy_rate), "conspiracy rate {conspiracy_rate}");
    assert!(coverage >= 1.0 - alpha, "coverage {coverage}");
}
