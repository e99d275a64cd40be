//! End-to-end checks of the `tbs` binary: exit codes, stream separation,
//! output stability, and agreement with the in-process engine.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};
use tbs_core::{compute_payoffs, GameParams, PayoffProfile, StrategyPair};

fn tbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tbs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn reference_params() -> GameParams {
    GameParams {
        protection: 3.0,
        detection: 10.0,
        reaction: 1.0,
        reset_cost: 2.0,
        check_cost: 5.0,
        attack_cost: 0.5,
    }
}

const PARAM_FLAGS: [&str; 12] = [
    "--p", "3", "--d", "10", "--r", "1", "--cd", "2", "--ck", "5", "--ca", "0.5",
];

fn fixtures(subdir: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(subdir)
}

#[test]
fn payoff_json_round_trips_to_the_engine_profile() {
    let mut args = vec!["payoff"];
    args.extend_from_slice(&PARAM_FLAGS);
    args.extend_from_slice(&["--td", "15", "--ta", "30", "--format", "json"]);
    let output = tbs(&args);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let parsed: PayoffProfile =
        serde_json::from_str(&stdout_of(&output)).expect("stdout parses as a profile");
    let expected = compute_payoffs(
        &reference_params(),
        &StrategyPair {
            defender_period: 15.0,
            attacker_period: 30.0,
        },
    )
    .unwrap();
    assert_eq!(parsed, expected);
}

#[test]
fn below_floor_period_exits_one_with_a_floor_message() {
    let mut args = vec!["payoff"];
    args.extend_from_slice(&PARAM_FLAGS);
    args.extend_from_slice(&["--td", "15", "--ta", "10"]);
    let output = tbs(&args);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout_of(&output).is_empty());
    assert!(
        stderr_of(&output).contains("period floor"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn unknown_flag_and_subcommand_exit_one() {
    let output = tbs(&["payoff", "--bogus", "1"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(!stderr_of(&output).is_empty());

    let output = tbs(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(!stderr_of(&output).is_empty());
}

#[test]
fn help_prints_to_stdout_and_exits_zero() {
    let output = tbs(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_of(&output);
    for subcommand in ["payoff", "simulate", "br", "sweep", "nash", "veris"] {
        assert!(text.contains(subcommand), "help lacks {subcommand}");
    }
}

#[test]
fn defender_sweep_follows_the_square_root_rule() {
    let mut args = vec!["sweep", "--player", "defender"];
    args.extend_from_slice(&PARAM_FLAGS);
    args.extend_from_slice(&["--from", "60", "--to", "100", "--step", "5"]);
    let output = tbs(&args);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("opponent_period,best_response,payoff"),
        "sweep must default to CSV with the exact header"
    );
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3, "bad row: {line}");
        let t: f64 = fields[0].parse().unwrap();
        let best: f64 = fields[1].parse().unwrap();
        let expected = (2.0 * 5.0 * t).sqrt();
        assert!(
            (best - expected).abs() < 1e-3,
            "at {t}: {best} vs {expected}"
        );
        rows += 1;
    }
    assert_eq!(rows, 9);
}

#[test]
fn simulate_output_is_byte_stable() {
    let mut args = vec!["simulate"];
    args.extend_from_slice(&PARAM_FLAGS);
    args.extend_from_slice(&[
        "--td",
        "17",
        "--ta",
        "30",
        "--horizon-periods",
        "200",
        "--reps",
        "8",
        "--seed",
        "42",
        "--format",
        "json",
    ]);
    let first = tbs(&args);
    let second = tbs(&args);
    assert!(first.status.success(), "stderr: {}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn nash_output_is_byte_stable() {
    let mut args = vec!["nash"];
    args.extend_from_slice(&PARAM_FLAGS);
    args.extend_from_slice(&[
        "--tmax",
        "60",
        "--grid-step",
        "0.5",
        "--eps",
        "1",
        "--format",
        "csv",
    ]);
    let first = tbs(&args);
    let second = tbs(&args);
    assert!(first.status.success(), "stderr: {}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_of(&first);
    assert!(text.starts_with(
        "attacker_period,defender_period,defender_gap,attacker_gap,\
         defender_payoff,attacker_payoff\n"
    ));
}

#[test]
fn params_json_feeds_the_flags_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.json");
    let mut file = std::fs::File::create(&path).unwrap();
    write!(
        file,
        r#"{{"protection": 3, "detection": 10, "reaction": 1,
            "reset_cost": 2, "check_cost": 5, "attack_cost": 0.5}}"#
    )
    .unwrap();
    let path = path.to_str().unwrap();

    let from_file = tbs(&[
        "payoff",
        "--params-json",
        path,
        "--td",
        "15",
        "--ta",
        "30",
        "--format",
        "json",
    ]);
    assert!(from_file.status.success(), "{}", stderr_of(&from_file));
    let mut flag_args = vec!["payoff"];
    flag_args.extend_from_slice(&PARAM_FLAGS);
    flag_args.extend_from_slice(&["--td", "15", "--ta", "30", "--format", "json"]);
    let from_flags = tbs(&flag_args);
    assert_eq!(from_file.stdout, from_flags.stdout);

    let overridden = tbs(&[
        "payoff",
        "--params-json",
        path,
        "--ck",
        "10",
        "--td",
        "15",
        "--ta",
        "30",
        "--format",
        "json",
    ]);
    assert!(overridden.status.success(), "{}", stderr_of(&overridden));
    let parsed: PayoffProfile = serde_json::from_str(&stdout_of(&overridden)).unwrap();
    let expected = compute_payoffs(
        &GameParams {
            check_cost: 10.0,
            ..reference_params()
        },
        &StrategyPair {
            defender_period: 15.0,
            attacker_period: 30.0,
        },
    )
    .unwrap();
    assert_eq!(parsed, expected);
}

#[test]
fn params_json_with_unknown_keys_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("params.json");
    std::fs::write(&path, r#"{"protection": 3, "detektion": 10}"#).unwrap();
    let output = tbs(&[
        "payoff",
        "--params-json",
        path.to_str().unwrap(),
        "--td",
        "15",
        "--ta",
        "30",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(
        stderr_of(&output).contains("detektion"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn veris_stats_reports_on_stderr_and_data_on_stdout() {
    let dir = fixtures("synthetic");
    let output = tbs(&[
        "veris",
        "stats",
        "--dir",
        dir.to_str().unwrap(),
        "--field",
        "discovery",
        "--format",
        "csv",
    ]);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.starts_with("field,bin_start_days,bin_width_days,count,cumulative_fraction\n"));
    let reports: Vec<serde_json::Value> = stderr_of(&output)
        .lines()
        .filter(|line| line.starts_with('{'))
        .map(|line| serde_json::from_str(line).expect("stderr report parses"))
        .collect();
    assert_eq!(reports.len(), 2, "parse report plus exclusion report");
    assert_eq!(reports[0]["records"], 24);
    assert_eq!(reports[1]["samples"], 9);
}

#[test]
fn veris_stats_missing_directory_exits_two() {
    let output = tbs(&[
        "veris",
        "stats",
        "--dir",
        "/definitely/not/a/real/path",
        "--field",
        "discovery",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(!stderr_of(&output).is_empty());
}

#[test]
fn br_rejects_the_wrong_opponent_flag() {
    let mut args = vec!["br", "defender"];
    args.extend_from_slice(&PARAM_FLAGS);
    args.extend_from_slice(&["--td", "30"]);
    let output = tbs(&args);
    assert_eq!(output.status.code(), Some(1));
    assert!(
        stderr_of(&output).contains("--ta"),
        "stderr: {}",
        stderr_of(&output)
    );

    let mut args = vec!["br", "attacker"];
    args.extend_from_slice(&PARAM_FLAGS);
    let output = tbs(&args);
    assert_eq!(output.status.code(), Some(1));
    assert!(
        stderr_of(&output).contains("--td"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn br_attacker_against_a_slow_defender_backs_off_to_the_floor() {
    let mut args = vec!["br", "attacker"];
    args.extend_from_slice(&PARAM_FLAGS);
    args.extend_from_slice(&["--td", "140", "--format", "csv"]);
    let output = tbs(&args);
    assert!(output.status.success(), "stderr: {}", stderr_of(&output));
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,source,payoff,best"));
    let winner = lines
        .map(|line| line.split(',').collect::<Vec<_>>())
        .find(|fields| fields[3] == "true")
        .expect("one candidate wins");
    assert_eq!(winner[0], "14");
}
