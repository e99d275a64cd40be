//! Command dispatch: resolve arguments into engine calls, print data to
//! stdout and diagnostics to stderr, and map every failure onto the exit
//! code contract (1 = bad input, 2 = I/O failure).

use crate::args::{
    BrArgs, Cli, Command, NashArgs, ParamArgs, PayoffArgs, PlayerArg, SimulateArgs, SweepArgs,
    VerisCommand, VerisStatsArgs,
};
use crate::render;
use serde::Deserialize;
use serde_json::json;
use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use tbs_core::{
    best_response, compute_payoffs, extract_durations, filter_by_actions, find_equilibria,
    parse_incidents, simulate, timing_stats, ActionCategory, BestResponseError, ConversionTable,
    EquilibriumError, ExtractOptions, GameParams, Player, SimConfig, SimError, StatsError,
    StrategyPair, TimelineField, TimingStats, ValidationError, VerisError,
};

/// Failures that reach the user, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or bad model input — exit code 1.
    Invalid(String),
    /// Filesystem trouble — exit code 2.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<ValidationError> for CliError {
    fn from(err: ValidationError) -> Self {
        CliError::Invalid(err.to_string())
    }
}

impl From<BestResponseError> for CliError {
    fn from(err: BestResponseError) -> Self {
        CliError::Invalid(err.to_string())
    }
}

impl From<EquilibriumError> for CliError {
    fn from(err: EquilibriumError) -> Self {
        CliError::Invalid(err.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(err: SimError) -> Self {
        CliError::Invalid(err.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(err: StatsError) -> Self {
        CliError::Invalid(err.to_string())
    }
}

impl From<VerisError> for CliError {
    fn from(err: VerisError) -> Self {
        match err {
            VerisError::SourceUnreadable { .. } => CliError::Io(err.to_string()),
            _ => CliError::Invalid(err.to_string()),
        }
    }
}

/// On-disk shape for `--params-json`. Unknown keys are rejected so typos
/// fail loudly instead of silently falling back to defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    protection: Option<f64>,
    detection: Option<f64>,
    reaction: Option<f64>,
    reset_cost: Option<f64>,
    check_cost: Option<f64>,
    attack_cost: Option<f64>,
}

/// Merges `--params-json` (if given) with the individual flags; flags win.
fn resolve_params(args: &ParamArgs) -> Result<GameParams, CliError> {
    let file = match &args.params_json {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|err| CliError::Io(format!("cannot read {}: {err}", path.display())))?;
            serde_json::from_str::<ParamsFile>(&text).map_err(|err| {
                CliError::Invalid(format!("cannot parse {}: {err}", path.display()))
            })?
        }
        None => ParamsFile::default(),
    };
    let require = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
        flag.or(from_file).ok_or_else(|| {
            CliError::Invalid(format!(
                "missing required parameter --{name} (set it or provide --params-json)"
            ))
        })
    };
    let params = GameParams {
        protection: require(args.p, file.protection, "p")?,
        detection: require(args.d, file.detection, "d")?,
        reaction: require(args.r, file.reaction, "r")?,
        reset_cost: args.cd.or(file.reset_cost).unwrap_or(0.0),
        check_cost: args.ck.or(file.check_cost).unwrap_or(0.0),
        attack_cost: args.ca.or(file.attack_cost).unwrap_or(0.0),
    };
    params.validate()?;
    Ok(params)
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Payoff(args) => run_payoff(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Br(args) => run_br(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Nash(args) => run_nash(args),
        Command::Veris(VerisCommand::Stats(args)) => run_veris_stats(args),
    }
}

fn run_payoff(args: PayoffArgs) -> Result<(), CliError> {
    let params = resolve_params(&args.params)?;
    let pair = StrategyPair {
        defender_period: args.td,
        attacker_period: args.ta,
    };
    let profile = compute_payoffs(&params, &pair)?;
    print!("{}", render::payoff(&profile, args.format));
    Ok(())
}

fn run_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let params = resolve_params(&args.params)?;
    let pair = StrategyPair {
        defender_period: args.td,
        attacker_period: args.ta,
    };
    let analytic = compute_payoffs(&params, &pair)?;
    let config = SimConfig {
        params,
        pair,
        horizon_periods: args.horizon_periods,
        replications: args.reps,
        seed: args.seed,
    };
    let sim = simulate(&config)?;
    print!("{}", render::simulation(&analytic, &sim, args.format));
    Ok(())
}

fn run_br(args: BrArgs) -> Result<(), CliError> {
    let params = resolve_params(&args.params)?;
    let (player, opponent_period) = match args.player {
        PlayerArg::Defender => {
            if args.td.is_some() {
                return Err(CliError::Invalid(String::from(
                    "--td does not apply when the defender responds; set --ta",
                )));
            }
            let ta = args.ta.ok_or_else(|| {
                CliError::Invalid(String::from(
                    "the defender responds to the attacker's period; set --ta",
                ))
            })?;
            (Player::Defender, ta)
        }
        PlayerArg::Attacker => {
            if args.ta.is_some() {
                return Err(CliError::Invalid(String::from(
                    "--ta does not apply when the attacker responds; set --td",
                )));
            }
            let td = args.td.ok_or_else(|| {
                CliError::Invalid(String::from(
                    "the attacker responds to the defender's period; set --td",
                ))
            })?;
            (Player::Attacker, td)
        }
    };
    let result = best_response(&params, player, opponent_period)?;
    print!("{}", render::best_response(&result, args.format));
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    let params = resolve_params(&args.params)?;
    if !args.step.is_finite() || args.step <= 0.0 {
        return Err(CliError::Invalid(format!(
            "sweep step must be positive and finite, got {}",
            args.step
        )));
    }
    if !args.from.is_finite() || !args.to.is_finite() {
        return Err(CliError::Invalid(format!(
            "sweep range must be finite, got {}..{}",
            args.from, args.to
        )));
    }
    if args.from > args.to {
        return Err(CliError::Invalid(format!(
            "sweep range is empty: --from {} exceeds --to {}",
            args.from, args.to
        )));
    }
    let player = match args.player {
        PlayerArg::Defender => Player::Defender,
        PlayerArg::Attacker => Player::Attacker,
    };
    let count = ((args.to - args.from) / args.step + 1e-9).floor() as usize + 1;
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let t = (args.from + i as f64 * args.step).min(args.to);
        let result = best_response(&params, player, t)?;
        rows.push((t, result.best.value, result.best.payoff));
    }
    print!("{}", render::sweep(&rows, args.format));
    Ok(())
}

fn run_nash(args: NashArgs) -> Result<(), CliError> {
    let params = resolve_params(&args.params)?;
    let t_max = args.tmax.unwrap_or(10.0 * params.min_period());
    let candidates = find_equilibria(&params, t_max, args.grid_step, args.eps)?;
    if candidates.is_empty() {
        eprintln!(
            "no equilibrium candidates: no grid pair survives the mutual \
             best-response and eps filters"
        );
    }
    print!("{}", render::equilibria(&candidates, args.format));
    Ok(())
}

fn parse_actions(list: &str) -> Result<BTreeSet<ActionCategory>, CliError> {
    let mut wanted = BTreeSet::new();
    for name in list.split(',') {
        let name = name.trim();
        if name.is_empty() {
            continue;
        }
        wanted.insert(name.parse::<ActionCategory>()?);
    }
    if wanted.is_empty() {
        return Err(CliError::Invalid(String::from(
            "--actions selected nothing; give a comma-separated category list",
        )));
    }
    Ok(wanted)
}

/// Reference expectations for the 2016 public incident-corpus snapshot
/// (discovery field, default conversion table, 1795 malware/hacking
/// incidents).
fn check_snapshot(stats: &TimingStats, records_kept: usize) -> Result<(), CliError> {
    let checks: [(&str, bool, String); 4] = [
        (
            "malware/hacking incidents == 1795",
            records_kept == 1795,
            format!("got {records_kept}"),
        ),
        ("n == 150", stats.n == 150, format!("got {}", stats.n)),
        (
            "mean within 2 days of 198.2539",
            (stats.mean_days - 198.2539).abs() <= 2.0,
            format!("got {}", stats.mean_days),
        ),
        (
            "max == 2190 days (6 years)",
            stats.max_days == 2190.0,
            format!("got {}", stats.max_days),
        ),
    ];
    let mut failed = false;
    for (label, ok, detail) in &checks {
        if *ok {
            eprintln!("snapshot {label}: PASS");
        } else {
            eprintln!("snapshot {label}: FAIL ({detail})");
            failed = true;
        }
    }
    if failed {
        Err(CliError::Invalid(String::from(
            "snapshot assertions failed; see diagnostics above",
        )))
    } else {
        Ok(())
    }
}

fn run_veris_stats(args: VerisStatsArgs) -> Result<(), CliError> {
    let parsed = parse_incidents(&args.dir)?;
    eprintln!(
        "{}",
        json!({
            "documents": parsed.records.len() + parsed.skipped.total(),
            "records": parsed.records.len(),
            "skipped": parsed.skipped,
        })
    );
    let wanted = parse_actions(&args.actions)?;
    let records = filter_by_actions(&parsed.records, &wanted);
    let options = ExtractOptions {
        conversion: if args.calendar_mean {
            ConversionTable::calendar_mean()
        } else {
            ConversionTable::standard()
        },
        containment_cap_days: (args.cap_days > 0.0).then_some(args.cap_days),
    };
    let (samples, excluded) = extract_durations(&records, args.field, &options);
    eprintln!(
        "{}",
        json!({
            "matched_records": records.len(),
            "samples": samples.len(),
            "excluded": excluded,
        })
    );
    let stats = timing_stats(&samples, args.bin_days)?;
    print!("{}", render::veris_stats(args.field, &stats, args.format));
    if args.snapshot_assertions {
        if args.field != TimelineField::Discovery {
            return Err(CliError::Invalid(String::from(
                "snapshot assertions cover the discovery field only; rerun with \
                 --field discovery",
            )));
        }
        check_snapshot(&stats, records.len())?;
    }
    Ok(())
}
