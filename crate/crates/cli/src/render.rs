//! Output rendering. Every function returns the full stdout payload
//! (trailing newline included) so the command layer can stay print-free
//! until the very end.
//!
//! Floats are formatted with `Display`, which emits the shortest string
//! that round-trips back to the same bit pattern — CSV and JSON output can
//! therefore be parsed back without losing precision.

use crate::args::OutputFormat;
use serde_json::json;
use tbs_core::{
    BestResponseResult, EquilibriumCandidate, PayoffProfile, SimResult, TimelineField, TimingStats,
};

/// Aligned `key value` lines for the human-readable mode.
fn key_values(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (key, value) in pairs {
        out.push_str(&format!("{key:<width$}  {value}\n"));
    }
    out
}

/// Column table with a header row; widths fit the longest cell.
fn column_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let render_row = |cells: &[String]| {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            // Last column unpadded so lines carry no trailing spaces.
            if i + 1 == cells.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<width$}", width = widths[i]));
            }
        }
        line.push('\n');
        line
    };
    let header_cells: Vec<String> = headers.iter().map(|h| (*h).to_string()).collect();
    let mut out = render_row(&header_cells);
    for row in rows {
        out.push_str(&render_row(row));
    }
    out
}

fn csv(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn payoff(profile: &PayoffProfile, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => key_values(&[
            ("defender_share", profile.defender_share.to_string()),
            ("reset_interval", profile.reset_interval.to_string()),
            ("defender_payoff", profile.defender_payoff.to_string()),
            ("attacker_payoff", profile.attacker_payoff.to_string()),
            ("region", profile.region.to_string()),
        ]),
        OutputFormat::Csv => csv(
            "defender_share,reset_interval,defender_payoff,attacker_payoff,region",
            &[vec![
                profile.defender_share.to_string(),
                profile.reset_interval.to_string(),
                profile.defender_payoff.to_string(),
                profile.attacker_payoff.to_string(),
                profile.region.to_string(),
            ]],
        ),
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(profile).expect("profile serializes");
            out.push('\n');
            out
        }
    }
}

pub fn simulation(analytic: &PayoffProfile, sim: &SimResult, format: OutputFormat) -> String {
    let share_gap = (sim.defender_share - analytic.defender_share).abs();
    match format {
        OutputFormat::Table => key_values(&[
            ("analytic_share", analytic.defender_share.to_string()),
            ("simulated_share", sim.defender_share.to_string()),
            ("share_gap", share_gap.to_string()),
            ("share_ci_halfwidth", sim.share_ci_halfwidth.to_string()),
            ("analytic_interval", analytic.reset_interval.to_string()),
            ("simulated_interval", sim.reset_interval.to_string()),
            ("defender_payoff", sim.defender_payoff.to_string()),
            ("attacker_payoff", sim.attacker_payoff.to_string()),
            ("checks", sim.checks.to_string()),
            ("resets", sim.resets.to_string()),
            ("attacks_launched", sim.attacks_launched.to_string()),
            ("attacks_voided", sim.attacks_voided.to_string()),
            ("region", analytic.region.to_string()),
        ]),
        OutputFormat::Csv => csv(
            "analytic_share,simulated_share,share_gap,share_ci_halfwidth,\
             simulated_interval,defender_payoff,attacker_payoff,checks,resets,\
             attacks_launched,attacks_voided",
            &[vec![
                analytic.defender_share.to_string(),
                sim.defender_share.to_string(),
                share_gap.to_string(),
                sim.share_ci_halfwidth.to_string(),
                sim.reset_interval.to_string(),
                sim.defender_payoff.to_string(),
                sim.attacker_payoff.to_string(),
                sim.checks.to_string(),
                sim.resets.to_string(),
                sim.attacks_launched.to_string(),
                sim.attacks_voided.to_string(),
            ]],
        ),
        OutputFormat::Json => {
            let doc = json!({
                "analytic": analytic,
                "simulated": sim,
                "share_gap": share_gap,
            });
            let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
            out.push('\n');
            out
        }
    }
}

pub fn best_response(result: &BestResponseResult, format: OutputFormat) -> String {
    let rows: Vec<Vec<String>> = result
        .candidates
        .iter()
        .map(|c| {
            vec![
                c.value.to_string(),
                c.source.to_string(),
                c.payoff.to_string(),
                (*c == result.best).to_string(),
            ]
        })
        .collect();
    match format {
        OutputFormat::Table => {
            let mut out = key_values(&[
                ("player", result.player.to_string()),
                ("opponent_period", result.opponent_period.to_string()),
                ("best_response", result.best.value.to_string()),
                ("best_payoff", result.best.payoff.to_string()),
            ]);
            out.push('\n');
            out.push_str(&column_table(&["value", "source", "payoff", "best"], &rows));
            out
        }
        OutputFormat::Csv => csv("value,source,payoff,best", &rows),
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(result).expect("result serializes");
            out.push('\n');
            out
        }
    }
}

/// `(opponent_period, best_response, payoff)` triples from a sweep.
pub fn sweep(rows: &[(f64, f64, f64)], format: OutputFormat) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|(t, best, payoff)| vec![t.to_string(), best.to_string(), payoff.to_string()])
        .collect();
    let headers = ["opponent_period", "best_response", "payoff"];
    match format {
        OutputFormat::Table => column_table(&headers, &cells),
        OutputFormat::Csv => csv("opponent_period,best_response,payoff", &cells),
        OutputFormat::Json => {
            let docs: Vec<_> = rows
                .iter()
                .map(|(t, best, payoff)| {
                    json!({
                        "opponent_period": t,
                        "best_response": best,
                        "payoff": payoff,
                    })
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&docs).expect("rows serialize");
            out.push('\n');
            out
        }
    }
}

pub fn equilibria(candidates: &[EquilibriumCandidate], format: OutputFormat) -> String {
    let rows: Vec<Vec<String>> = candidates
        .iter()
        .map(|c| {
            vec![
                c.attacker_period.to_string(),
                c.defender_period.to_string(),
                c.defender_deviation_gap.to_string(),
                c.attacker_deviation_gap.to_string(),
                c.defender_payoff.to_string(),
                c.attacker_payoff.to_string(),
            ]
        })
        .collect();
    match format {
        OutputFormat::Table => {
            if candidates.is_empty() {
                return String::from("no equilibrium candidates on this grid\n");
            }
            column_table(
                &[
                    "attacker_period",
                    "defender_period",
                    "defender_gap",
                    "attacker_gap",
                    "defender_payoff",
                    "attacker_payoff",
                ],
                &rows,
            )
        }
        OutputFormat::Csv => csv(
            "attacker_period,defender_period,defender_gap,attacker_gap,\
             defender_payoff,attacker_payoff",
            &rows,
        ),
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(candidates).expect("candidates serialize");
            out.push('\n');
            out
        }
    }
}

pub fn veris_stats(field: TimelineField, stats: &TimingStats, format: OutputFormat) -> String {
    let rows: Vec<Vec<String>> = stats
        .histogram
        .iter()
        .map(|bin| {
            vec![
                field.to_string(),
                bin.bin_start_days.to_string(),
                bin.bin_width_days.to_string(),
                bin.count.to_string(),
                bin.cumulative_fraction.to_string(),
            ]
        })
        .collect();
    match format {
        OutputFormat::Table => {
            let mut out = key_values(&[
                ("field", field.to_string()),
                ("n", stats.n.to_string()),
                ("mean_days", stats.mean_days.to_string()),
                ("min_days", stats.min_days.to_string()),
                ("max_days", stats.max_days.to_string()),
            ]);
            out.push('\n');
            out.push_str(&column_table(
                &[
                    "field",
                    "bin_start_days",
                    "bin_width_days",
                    "count",
                    "cumulative_fraction",
                ],
                &rows,
            ));
            out
        }
        OutputFormat::Csv => csv(
            "field,bin_start_days,bin_width_days,count,cumulative_fraction",
            &rows,
        ),
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(stats).expect("stats serialize");
            out.push('\n');
            out
        }
    }
}
