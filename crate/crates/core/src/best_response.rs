//! Best-response computation from the game's candidate structure: each
//! player's payoff is piecewise smooth in its own period, so the optimum is
//! always among a closed-form interior optimum, stationary points of the two
//! overlap bands, and the case boundaries. A brute-force grid maximizer is
//! provided as an independent cross-check.

use crate::model::{GameParams, Player, StrategyPair, ValidationError};
use crate::payoff::compute_payoffs;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Where a best-response candidate came from.
///
/// `Case23Root` and `Case45Root` are zeros of the responding player's payoff
/// derivative on the band where the pair would classify as that region;
/// `ClosedForm` is the square-root interior optimum of the player's outer
/// region (Case1 for the defender, Case6 for the attacker); `Boundary` covers
/// the period floor and the case boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CandidateSource {
    ClosedForm,
    Case23Root,
    Case45Root,
    Boundary,
}

impl fmt::Display for CandidateSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CandidateSource::ClosedForm => "closed-form",
            CandidateSource::Case23Root => "case23-root",
            CandidateSource::Case45Root => "case45-root",
            CandidateSource::Boundary => "boundary",
        })
    }
}

/// One candidate period together with the payoff the responding player gets
/// there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub value: f64,
    pub source: CandidateSource,
    pub payoff: f64,
}

/// Full result of a best-response query: every candidate considered (sorted
/// by period) and the winner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResponseResult {
    pub player: Player,
    pub opponent_period: f64,
    pub candidates: Vec<Candidate>,
    pub best: Candidate,
}

/// Errors from best-response and grid-search queries.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BestResponseError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("grid step must be positive and finite, got {step}")]
    NonPositiveStep { step: f64 },
    #[error("grid start {lo} must not exceed grid end {hi}")]
    EmptyRange { lo: f64, hi: f64 },
}

/// Derivative of the defender's payoff with respect to its own period on the
/// Case23 band (`defender_period` between `attacker_period − s` and
/// `attacker_period`). Zero at interior stationary points.
pub fn defender_case23_stationarity(
    params: &GameParams,
    defender_period: f64,
    attacker_period: f64,
) -> f64 {
    let s = params.min_period();
    let pp = params.protection;
    let dr = params.detection + params.reaction;
    let td = defender_period;
    let ta = attacker_period;
    params.check_cost / (td * td)
        + params.reset_cost * (ta - s) / (ta * (2.0 * td - ta + s) * (2.0 * td - ta + s))
        + (-td * td + ta * ta - 2.0 * pp * ta - s * (dr - pp)) / (4.0 * ta * td * td)
}

/// Derivative of the defender's payoff on the Case45 band
/// (`defender_period` between `attacker_period` and `attacker_period + s`).
pub fn defender_case45_stationarity(
    params: &GameParams,
    defender_period: f64,
    attacker_period: f64,
) -> f64 {
    let s = params.min_period();
    let pp = params.protection;
    let dr = params.detection + params.reaction;
    let td = defender_period;
    let ta = attacker_period;
    let w = 2.0 * ta - td + s;
    params.check_cost / (td * td) + params.reset_cost * ta / (td * td * w)
        - params.reset_cost * ta / (td * w * w)
        + (td * td - ta * ta - 2.0 * pp * ta - s * (dr - pp)) / (4.0 * ta * td * td)
}

/// Derivative of the attacker's payoff with respect to its own period on the
/// Case23 band (`attacker_period` between `defender_period` and
/// `defender_period + s`).
pub fn attacker_case23_stationarity(
    params: &GameParams,
    defender_period: f64,
    attacker_period: f64,
) -> f64 {
    let s = params.min_period();
    let pp = params.protection;
    let dr = params.detection + params.reaction;
    let td = defender_period;
    let ta = attacker_period;
    params.attack_cost / (ta * ta)
        - (td * td - ta * ta + 2.0 * dr * td - s * (dr - pp)) / (4.0 * ta * ta * td)
}

/// Derivative of the attacker's payoff on the Case45 band
/// (`attacker_period` between `defender_period − s` and `defender_period`).
pub fn attacker_case45_stationarity(
    params: &GameParams,
    defender_period: f64,
    attacker_period: f64,
) -> f64 {
    let s = params.min_period();
    let pp = params.protection;
    let dr = params.detection + params.reaction;
    let td = defender_period;
    let ta = attacker_period;
    params.attack_cost / (ta * ta)
        - (ta * ta - td * td + 2.0 * dr * td - s * (dr - pp)) / (4.0 * ta * ta * td)
}

/// Residual magnitude below which a bracket endpoint counts as a root even
/// without a sign change (tangency).
const TANGENT_TOL: f64 = 1e-12;
/// Roots closer than this are treated as one.
const ROOT_MERGE_TOL: f64 = 1e-8;
/// A root this close to an exact candidate (boundary or closed form) is
/// dropped in favor of the exact value.
const EXACT_SNAP_TOL: f64 = 1e-7;

/// Bisects a sign change down to floating-point resolution.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    0.5 * (lo + hi)
}

/// Finds the zeros of `f` on `[lo, hi]` by scanning a fixed number of panels
/// for sign changes and bisecting each. Endpoint tangencies (residual below
/// `TANGENT_TOL`) are accepted as roots. Returned roots are sorted and
/// deduplicated.
fn find_roots<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Vec<f64> {
    const PANELS: usize = 64;
    let mut found: Vec<f64> = Vec::new();
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        if hi == lo && f(lo).abs() < TANGENT_TOL {
            found.push(lo);
        }
        return found;
    }
    let width = hi - lo;
    let mut prev_x = lo;
    let mut prev_f = f(lo);
    for i in 1..=PANELS {
        let x = if i == PANELS {
            hi
        } else {
            lo + width * (i as f64 / PANELS as f64)
        };
        let fx = f(x);
        if prev_f.abs() < TANGENT_TOL {
            found.push(prev_x);
        } else if fx.abs() >= TANGENT_TOL && prev_f * fx < 0.0 {
            found.push(bisect(&f, prev_x, x, prev_f));
        }
        prev_x = x;
        prev_f = fx;
    }
    if prev_f.abs() < TANGENT_TOL {
        found.push(hi);
    }
    found.sort_by(f64::total_cmp);
    found.dedup_by(|a, b| (*a - *b).abs() <= ROOT_MERGE_TOL);
    found
}

/// Candidate periods for the defender against `ta`, unpriced and undeduped.
fn defender_candidate_values(params: &GameParams, ta: f64) -> Vec<(f64, CandidateSource)> {
    let s = params.min_period();
    let mut out = Vec::new();

    // Interior optimum of the fast-check region, valid only inside it.
    let closed = (2.0 * ta * params.check_cost).sqrt();
    if closed >= s && closed <= ta - s {
        out.push((closed, CandidateSource::ClosedForm));
    }

    let lo_mid = (ta - s).max(s);
    for root in find_roots(
        |td| defender_case23_stationarity(params, td, ta),
        lo_mid,
        ta,
    ) {
        out.push((root, CandidateSource::Case23Root));
    }
    for root in find_roots(
        |td| defender_case45_stationarity(params, td, ta),
        ta,
        ta + s,
    ) {
        out.push((root, CandidateSource::Case45Root));
    }

    out.push((s, CandidateSource::Boundary));
    if ta - s >= s {
        out.push((ta - s, CandidateSource::Boundary));
    }
    out.push((ta, CandidateSource::Boundary));
    out.push((ta + s, CandidateSource::Boundary));
    out
}

/// Candidate periods for the attacker against `td`.
fn attacker_candidate_values(params: &GameParams, td: f64) -> Vec<(f64, CandidateSource)> {
    let s = params.min_period();
    let mut out = Vec::new();

    // Interior optimum of the slow-check region, valid only inside it.
    // When the optimum overshoots the region (or the region is empty) the
    // region's payoff is monotone there and its edge — already a boundary
    // candidate — takes over.
    let closed = (2.0 * td * params.attack_cost).sqrt();
    if closed >= s && closed <= td - s {
        out.push((closed, CandidateSource::ClosedForm));
    }

    for root in find_roots(
        |ta| attacker_case23_stationarity(params, td, ta),
        td,
        td + s,
    ) {
        out.push((root, CandidateSource::Case23Root));
    }
    let lo_upper = (td - s).max(s);
    for root in find_roots(
        |ta| attacker_case45_stationarity(params, td, ta),
        lo_upper,
        td,
    ) {
        out.push((root, CandidateSource::Case45Root));
    }

    out.push((s, CandidateSource::Boundary));
    if td - s >= s {
        out.push((td - s, CandidateSource::Boundary));
    }
    out.push((td, CandidateSource::Boundary));
    out.push((td + s, CandidateSource::Boundary));
    out
}

fn is_exact(source: CandidateSource) -> bool {
    matches!(
        source,
        CandidateSource::Boundary | CandidateSource::ClosedForm
    )
}

/// Sorts candidates by period and collapses near-duplicates, preferring
/// exact values (boundaries, closed forms) over root-finder output.
fn dedup_candidates(mut values: Vec<(f64, CandidateSource)>) -> Vec<(f64, CandidateSource)> {
    values.sort_by(|a, b| {
        f64::total_cmp(&a.0, &b.0).then_with(|| {
            // Exact candidates first within a tie so they win the merge.
            (!is_exact(a.1)).cmp(&!is_exact(b.1))
        })
    });
    let mut out: Vec<(f64, CandidateSource)> = Vec::new();
    for (value, source) in values {
        match out.last_mut() {
            Some(last) if (value - last.0).abs() <= EXACT_SNAP_TOL => {
                if is_exact(source) && !is_exact(last.1) {
                    *last = (value, source);
                }
            }
            _ => out.push((value, source)),
        }
    }
    out
}

fn pair_for(player: Player, own: f64, opponent: f64) -> StrategyPair {
    match player {
        Player::Defender => StrategyPair {
            defender_period: own,
            attacker_period: opponent,
        },
        Player::Attacker => StrategyPair {
            defender_period: opponent,
            attacker_period: own,
        },
    }
}

fn payoff_of(params: &GameParams, player: Player, own: f64, opponent: f64) -> Option<f64> {
    let profile = compute_payoffs(params, &pair_for(player, own, opponent)).ok()?;
    Some(match player {
        Player::Defender => profile.defender_payoff,
        Player::Attacker => profile.attacker_payoff,
    })
}

fn check_opponent_period(params: &GameParams, opponent_period: f64) -> Result<(), ValidationError> {
    params.validate()?;
    if !opponent_period.is_finite() {
        return Err(ValidationError::NonFiniteInput {
            field: "opponent_period",
            value: opponent_period,
        });
    }
    let floor = params.min_period();
    if opponent_period < floor {
        return Err(ValidationError::PeriodBelowFloor {
            period: "opponent_period",
            value: opponent_period,
            floor,
        });
    }
    Ok(())
}

/// Computes `player`'s best response to the opponent moving every
/// `opponent_period`.
///
/// The argmax runs over the candidate set only; ties resolve toward the
/// smallest period, making the result deterministic.
pub fn best_response(
    params: &GameParams,
    player: Player,
    opponent_period: f64,
) -> Result<BestResponseResult, BestResponseError> {
    check_opponent_period(params, opponent_period)?;
    let raw = match player {
        Player::Defender => defender_candidate_values(params, opponent_period),
        Player::Attacker => attacker_candidate_values(params, opponent_period),
    };
    let mut candidates = Vec::new();
    for (value, source) in dedup_candidates(raw) {
        // A root can undershoot the floor by rounding; skip anything the
        // payoff engine would refuse.
        if let Some(payoff) = payoff_of(params, player, value, opponent_period) {
            candidates.push(Candidate {
                value,
                source,
                payoff,
            });
        }
    }
    debug_assert!(!candidates.is_empty(), "boundary candidates always survive");
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if c.payoff > best.payoff {
            best = *c;
        }
    }
    Ok(BestResponseResult {
        player,
        opponent_period,
        candidates,
        best,
    })
}

/// Maximizes `player`'s payoff over the evenly spaced grid
/// `lo, lo + step, …` capped at `hi` (single point when `lo == hi`), and
/// returns `(argmax, payoff)`. Ties resolve toward the smallest period.
///
/// This deliberately shares no logic with [`best_response`] so the two can
/// verify each other.
pub fn brute_force_argmax(
    params: &GameParams,
    player: Player,
    opponent_period: f64,
    lo: f64,
    hi: f64,
    step: f64,
) -> Result<(f64, f64), BestResponseError> {
    check_opponent_period(params, opponent_period)?;
    for (field, value) in [("lo", lo), ("hi", hi)] {
        if !value.is_finite() {
            return Err(ValidationError::NonFiniteInput { field, value }.into());
        }
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(BestResponseError::NonPositiveStep { step });
    }
    if lo > hi {
        return Err(BestResponseError::EmptyRange { lo, hi });
    }
    let floor = params.min_period();
    if lo < floor {
        return Err(ValidationError::PeriodBelowFloor {
            period: "lo",
            value: lo,
            floor,
        }
        .into());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..count {
        let t = (lo + i as f64 * step).min(hi);
        let payoff = payoff_of(params, player, t, opponent_period)
            .expect("grid points are at or above the period floor");
        match best {
            Some((_, p)) if payoff <= p => {}
            _ => best = Some((t, payoff)),
        }
    }
    Ok(best.expect("grid contains at least one point"))
}
