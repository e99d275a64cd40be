//! Discrete-event Monte Carlo oracle for the periodic game. Instead of the
//! closed-form overlap algebra it replays the actual timeline — staggered
//! check and launch clocks, attack completion after the protection delay,
//! detection, and reset — and measures ownership shares directly. Used to
//! cross-validate the analytic payoff engine.

use crate::model::{validate, GameParams, StrategyPair, ValidationError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Attacker periods discarded at the start of every replication so the
/// measured window starts from an already-mixed state.
pub const WARMUP_PERIODS: u32 = 10;

/// Simulation request: game parameters, the strategy pair to play, and the
/// sampling plan.
///
/// Each replication draws independent uniform phases for both clocks and
/// runs `horizon_periods` attacker periods, of which the first
/// [`WARMUP_PERIODS`] are discarded. Replication `i` uses stream `i` of a
/// generator keyed by `seed`, so results are reproducible for a fixed
/// config and unrelated across different seeds.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: GameParams,
    pub pair: StrategyPair,
    pub horizon_periods: u32,
    pub replications: u32,
    pub seed: u64,
}

/// Aggregated simulation output.
///
/// `defender_share` is the mean across replications of the fraction of
/// measured time the defender owned the resource; `reset_interval` is the
/// total measured time divided by the total number of detections (infinite
/// when nothing was ever detected). Payoffs are computed from these
/// estimates with the same cost terms the analytic engine uses. Counters
/// are totals across replications, restricted to the measured window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub defender_share: f64,
    pub reset_interval: f64,
    pub defender_payoff: f64,
    pub attacker_payoff: f64,
    pub resets: u64,
    pub checks: u64,
    pub attacks_launched: u64,
    pub attacks_voided: u64,
    /// 95% confidence half-width for `defender_share` (0 when only one
    /// replication ran).
    pub share_ci_halfwidth: f64,
}

/// Errors from [`simulate`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error(
        "horizon of {horizon_periods} attacker periods leaves nothing to \
         measure after the {warmup_periods}-period warm-up"
    )]
    HorizonTooShort {
        horizon_periods: u32,
        warmup_periods: u32,
    },
    #[error("at least one replication is required")]
    NoReplications,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SystemState {
    /// Defender owns, no attack underway.
    Safe,
    /// Defender owns, an attack completes at the pending completion time.
    AttackInProgress,
    /// Attacker owns, not yet detected.
    Compromised,
    /// Attacker owns, detected; the reset lands at the pending reset time.
    Resetting,
}

impl SystemState {
    fn defender_owns(self) -> bool {
        matches!(self, SystemState::Safe | SystemState::AttackInProgress)
    }
}

/// Tie-break order for simultaneous events: an attack completes before the
/// check that would catch it, a check fires before a launch at the same
/// instant, and a reset lands only after any launch at its exact effective
/// time (which is therefore still voided).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EventKind {
    Complete,
    Check,
    Launch,
    Reset,
}

struct RepOutcome {
    share: f64,
    checks: u64,
    resets: u64,
    launches: u64,
    voided: u64,
}

fn integrate(
    owned: &mut f64,
    t_now: &mut f64,
    defender_owns: bool,
    to: f64,
    warmup: f64,
    end: f64,
) {
    let lo = t_now.max(warmup);
    let hi = to.min(end);
    if hi > lo && defender_owns {
        *owned += hi - lo;
    }
    *t_now = to;
}

fn simulate_rep(
    params: &GameParams,
    pair: &StrategyPair,
    horizon_periods: u32,
    rng: &mut ChaCha8Rng,
) -> RepOutcome {
    let td = pair.defender_period;
    let ta = pair.attacker_period;
    let dr = params.detection + params.reaction;
    let phi_d = rng.gen::<f64>() * td;
    let phi_a = rng.gen::<f64>() * ta;
    let warmup = f64::from(WARMUP_PERIODS) * ta;
    let end = f64::from(horizon_periods) * ta;

    let mut state = SystemState::Safe;
    let mut completion: Option<f64> = None;
    let mut reset_at: Option<f64> = None;
    // Launches strictly after a detection and up to (inclusive) the matching
    // reset are wasted: the system is already being cleaned.
    let mut void_window: Option<(f64, f64)> = None;
    let mut k_check: u64 = 0;
    let mut k_launch: u64 = 0;
    let mut t_now = 0.0_f64;
    let mut owned = 0.0_f64;
    let (mut checks, mut resets, mut launches, mut voided) = (0u64, 0u64, 0u64, 0u64);

    loop {
        let next_check = phi_d + k_check as f64 * td;
        let next_launch = phi_a + k_launch as f64 * ta;
        let mut next = (next_check, EventKind::Check);
        if (next_launch, EventKind::Launch) < next {
            next = (next_launch, EventKind::Launch);
        }
        if let Some(t) = completion {
            if (t, EventKind::Complete) < next {
                next = (t, EventKind::Complete);
            }
        }
        if let Some(t) = reset_at {
            if (t, EventKind::Reset) < next {
                next = (t, EventKind::Reset);
            }
        }
        let (t_ev, kind) = next;
        if t_ev >= end {
            integrate(
                &mut owned,
                &mut t_now,
                state.defender_owns(),
                end,
                warmup,
                end,
            );
            break;
        }
        integrate(
            &mut owned,
            &mut t_now,
            state.defender_owns(),
            t_ev,
            warmup,
            end,
        );
        let measured = warmup <= t_ev;
        match kind {
            EventKind::Complete => {
                state = SystemState::Compromised;
                completion = None;
            }
            EventKind::Check => {
                k_check += 1;
                if measured {
                    checks += 1;
                }
                if state == SystemState::Compromised {
                    if measured {
                        resets += 1;
                    }
                    if dr == 0.0 {
                        state = SystemState::Safe;
                        void_window = Some((t_ev, t_ev));
                    } else {
                        state = SystemState::Resetting;
                        reset_at = Some(t_ev + dr);
                        void_window = Some((t_ev, t_ev + dr));
                    }
                }
            }
            EventKind::Launch => {
                k_launch += 1;
                if measured {
                    launches += 1;
                }
                let in_window =
                    void_window.is_some_and(|(start, stop)| start < t_ev && t_ev <= stop);
                if in_window {
                    if measured {
                        voided += 1;
                    }
                } else if state == SystemState::Safe {
                    state = SystemState::AttackInProgress;
                    completion = Some(t_ev + params.protection);
                }
                // Launching while already in, mid-completion, or while the
                // opponent is resetting outside the window costs the
                // attacker its fee but changes nothing.
            }
            EventKind::Reset => {
                state = SystemState::Safe;
                reset_at = None;
            }
        }
    }

    let horizon = end - warmup;
    RepOutcome {
        share: owned / horizon,
        checks,
        resets,
        launches,
        voided,
    }
}

/// Runs the event-loop simulation described by `config` and aggregates the
/// replications.
///
/// Deterministic: the same config always produces bitwise-identical output.
pub fn simulate(config: &SimConfig) -> Result<SimResult, SimError> {
    validate(&config.params, &config.pair)?;
    if config.horizon_periods <= WARMUP_PERIODS {
        return Err(SimError::HorizonTooShort {
            horizon_periods: config.horizon_periods,
            warmup_periods: WARMUP_PERIODS,
        });
    }
    if config.replications == 0 {
        return Err(SimError::NoReplications);
    }

    let mut shares = Vec::with_capacity(config.replications as usize);
    let (mut checks, mut resets, mut launches, mut voided) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..config.replications {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(u64::from(i));
        let rep = simulate_rep(
            &config.params,
            &config.pair,
            config.horizon_periods,
            &mut rng,
        );
        shares.push(rep.share);
        checks += rep.checks;
        resets += rep.resets;
        launches += rep.launches;
        voided += rep.voided;
    }

    let n = shares.len() as f64;
    let mean = shares.iter().sum::<f64>() / n;
    let ci = if shares.len() > 1 {
        let var = shares.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        1.96 * (var / n).sqrt()
    } else {
        0.0
    };
    let measured = f64::from(config.horizon_periods - WARMUP_PERIODS) * config.pair.attacker_period;
    let reset_interval = if resets > 0 {
        n * measured / resets as f64
    } else {
        f64::INFINITY
    };
    let defender_payoff = mean
        - config.params.reset_cost / reset_interval
        - config.params.check_cost / config.pair.defender_period;
    let attacker_payoff = (1.0 - mean) - config.params.attack_cost / config.pair.attacker_period;

    Ok(SimResult {
        defender_share: mean,
        reset_interval,
        defender_payoff,
        attacker_payoff,
        resets,
        checks,
        attacks_launched: launches,
        attacks_voided: voided,
        share_ci_halfwidth: ci,
    })
}
