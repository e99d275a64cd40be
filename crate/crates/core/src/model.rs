//! Core domain types: game parameters, strategy pairs, case regions, and
//! input validation shared by every other module.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Timing and cost parameters of the game.
///
/// Times are in arbitrary but consistent units. Costs are charged per move
/// and enter the payoffs as rates (cost divided by the mover's period), so
/// they share units with the ownership fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameParams {
    /// Time an attack needs after launch before the resource is compromised.
    pub protection: f64,
    /// Time from a detecting check until the compromise is recognized.
    pub detection: f64,
    /// Additional time after recognition until the reset takes effect.
    pub reaction: f64,
    /// Defender's cost per effective reset.
    #[serde(default)]
    pub reset_cost: f64,
    /// Defender's cost per check.
    #[serde(default)]
    pub check_cost: f64,
    /// Attacker's cost per launched attack.
    #[serde(default)]
    pub attack_cost: f64,
}

impl GameParams {
    /// Lower bound on both players' periods: the full protect-detect-react
    /// span. Periods shorter than this would overlap their own cleanup and
    /// the closed forms (and the game definition) do not admit them.
    pub fn min_period(&self) -> f64 {
        self.protection + self.detection + self.reaction
    }

    /// Checks that all fields are finite, `protection` is strictly positive,
    /// and the remaining times and costs are non-negative.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let fields = [
            ("protection", self.protection),
            ("detection", self.detection),
            ("reaction", self.reaction),
            ("reset_cost", self.reset_cost),
            ("check_cost", self.check_cost),
            ("attack_cost", self.attack_cost),
        ];
        for (field, value) in fields {
            if !value.is_finite() {
                return Err(ValidationError::NonFiniteInput { field, value });
            }
        }
        if self.protection <= 0.0 {
            return Err(ValidationError::NonPositiveProtection {
                value: self.protection,
            });
        }
        for (field, value) in [
            ("detection", self.detection),
            ("reaction", self.reaction),
            ("reset_cost", self.reset_cost),
            ("check_cost", self.check_cost),
            ("attack_cost", self.attack_cost),
        ] {
            if value < 0.0 {
                return Err(ValidationError::NegativeField { field, value });
            }
        }
        Ok(())
    }
}

/// One period choice per player.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyPair {
    pub defender_period: f64,
    pub attacker_period: f64,
}

/// The four distinct closed-form regimes of the game, keyed by where the
/// defender's period falls relative to the attacker's.
///
/// With `s = protection + detection + reaction`:
///
/// * [`CaseRegion::Case1`] — `defender_period < attacker_period − s`: every
///   attack interval contains a full check-detect-reset cycle.
/// * [`CaseRegion::Case23`] — `attacker_period − s ≤ defender_period <
///   attacker_period`: the cleanup spills into the next attack interval part
///   of the time (two sub-configurations that share one closed form).
/// * [`CaseRegion::Case45`] — `attacker_period ≤ defender_period <
///   attacker_period + s`: the attacker moves once or twice per check
///   interval (again two sub-configurations with a common closed form).
/// * [`CaseRegion::Case6`] — `defender_period ≥ attacker_period + s`: every
///   check interval contains a completed attack.
///
/// Boundaries are classified into the higher region (lower-inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseRegion {
    Case1,
    Case23,
    Case45,
    Case6,
}

impl fmt::Display for CaseRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CaseRegion::Case1 => "Case1",
            CaseRegion::Case23 => "Case23",
            CaseRegion::Case45 => "Case45",
            CaseRegion::Case6 => "Case6",
        };
        f.write_str(name)
    }
}

/// The two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Defender,
    Attacker,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Defender => "defender",
            Player::Attacker => "attacker",
        })
    }
}

/// Joint outcome of one strategy pair: long-run ownership share, mean reset
/// interval, and both players' payoff rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffProfile {
    /// Long-run fraction of time the defender owns the resource.
    pub defender_share: f64,
    /// Long-run mean time between two consecutive effective resets.
    pub reset_interval: f64,
    /// `defender_share − reset_cost/reset_interval − check_cost/defender_period`.
    pub defender_payoff: f64,
    /// `(1 − defender_share) − attack_cost/attacker_period`.
    pub attacker_payoff: f64,
    /// Region the pair falls in.
    pub region: CaseRegion,
}

/// Rejected inputs. Checks run in the order the variants are listed here:
/// finiteness first, then the protection sign, then other signs, then the
/// period floor.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("{field} must be finite, got {value}")]
    NonFiniteInput { field: &'static str, value: f64 },
    #[error("protection must be > 0, got {value}")]
    NonPositiveProtection { value: f64 },
    #[error("{field} must be >= 0, got {value}")]
    NegativeField { field: &'static str, value: f64 },
    #[error("{period} must be at least the period floor {floor} (protection + detection + reaction), got {value}")]
    PeriodBelowFloor {
        period: &'static str,
        value: f64,
        floor: f64,
    },
}

/// Validates a parameter set together with a strategy pair.
///
/// Both periods must be finite and at least [`GameParams::min_period`].
pub fn validate(params: &GameParams, pair: &StrategyPair) -> Result<(), ValidationError> {
    params.validate()?;
    let floor = params.min_period();
    for (period, value) in [
        ("defender_period", pair.defender_period),
        ("attacker_period", pair.attacker_period),
    ] {
        if !value.is_finite() {
            return Err(ValidationError::NonFiniteInput {
                field: period,
                value,
            });
        }
        if value < floor {
            return Err(ValidationError::PeriodBelowFloor {
                period,
                value,
                floor,
            });
        }
    }
    Ok(())
}

/// Classifies a valid pair into its case region.
///
/// Each boundary belongs to the higher region, so `defender_period ==
/// attacker_period − s` is already [`CaseRegion::Case23`], and so on.
pub fn classify_case(
    params: &GameParams,
    pair: &StrategyPair,
) -> Result<CaseRegion, ValidationError> {
    validate(params, pair)?;
    Ok(classify_unchecked(params, pair))
}

/// Classification without validation; callers must have validated already.
pub(crate) fn classify_unchecked(params: &GameParams, pair: &StrategyPair) -> CaseRegion {
    let s = params.min_period();
    let td = pair.defender_period;
    let ta = pair.attacker_period;
    if td < ta - s {
        CaseRegion::Case1
    } else if td < ta {
        CaseRegion::Case23
    } else if td < ta + s {
        CaseRegion::Case45
    } else {
        CaseRegion::Case6
    }
}
