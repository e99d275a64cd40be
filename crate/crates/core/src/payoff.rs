//! Closed-form ownership shares, reset intervals, and payoffs, plus the
//! continuity probe used to cross-check the case regions against each other.

use crate::model::{
    classify_unchecked, validate, CaseRegion, GameParams, PayoffProfile, StrategyPair,
    ValidationError,
};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// The three finite boundaries between adjacent case regions, identified by
/// the regions they separate. The boundary's defender period, given an
/// attacker period `ta` and stage sum `s`, is `ta − s`, `ta`, and `ta + s`
/// respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseBoundary {
    Case1Case23,
    Case23Case45,
    Case45Case6,
}

impl CaseBoundary {
    /// All three boundaries, in increasing defender-period order.
    pub const ALL: [CaseBoundary; 3] = [
        CaseBoundary::Case1Case23,
        CaseBoundary::Case23Case45,
        CaseBoundary::Case45Case6,
    ];

    /// The defender period at which this boundary sits for the given
    /// attacker period.
    pub fn defender_period(&self, params: &GameParams, attacker_period: f64) -> f64 {
        let s = params.min_period();
        match self {
            CaseBoundary::Case1Case23 => attacker_period - s,
            CaseBoundary::Case23Case45 => attacker_period,
            CaseBoundary::Case45Case6 => attacker_period + s,
        }
    }
}

impl fmt::Display for CaseBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseBoundary::Case1Case23 => "Case1/Case23",
            CaseBoundary::Case23Case45 => "Case23/Case45",
            CaseBoundary::Case45Case6 => "Case45/Case6",
        })
    }
}

/// Errors from [`boundary_gap`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    /// The requested boundary's defender period falls below the period
    /// floor, so the lower region is empty and the probe is degenerate
    /// (only happens for the Case1/Case23 boundary when `attacker_period <
    /// 2·(protection + detection + reaction)`).
    #[error("boundary defender period {value} lies below the period floor {floor}")]
    BoundaryBelowFloor { value: f64, floor: f64 },
}

fn shares_case1(params: &GameParams, td: f64, ta: f64) -> (f64, f64) {
    let dr = params.detection + params.reaction;
    let share = (ta - td / 2.0 - dr) / ta;
    (share, ta)
}

fn shares_case23(params: &GameParams, td: f64, ta: f64) -> (f64, f64) {
    let s = params.min_period();
    let pp = params.protection;
    let dr = params.detection + params.reaction;
    let share = (-ta * ta - td * td + 4.0 * ta * td + 2.0 * pp * ta - 2.0 * td * dr
        + s * (dr - pp))
        / (4.0 * ta * td);
    let interval = 2.0 * ta - ((ta - s) / td) * ta;
    (share, interval)
}

fn shares_case45(params: &GameParams, td: f64, ta: f64) -> (f64, f64) {
    let s = params.min_period();
    let pp = params.protection;
    let dr = params.detection + params.reaction;
    let share =
        (ta * ta + td * td + 2.0 * pp * ta - 2.0 * td * dr + s * (dr - pp)) / (4.0 * ta * td);
    let interval = 2.0 * td - ((td - s) / ta) * td;
    (share, interval)
}

fn shares_case6(params: &GameParams, td: f64, ta: f64) -> (f64, f64) {
    let share = (ta + 2.0 * params.protection) / (2.0 * td);
    (share, td)
}

fn shares_for(params: &GameParams, td: f64, ta: f64, region: CaseRegion) -> (f64, f64) {
    match region {
        CaseRegion::Case1 => shares_case1(params, td, ta),
        CaseRegion::Case23 => shares_case23(params, td, ta),
        CaseRegion::Case45 => shares_case45(params, td, ta),
        CaseRegion::Case6 => shares_case6(params, td, ta),
    }
}

/// Long-run defender ownership share and mean reset interval for a valid
/// pair, along with the region that selected the closed form.
pub fn time_shares(
    params: &GameParams,
    pair: &StrategyPair,
) -> Result<(f64, f64, CaseRegion), ValidationError> {
    validate(params, pair)?;
    let region = classify_unchecked(params, pair);
    let (share, interval) = shares_for(params, pair.defender_period, pair.attacker_period, region);
    Ok((share, interval, region))
}

/// Both players' payoff rates for a valid pair.
///
/// The defender earns its ownership share minus the reset and check cost
/// rates; the attacker earns the complementary share minus its attack cost
/// rate.
pub fn compute_payoffs(
    params: &GameParams,
    pair: &StrategyPair,
) -> Result<PayoffProfile, ValidationError> {
    let (share, interval, region) = time_shares(params, pair)?;
    let defender_payoff =
        share - params.reset_cost / interval - params.check_cost / pair.defender_period;
    let attacker_payoff = (1.0 - share) - params.attack_cost / pair.attacker_period;
    Ok(PayoffProfile {
        defender_share: share,
        reset_interval: interval,
        defender_payoff,
        attacker_payoff,
        region,
    })
}

/// Evaluates the two closed forms that meet at `boundary` exactly at the
/// boundary's defender period and returns the signed differences
/// `(upper_share − lower_share, upper_interval − lower_interval)`.
///
/// The formulas are algebraically continuous across every boundary, so both
/// gaps should vanish to rounding error; this probe exists so that tests and
/// callers can verify that claim numerically.
pub fn boundary_gap(
    params: &GameParams,
    attacker_period: f64,
    boundary: CaseBoundary,
) -> Result<(f64, f64), BoundaryError> {
    params.validate()?;
    let floor = params.min_period();
    if !attacker_period.is_finite() {
        return Err(ValidationError::NonFiniteInput {
            field: "attacker_period",
            value: attacker_period,
        }
        .into());
    }
    if attacker_period < floor {
        return Err(ValidationError::PeriodBelowFloor {
            period: "attacker_period",
            value: attacker_period,
            floor,
        }
        .into());
    }
    let td = boundary.defender_period(params, attacker_period);
    if td < floor {
        return Err(BoundaryError::BoundaryBelowFloor { value: td, floor });
    }
    let (lower, upper) = match boundary {
        CaseBoundary::Case1Case23 => (
            shares_case1(params, td, attacker_period),
            shares_case23(params, td, attacker_period),
        ),
        CaseBoundary::Case23Case45 => (
            shares_case23(params, td, attacker_period),
            shares_case45(params, td, attacker_period),
        ),
        CaseBoundary::Case45Case6 => (
            shares_case45(params, td, attacker_period),
            shares_case6(params, td, attacker_period),
        ),
    };
    Ok((upper.0 - lower.0, upper.1 - lower.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::classify_case;
    use proptest::prelude::*;

    fn reference_params(reset_cost: f64) -> GameParams {
        GameParams {
            protection: 3.0,
            detection: 10.0,
            reaction: 1.0,
            reset_cost,
            check_cost: 5.0,
            attack_cost: 0.5,
        }
    }

    fn pair(td: f64, ta: f64) -> StrategyPair {
        StrategyPair {
            defender_period: td,
            attacker_period: ta,
        }
    }

    #[test]
    fn fast_checker_example() {
        let p = reference_params(2.0);
        let profile = compute_payoffs(&p, &pair(15.0, 30.0)).unwrap();
        assert_eq!(profile.region, CaseRegion::Case1);
        assert!((profile.defender_share - 11.5 / 30.0).abs() < 1e-15);
        assert_eq!(profile.reset_interval, 30.0);
        assert!((profile.defender_payoff - (11.5 / 30.0 - 2.0 / 30.0 - 5.0 / 15.0)).abs() < 1e-15);
        assert!((profile.attacker_payoff - 0.6).abs() < 1e-15);
    }

    #[test]
    fn slow_checker_example() {
        let p = reference_params(10.0);
        let profile = compute_payoffs(&p, &pair(60.0, 30.0)).unwrap();
        assert_eq!(profile.region, CaseRegion::Case6);
        assert!((profile.defender_share - 0.3).abs() < 1e-15);
        assert_eq!(profile.reset_interval, 60.0);
        assert!((profile.defender_payoff - 0.05).abs() < 1e-15);
        assert!((profile.attacker_payoff - (0.7 - 0.5 / 30.0)).abs() < 1e-15);
    }

    #[test]
    fn mid_band_boundary_value() {
        // Exactly at defender_period = attacker_period − s the Case23 form
        // takes over and matches the Case1 limit.
        let p = reference_params(2.0);
        let (share, _, region) = time_shares(&p, &pair(16.0, 30.0)).unwrap();
        assert_eq!(region, CaseRegion::Case23);
        assert!((share - 22.0 / 60.0).abs() < 1e-12);
        let (dshare, dinterval) = boundary_gap(&p, 30.0, CaseBoundary::Case1Case23).unwrap();
        assert!(dshare.abs() < 1e-12);
        assert!(dinterval.abs() < 1e-12);
    }

    #[test]
    fn interval_at_equal_periods_exceeds_the_common_period() {
        // At defender_period == attacker_period the mean reset interval is
        // attacker_period + s, not attacker_period: checks that land during
        // an in-progress attack miss it and push the reset a full cycle out.
        let p = reference_params(2.0);
        let (_, interval, _) = time_shares(&p, &pair(30.0, 30.0)).unwrap();
        assert!((interval - 44.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_below_floor_is_rejected() {
        let p = reference_params(2.0);
        // attacker_period < 2s makes the Case1/Case23 boundary degenerate.
        let err = boundary_gap(&p, 20.0, CaseBoundary::Case1Case23).unwrap_err();
        assert!(matches!(err, BoundaryError::BoundaryBelowFloor { .. }));
        // The other two boundaries are still fine there.
        assert!(boundary_gap(&p, 20.0, CaseBoundary::Case23Case45).is_ok());
        assert!(boundary_gap(&p, 20.0, CaseBoundary::Case45Case6).is_ok());
    }

    #[test]
    fn invalid_pair_is_rejected() {
        let p = reference_params(2.0);
        assert!(compute_payoffs(&p, &pair(10.0, 30.0)).is_err());
        assert!(compute_payoffs(&p, &pair(15.0, f64::NAN)).is_err());
    }

    proptest! {
        #[test]
        fn shares_are_probabilities_and_intervals_positive(
            protection in 0.2f64..8.0,
            detection in 0.0f64..8.0,
            reaction in 0.0f64..8.0,
            td_scale in 1.0f64..12.0,
            ta_scale in 1.0f64..12.0,
        ) {
            let params = GameParams {
                protection, detection, reaction,
                reset_cost: 0.0, check_cost: 0.0, attack_cost: 0.0,
            };
            let s = params.min_period();
            let pair = StrategyPair {
                defender_period: s * td_scale,
                attacker_period: s * ta_scale,
            };
            let (share, interval, region) = time_shares(&params, &pair).unwrap();
            prop_assert!(share > 0.0 && share < 1.0, "share {} out of range in {:?}", share, region);
            prop_assert!(interval >= pair.attacker_period.min(pair.defender_period) - 1e-9);
            prop_assert_eq!(region, classify_case(&params, &pair).unwrap());
        }

        #[test]
        fn closed_forms_are_continuous_at_case_boundaries(
            protection in 0.2f64..8.0,
            detection in 0.0f64..8.0,
            reaction in 0.0f64..8.0,
            ta_scale in 2.05f64..12.0,
        ) {
            let params = GameParams {
                protection, detection, reaction,
                reset_cost: 0.0, check_cost: 0.0, attack_cost: 0.0,
            };
            let ta = params.min_period() * ta_scale;
            for boundary in CaseBoundary::ALL {
                let (dshare, dinterval) = boundary_gap(&params, ta, boundary).unwrap();
                prop_assert!(dshare.abs() < 1e-9, "{} share gap {}", boundary, dshare);
                prop_assert!(dinterval.abs() < 1e-9, "{} interval gap {}", boundary, dinterval);
            }
        }

        #[test]
        fn higher_costs_never_help(
            td_scale in 1.0f64..6.0,
            ta_scale in 1.0f64..6.0,
            extra in 0.1f64..5.0,
        ) {
            let base = reference_params(2.0);
            let s = base.min_period();
            let pr = StrategyPair { defender_period: s * td_scale, attacker_period: s * ta_scale };
            let before = compute_payoffs(&base, &pr).unwrap();
            let mut costlier = base;
            costlier.reset_cost += extra;
            costlier.check_cost += extra;
            costlier.attack_cost += extra;
            let after = compute_payoffs(&costlier, &pr).unwrap();
            prop_assert!(after.defender_payoff <= before.defender_payoff);
            prop_assert!(after.attacker_payoff <= before.attacker_payoff);
            // Shares and intervals do not depend on costs at all.
            prop_assert_eq!(after.defender_share, before.defender_share);
            prop_assert_eq!(after.reset_interval, before.reset_interval);
        }
    }
}
