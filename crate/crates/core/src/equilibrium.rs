//! Approximate-equilibrium search: lays a grid over both players' periods,
//! intersects the two best-response maps, and keeps the pairs neither player
//! can improve on by more than a tolerance. Deviation gaps are re-measured
//! against the raw payoff surface over the whole grid, so acceptance of a
//! candidate never depends on the best-response module being right.

use crate::best_response::best_response;
use crate::model::{GameParams, Player, StrategyPair, ValidationError};
use crate::payoff::compute_payoffs;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// A grid pair that both best-response maps point at, with its verified
/// unilateral-deviation gaps and payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumCandidate {
    pub attacker_period: f64,
    pub defender_period: f64,
    /// Most the defender could gain by moving to any other grid period.
    pub defender_deviation_gap: f64,
    /// Most the attacker could gain by moving to any other grid period.
    pub attacker_deviation_gap: f64,
    pub defender_payoff: f64,
    pub attacker_payoff: f64,
}

impl EquilibriumCandidate {
    /// The larger of the two deviation gaps; the sort key of the result
    /// list.
    pub fn max_gap(&self) -> f64 {
        self.defender_deviation_gap.max(self.attacker_deviation_gap)
    }
}

/// Errors from [`find_equilibria`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("search window [{floor}, {t_max}] is narrower than one grid step ({grid_step})")]
    EmptyGrid {
        t_max: f64,
        floor: f64,
        grid_step: f64,
    },
    #[error("grid step must be positive and finite, got {step}")]
    NonPositiveStep { step: f64 },
    #[error("deviation tolerance must be non-negative, got {eps}")]
    NegativeTolerance { eps: f64 },
}

/// Searches the period grid `floor, floor + grid_step, …, ≤ t_max` for
/// ε-equilibria.
///
/// A pair qualifies when each player's best response to the other lands
/// within one grid step of the pair, and survives when neither player can
/// improve their payoff by more than `eps` by deviating anywhere on the
/// grid. Passing `eps = f64::INFINITY` disables the gap filter and returns
/// every best-response intersection with its measured gaps. Candidates come
/// back sorted by worst-case gap, best first; the result is deterministic
/// for fixed inputs.
pub fn find_equilibria(
    params: &GameParams,
    t_max: f64,
    grid_step: f64,
    eps: f64,
) -> Result<Vec<EquilibriumCandidate>, EquilibriumError> {
    params.validate()?;
    if !t_max.is_finite() {
        return Err(ValidationError::NonFiniteInput {
            field: "t_max",
            value: t_max,
        }
        .into());
    }
    if !grid_step.is_finite() || grid_step <= 0.0 {
        return Err(EquilibriumError::NonPositiveStep { step: grid_step });
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(EquilibriumError::NegativeTolerance { eps });
    }
    let floor = params.min_period();
    if t_max - floor < grid_step {
        return Err(EquilibriumError::EmptyGrid {
            t_max,
            floor,
            grid_step,
        });
    }

    let count = ((t_max - floor) / grid_step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|i| floor + i as f64 * grid_step).collect();

    let payoff_at = |ti_d: f64, ti_a: f64| {
        compute_payoffs(
            params,
            &StrategyPair {
                defender_period: ti_d,
                attacker_period: ti_a,
            },
        )
        .expect("grid periods are at or above the period floor")
    };
    let br_d: Vec<f64> = grid
        .iter()
        .map(|&ta| {
            best_response(params, Player::Defender, ta)
                .expect("grid periods are valid opponent periods")
                .best
                .value
        })
        .collect();
    let br_a: Vec<f64> = grid
        .iter()
        .map(|&td| {
            best_response(params, Player::Attacker, td)
                .expect("grid periods are valid opponent periods")
                .best
                .value
        })
        .collect();

    // Full-grid payoff maxima, computed lazily: one column scan per distinct
    // attacker period among the raw pairs, one row scan per defender period.
    let mut defender_col_max: HashMap<usize, f64> = HashMap::new();
    let mut attacker_row_max: HashMap<usize, f64> = HashMap::new();

    let mut candidates = Vec::new();
    for (i, &ta) in grid.iter().enumerate() {
        for (j, &td) in grid.iter().enumerate() {
            if (br_d[i] - td).abs() > grid_step || (br_a[j] - ta).abs() > grid_step {
                continue;
            }
            let here = payoff_at(td, ta);
            let best_d = *defender_col_max.entry(i).or_insert_with(|| {
                grid.iter()
                    .map(|&alt| payoff_at(alt, ta).defender_payoff)
                    .fold(f64::NEG_INFINITY, f64::max)
            });
            let best_a = *attacker_row_max.entry(j).or_insert_with(|| {
                grid.iter()
                    .map(|&alt| payoff_at(td, alt).attacker_payoff)
                    .fold(f64::NEG_INFINITY, f64::max)
            });
            let candidate = EquilibriumCandidate {
                attacker_period: ta,
                defender_period: td,
                defender_deviation_gap: best_d - here.defender_payoff,
                attacker_deviation_gap: best_a - here.attacker_payoff,
                defender_payoff: here.defender_payoff,
                attacker_payoff: here.attacker_payoff,
            };
            if candidate.defender_deviation_gap <= eps && candidate.attacker_deviation_gap <= eps {
                candidates.push(candidate);
            }
        }
    }

    candidates.sort_by(|a, b| {
        a.max_gap()
            .total_cmp(&b.max_gap())
            .then(a.attacker_period.total_cmp(&b.attacker_period))
            .then(a.defender_period.total_cmp(&b.defender_period))
    });
    Ok(candidates)
}
