//! Analytic and simulation engine for a two-player timing game between a
//! periodic defender and a periodic attacker contending over one resource.
//!
//! The attacker launches an attack every `attacker_period` time units; an
//! attack needs `protection` time to complete, after which the attacker
//! silently owns the resource. The defender checks the resource every
//! `defender_period` units; a check only recognizes a *completed* compromise,
//! and recognition plus cleanup take `detection + reaction` time, after which
//! the defender owns the resource again. Both players pay per-move costs and
//! collect payoff proportional to the long-run fraction of time they own the
//! resource. Initial phases are uniformly random, which makes the long-run
//! averages closed-form per case region.
//!
//! The crate provides:
//!
//! * [`model`] — shared parameter/strategy types and input validation,
//! * [`payoff`] — closed-form ownership shares, reset intervals, and payoffs,
//! * [`sim`] — an independent event-loop Monte Carlo estimator of the same
//!   quantities,
//! * [`best_response`] — candidate enumeration (closed forms, stationary
//!   points, case boundaries) and grid verification,
//! * [`equilibrium`] — ε-equilibrium search over a period grid,
//! * [`veris`] — ingestion of VERIS-style incident records and the
//!   incident-timing statistics that motivate the model's time scales.

pub mod best_response;
pub mod equilibrium;
pub mod model;
pub mod payoff;
pub mod sim;
pub mod veris;

pub use best_response::{
    attacker_case23_stationarity, attacker_case45_stationarity, best_response, brute_force_argmax,
    defender_case23_stationarity, defender_case45_stationarity, BestResponseError,
    BestResponseResult, Candidate, CandidateSource,
};
pub use equilibrium::{find_equilibria, EquilibriumCandidate, EquilibriumError};
pub use model::{
    classify_case, validate, CaseRegion, GameParams, PayoffProfile, Player, StrategyPair,
    ValidationError,
};
pub use payoff::{boundary_gap, compute_payoffs, time_shares, BoundaryError, CaseBoundary};
pub use sim::{simulate, SimConfig, SimError, SimResult};
pub use veris::{
    extract_durations, filter_by_actions, filter_malicious, parse_incidents, timing_stats,
    ActionCategory, ConversionTable, DurationSample, ExclusionCounts, ExtractOptions, HistogramBin,
    IncidentRecord, ParsedIncidents, RawTiming, SkipReport, StatsError, TimelineField, TimingStats,
    VerisError,
};
