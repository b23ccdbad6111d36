//! Numerical toolkit for the two-user weak Gaussian interference channel.
//!
//! The crate computes Gaussian-codebook achievable rates in closed form,
//! solves the expanded Han-Kobayashi linear program and its reduced
//! equality forms, traces the rate-region boundary both by a weighted-sum
//! sweep and by incremental power reallocation, and computes the two-phase
//! time-sharing envelope.
//!
//! Rates are in bits per channel use throughout. Both receivers have unit
//! noise variance; `a` and `b` are the cross power gains into `Y2` and `Y1`
//! respectively.

pub mod channel;
pub mod converse;
pub mod envelope;
pub mod hk;
pub mod rates;
pub mod simplex;
pub mod trace;

pub use channel::{
    step_metrics, ChannelParams, Direction, PowerSplit, RateQuadruple, Reallocation, StepMetrics,
};
pub use hk::{
    build_hk_constraints, reduced_region_value, solve_hk_lp, verify_reduction_chain,
    HkConstraintSet, LpSolution, LpStatus,
};
pub use rates::{corner_max_r1, gaussian_mi, strategy_rates, CodingStrategy, Message, MessageSet, Receiver};
pub use trace::{
    step_candidates, sweep_boundary, trace_incremental, verify_theorem10, BoundarySample,
    StepCandidateSet,
};

use thiserror::Error;

/// Errors shared by the closed-form layers of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A reallocation would push a message power below zero.
    #[error("rejected move: {0} would become negative ({1})")]
    RejectedMove(&'static str, f64),

    /// Step endpoints do not describe a counterclockwise lower-boundary move.
    #[error("not a counterclockwise step: dr1 = {dr1}, dr2 = {dr2}")]
    NotCounterclockwise { dr1: f64, dr2: f64 },

    /// Signal and conditioning sets passed to the MI evaluator overlap.
    #[error("signal and conditioning sets overlap")]
    OverlappingSets,

    /// The MI evaluator needs a non-empty signal set.
    #[error("empty signal set")]
    EmptySignal,

    /// Channel gains outside the weak-interference range were rejected.
    #[error("cross gains (a = {a}, b = {b}) are outside the weak range [0, 1)")]
    NonWeak { a: f64, b: f64 },

    /// A channel parameter is negative or non-finite.
    #[error("invalid channel parameter {0} = {1}")]
    InvalidParam(&'static str, f64),

    /// Message powers do not add up to the user budget.
    #[error("power split violates budget of user {user}: sum = {sum}, budget = {budget}")]
    BudgetMismatch { user: u8, sum: f64, budget: f64 },

    /// No candidate reallocation yields a valid counterclockwise step.
    #[error("no candidate reallocation yields a counterclockwise step")]
    EmptyCandidateSet,

    /// The linear program has no feasible point.
    #[error("linear program infeasible")]
    Infeasible,

    /// The simplex solver exceeded its pivot budget.
    #[error("simplex pivot limit exceeded")]
    PivotLimit,
}

pub type Result<T> = std::result::Result<T, Error>;

/// The rate function `0.5 * log2(1 + signal / noise)` in bits.
///
/// `noise` is the total noise-plus-interference power including the unit
/// receiver noise. Zero signal gives exactly zero; zero noise with positive
/// signal gives infinity, which callers guard against by construction.
pub fn rate_fn(signal: f64, noise: f64) -> f64 {
    if signal == 0.0 {
        return 0.0;
    }
    0.5 * (1.0 + signal / noise).log2()
}
