//! Schedule generators and adaptive baseline policies.
//!
//! The randomized and deterministic protocols emit a complete [`Schedule`]
//! up front. Decay and the SINR-style broadcast decide slot by slot and are
//! driven by [`crate::sim::run_adaptive`].
//!
//! [`Schedule`]: crate::schedule::Schedule

pub mod decay;
pub mod deterministic;
pub mod expectation;
pub mod randomized;
pub mod sinr;

pub use decay::{decay_period, DecayState};
pub use deterministic::{
    deterministic_schedule, deterministic_schedule_with, DeterministicOptions, DeterministicOutcome,
    ExpectationMode, GreedyStep, SlotSummary,
};
pub use expectation::{
    exact_selection_probability, mc_selection_probability, PartialAssignment, DEFAULT_MC_SAMPLES,
    K_EXACT,
};
pub use randomized::{randomized_schedule, RandomizedParams};
pub use sinr::sinr_step;
