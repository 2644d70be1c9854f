//! Seeded samplers, the lazily drawn infinite noodle, component
//! exploration, and Monte Carlo estimators.

mod estimate;
mod explore;
mod oracle;
mod rng;

pub use estimate::{
    estimate_kappa_finite, estimate_kappa_noodle, local_profile, sample_balanced_word,
    sample_meandric_system, tally_noodle_events, EventTally, KappaEstimate, LocalProfile,
};
pub use explore::{explore_component, explore_partial_shape, ExplorationResult, Status};
pub use oracle::{LetterSource, NoodleOracle, ScriptedLetters};
pub use rng::{mix, splitmix64, RandomSource};
