//! Bayesian belief learning in the repeated game.
//!
//! Both players observe every realized history. Beliefs about an opponent's
//! action at a state are posterior frequencies over those observations; each
//! learner best-responds to them with belief-based psychological values and
//! play is repeated until the beliefs settle.

mod counters;
mod response;
mod run;

pub use counters::{init_priors, update_posteriors, PosteriorCounters};
pub use response::{
    belief_values, best_response_step, detect_psce, epsilon_like, reached_states, BeliefValues,
    PsceReport, PSCE_GAIN_TOL,
};
pub use run::{replay, run_learning, IterationRecord, LearningConfig, LearningTrace, Opponent};
