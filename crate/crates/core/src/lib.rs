//! Solvers for an anti-jamming dynamic psychological game.
//!
//! A soldier walks past `X` battlefield devices and must connect to exactly
//! `J` of them; a jammer with a finite power budget decides where to attack.
//! The crate provides the channel model, the game tree, frustration-based
//! psychological utilities, Nash and psychological equilibrium solvers,
//! Bayesian learning of self-confirming equilibria and an experiment harness.

pub mod channel;
pub mod equilibrium;
pub mod error;
pub mod experiment;
pub mod game;
pub mod learning;
pub mod psychology;
pub mod quadrature;

pub use error::{Error, Result};
pub use game::{
    AttackerAction, BeliefSystem, FeasibleActions, Game, GameConfig, History, MixedAction, Player,
    SoldierAction, StageState, StrategyMap, StrategyProfile,
};

#[cfg(test)]
pub(crate) mod testutil;
