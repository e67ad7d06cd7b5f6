//! Cooperation events in repeated games with incomplete information about
//! the players' discount factors.
//!
//! A finite [`BeliefSpace`] carries each player's discount factor and belief
//! kernel at every state. A [`CooperationGame`] fixes a stage game, a
//! punishment equilibrium `σ` and a cooperative target `τ`. From these the
//! crate computes the threshold functions of a conditional grim trigger
//! profile, the events on which such a profile is a Bayesian equilibrium,
//! and exact discounted payoffs that confirm it.

pub mod almost_complete;
pub mod belief_operators;
pub mod belief_space;
pub mod cooperation;
pub mod demo;
pub mod fixtures;
pub mod payoff_oracle;
pub mod rational;
pub mod stage_game;

pub use belief_operators::{ThresholdFunction, ThresholdPair};
pub use belief_space::{BeliefSpace, Event, Player};
pub use cooperation::{CooperationReport, Mode};
pub use rational::{Extended, Rational};
pub use stage_game::{CooperationGame, StageGame, ThresholdProfile};
