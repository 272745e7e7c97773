//! Solver for finite two-player sequential games where each player's strategy
//! is parameterized by a chosen probability measure space.
//!
//! A game is a fixed list of binary decision variables with a payoff table
//! over complete outcomes ([`game::OutcomeGame`]). On top of that sit
//! *measure spaces*: per-player rule sets mapping observed histories to move
//! distributions, either via free probability parameters or via deterministic
//! couplings to earlier moves ([`space::MeasureSpace`]). Fixing one space per
//! player yields a [`space::JointSpace`] under which each player's expected
//! payoff is an exact multilinear polynomial in the space's parameters
//! ([`poly::MultilinearPoly`]).
//!
//! The [`equilibrium`] module finds mutual best responses within a fixed
//! joint space by exact vertex enumeration, assembles the meta-game over
//! measure-space choices, and solves it for pure equilibria. Changing the
//! space catalog changes the equilibria: with deterministic couplings
//! available, the chain store game's monopolist rationally commits to
//! retaliation, which the classical backward-induction analysis rules out.
//!
//! All payoff and equilibrium computations use exact rational arithmetic;
//! floats appear only in the finite-difference and grid-search oracles.

pub mod equilibrium;
pub mod error;
pub mod game;
pub mod games;
pub mod poly;
pub mod rational;
pub mod space;

pub use equilibrium::{
    best_response, build_meta_game, chain_store_threshold, grid_oracle, meta_pure_equilibria,
    mixed_space_payoff, within_space_equilibria, BestResponse, EquilibriumPoint,
    EquilibriumReport, GridOptimum, MetaCell, MetaEquilibrium, MetaGame, MixedSpaceWeighting,
    ThresholdClass,
};
pub use error::Error;
pub use game::{backward_induction, Outcome, OutcomeGame, TieBreak, Variable, Violation};
pub use poly::{expected_payoff, fd_gradient, Monomial, MultilinearPoly};
pub use rational::{rat, ratio, Rational};
pub use space::{
    conditional_prob, correlation, correlation_detail, induced_outcome, outcome_distribution,
    standard_catalog, Correlation, JointSpace, MeasureSpace, ParamClass, ParamPoint, Rule,
    RuleBody,
};
