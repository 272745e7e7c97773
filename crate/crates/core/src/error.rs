//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by solver operations.
///
/// Game-structure violations found by [`crate::game::OutcomeGame::validate`]
/// are reported separately as [`crate::game::Violation`] lists; this type
/// covers misuse of otherwise valid inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown player `{0}`")]
    UnknownPlayer(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown space label `{0}`")]
    UnknownSpace(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("outcome assigns {got} variables, game has {expected}")]
    IncompleteOutcome { expected: usize, got: usize },

    #[error("no payoff entry for outcome {0}")]
    MissingPayoff(String),

    #[error("missing value for parameter `{0}`")]
    MissingParameter(String),

    #[error("parameter `{param}` value {value} outside [0,1]")]
    ParameterOutOfRange { param: String, value: String },

    #[error("history assigns {got} variables, expected the {expected} earlier variables")]
    IncompleteHistory { expected: usize, got: usize },

    #[error("space `{label}`: {message}")]
    InvalidSpace { label: String, message: String },

    #[error("parameter `{param}` is not owned by the opponent of `{player}`")]
    ParameterMismatch { param: String, player: String },

    #[error("weights for player `{player}` sum to {sum}, expected 1")]
    WeightSum { player: String, sum: String },

    #[error("weight for space `{label}` is {value}, outside [0,1]")]
    WeightOutOfRange { label: String, value: String },

    #[error("meta-game cell ({x}, {y}) is ambiguous: {detail}")]
    AmbiguousCell { x: String, y: String, detail: String },

    #[error("grid step {0} does not divide 1 evenly")]
    BadGridStep(f64),

    #[error("invalid game: {0}")]
    InvalidGame(String),
}
