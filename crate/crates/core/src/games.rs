//! The two bundled demonstration games.

use std::collections::BTreeMap;

use crate::game::{Outcome, OutcomeGame, Variable};
use crate::rational::rat;

fn two_stage(name: &str, entries: [(u8, u8, i64, i64); 4]) -> OutcomeGame {
    let mut payoffs = BTreeMap::new();
    for (x, y, px, py) in entries {
        payoffs.insert(Outcome::new(vec![x, y]), vec![rat(px), rat(py)]);
    }
    OutcomeGame::new(
        name,
        vec!["X".into(), "Y".into()],
        vec![
            Variable {
                name: "x".into(),
                owner: "X".into(),
                stage: 1,
            },
            Variable {
                name: "y".into(),
                owner: "Y".into(),
                stage: 2,
            },
        ],
        payoffs,
    )
}

/// The chain store entry game: entrant X stays out (`x=0`) or enters
/// (`x=1`); the monopolist Y then acquiesces (`y=0`) or fights (`y=1`).
/// Payoffs are independent of `y` when no entry occurs.
pub fn chain_store() -> OutcomeGame {
    two_stage(
        "chain store",
        [(0, 0, 0, 1), (0, 1, 0, 1), (1, 0, 1, 0), (1, 1, -1, -1)],
    )
}

/// A two-stage game in which the second mover prefers to couple its move to
/// the first mover's, lifting both players above the independent-play result.
pub fn example_game() -> OutcomeGame {
    two_stage(
        "two-stage example",
        [(0, 0, 3, 1), (0, 1, 2, 2), (1, 0, 1, 4), (1, 1, 4, 3)],
    )
}
