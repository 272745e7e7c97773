//! Shared helpers for the integration tests.
#![allow(dead_code)]

use rand::Rng;
use varsolve_core::games::{chain_store, example_game};
use varsolve_core::{ratio, standard_catalog, JointSpace, OutcomeGame, ParamPoint};

pub fn bundled_games() -> Vec<OutcomeGame> {
    vec![chain_store(), example_game()]
}

/// Every joint space formed from the standard catalogs of both players.
pub fn catalog_joints(game: &OutcomeGame) -> Vec<JointSpace> {
    let first_catalog = standard_catalog(game, &game.players()[0]).unwrap();
    let second_catalog = standard_catalog(game, &game.players()[1]).unwrap();
    let mut joints = Vec::new();
    for first in &first_catalog {
        for second in &second_catalog {
            joints.push(JointSpace::new(game, vec![first.clone(), second.clone()]).unwrap());
        }
    }
    joints
}

/// A random rational point over the given parameters, values k/1000.
pub fn random_point(rng: &mut impl Rng, params: &[String]) -> ParamPoint {
    ParamPoint::from_pairs(
        params
            .iter()
            .map(|p| (p.clone(), ratio(rng.gen_range(0..=1000), 1000))),
    )
    .unwrap()
}

/// A random point bounded away from the boundary, for central differences.
pub fn random_interior_point(rng: &mut impl Rng, params: &[String]) -> ParamPoint {
    ParamPoint::from_pairs(
        params
            .iter()
            .map(|p| (p.clone(), ratio(rng.gen_range(50..=950), 1000))),
    )
    .unwrap()
}
