//! Property tests for the measure-space and polynomial invariants.

mod common;

use std::collections::BTreeMap;

use common::{bundled_games, catalog_joints, random_point};
use num::{One, Signed};
use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use varsolve_core::games::chain_store;
use varsolve_core::{
    backward_induction, conditional_prob, correlation, expected_payoff, outcome_distribution,
    rat, ratio, standard_catalog, within_space_equilibria, JointSpace, Outcome, OutcomeGame,
    ParamPoint, Rational, TieBreak, Variable,
};

fn unit_rational() -> impl Strategy<Value = Rational> {
    (0i64..=1000).prop_map(|n| ratio(n, 1000))
}

fn point_for(params: Vec<String>) -> impl Strategy<Value = ParamPoint> {
    vec(unit_rational(), params.len()).prop_map(move |values| {
        ParamPoint::from_pairs(params.iter().cloned().zip(values)).unwrap()
    })
}

/// A random well-formed two-player game over 1..=3 binary variables.
fn arb_game() -> impl Strategy<Value = OutcomeGame> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                vec(0usize..2, n),
                vec((-5i64..=5, -5i64..=5), 1usize << n),
            )
        })
        .prop_map(|(owners, payoff_rows)| {
            let players = vec!["X".to_string(), "Y".to_string()];
            let variables: Vec<Variable> = owners
                .iter()
                .enumerate()
                .map(|(i, &owner)| Variable {
                    name: format!("v{i}"),
                    owner: players[owner].clone(),
                    stage: (i + 1) as u32,
                })
                .collect();
            let n = variables.len();
            let mut payoffs = BTreeMap::new();
            for (code, &(first, second)) in payoff_rows.iter().enumerate() {
                let bits: Vec<u8> = (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect();
                payoffs.insert(Outcome::new(bits), vec![rat(first), rat(second)]);
            }
            OutcomeGame::new("random", players, variables, payoffs)
        })
}

proptest! {
    /// Induced outcome distributions are probability distributions.
    #[test]
    fn distribution_sums_to_one(
        point in point_for(vec!["p".into(), "q".into(), "r".into()]),
        joint_idx in 0usize..6,
    ) {
        let games = bundled_games();
        let game = &games[joint_idx / 3];
        let joint = &catalog_joints(game)[joint_idx % 3];
        let distribution = outcome_distribution(joint, &point).unwrap();
        let total: Rational = distribution.values().sum();
        prop_assert_eq!(total, rat(1));
        for probability in distribution.values() {
            prop_assert!(!probability.is_negative() && *probability <= rat(1));
        }
    }

    /// Copy couplings pin the correlation to +1 and flips to -1 whenever
    /// the source has positive variance; everything stays within [-1, 1].
    #[test]
    fn coupling_correlations_are_extreme(p in 1i64..1000, q in unit_rational(), r in unit_rational()) {
        let game = chain_store();
        let joints = catalog_joints(&game);
        let point = ParamPoint::from_pairs([
            ("p".to_string(), ratio(p, 1000)),
            ("q".to_string(), q),
            ("r".to_string(), r),
        ])
        .unwrap();
        // Catalog order: Y0, Y+, Y-.
        prop_assert_eq!(correlation(&joints[1], &point, "x", "y").unwrap(), 1.0);
        prop_assert_eq!(correlation(&joints[2], &point, "x", "y").unwrap(), -1.0);
        let free = correlation(&joints[0], &point, "x", "y").unwrap();
        prop_assert!((-1.0..=1.0).contains(&free));
    }

    /// Deterministic rules ignore every parameter.
    #[test]
    fn deterministic_rules_are_parameter_free(
        first in point_for(vec!["p".into()]),
        second in point_for(vec!["p".into()]),
        bit in 0u8..2,
    ) {
        let game = chain_store();
        let joints = catalog_joints(&game);
        for joint in &joints[1..] {
            let a = conditional_prob(joint, "y", &[bit], &first).unwrap();
            let b = conditional_prob(joint, "y", &[bit], &second).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    /// The copy coupling never puts mass off the diagonal.
    #[test]
    fn copy_coupling_is_diagonal(p in unit_rational()) {
        let game = chain_store();
        let joint = &catalog_joints(&game)[1];
        let point = ParamPoint::from_pairs([("p".to_string(), p)]).unwrap();
        let distribution = outcome_distribution(joint, &point).unwrap();
        prop_assert_eq!(&distribution[&Outcome::new(vec![0, 1])], &rat(0));
        prop_assert_eq!(&distribution[&Outcome::new(vec![1, 0])], &rat(0));
    }

    /// Expected-payoff polynomials are affine in each parameter: the exact
    /// second difference vanishes.
    #[test]
    fn second_differences_vanish(
        point in point_for(vec!["p".into(), "q".into(), "r".into()]),
        joint_idx in 0usize..6,
    ) {
        let games = bundled_games();
        let game = &games[joint_idx / 3];
        let joint = &catalog_joints(game)[joint_idx % 3];
        for player in game.players() {
            let poly = expected_payoff(game, joint, player).unwrap();
            for param in poly.params() {
                let at = |v: Rational| {
                    poly.substitute(&param, &v).eval(&point).unwrap()
                };
                let second = at(rat(0)) + at(rat(1)) - rat(2) * at(ratio(1, 2));
                prop_assert_eq!(second, rat(0));
            }
        }
    }

    /// Backward induction is a mutual sequential best response: no owner
    /// gains by flipping its move at any reached history, with play
    /// continuing by induction. Checked against an independent recursion.
    #[test]
    fn backward_induction_is_deviation_proof(game in arb_game()) {
        game.validate().unwrap();
        let (outcome, payoffs) = backward_induction(&game, TieBreak::FavorZero).unwrap();

        fn continuation(game: &OutcomeGame, history: Vec<u8>) -> Vec<Rational> {
            if history.len() == game.variables().len() {
                return game.leaf_payoffs(&Outcome::new(history)).unwrap();
            }
            let owner = game
                .player_index(&game.variables()[history.len()].owner)
                .unwrap();
            let mut low = history.clone();
            low.push(0);
            let mut high = history;
            high.push(1);
            let low_payoffs = continuation(game, low);
            let high_payoffs = continuation(game, high);
            if high_payoffs[owner] > low_payoffs[owner] {
                high_payoffs
            } else {
                low_payoffs
            }
        }

        for stage in 0..game.variables().len() {
            let owner = game
                .player_index(&game.variables()[stage].owner)
                .unwrap();
            let mut deviated: Vec<u8> = outcome.bits()[..stage].to_vec();
            deviated.push(1 - outcome.get(stage));
            let deviation_payoffs = continuation(&game, deviated);
            prop_assert!(deviation_payoffs[owner] <= payoffs[owner]);
        }
    }
}

/// Spec-level sampling: distributions remain exact probability
/// distributions across 1000 random (catalog joint, point) draws.
#[test]
fn distribution_sums_to_one_across_1000_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let games = bundled_games();
    let mut checked = 0;
    while checked < 1000 {
        for game in &games {
            for joint in catalog_joints(game) {
                let point = random_point(&mut rng, joint.params());
                let distribution = outcome_distribution(&joint, &point).unwrap();
                let total: Rational = distribution.values().sum();
                assert!(total.is_one());
                checked += 1;
            }
        }
    }
}

/// The within-space equilibrium of the fully-independent joint space agrees
/// with backward induction on both bundled games.
#[test]
fn backward_induction_matches_behavioural_equilibrium() {
    for game in bundled_games() {
        let first = standard_catalog(&game, &game.players()[0]).unwrap().remove(0);
        let second = standard_catalog(&game, &game.players()[1]).unwrap().remove(0);
        let joint = JointSpace::new(&game, vec![first, second]).unwrap();
        let report = within_space_equilibria(&game, &joint).unwrap();
        let (_, induced) = backward_induction(&game, TieBreak::FavorZero).unwrap();
        assert_eq!(report.selected_point().unwrap().payoffs, induced);
    }
}

/// Every reported equilibrium point is a mutual best response under an
/// eval-only recheck: no own vertex deviation improves any player's payoff.
#[test]
fn equilibrium_reports_pass_eval_only_recheck() {
    for game in bundled_games() {
        for joint in catalog_joints(&game) {
            let report = within_space_equilibria(&game, &joint).unwrap();
            for equilibrium in &report.equilibria {
                for (player_idx, player) in game.players().iter().enumerate() {
                    let poly = expected_payoff(&game, &joint, player).unwrap();
                    let own = joint.params_of(player_idx);
                    let value = poly.eval(&equilibrium.point).unwrap();
                    for code in 0..(1usize << own.len()) {
                        let deviation = ParamPoint::vertex(own.iter().enumerate().map(
                            |(i, p)| (p.clone(), ((code >> (own.len() - 1 - i)) & 1) as u8),
                        ));
                        let mut merged: BTreeMap<String, Rational> = equilibrium
                            .point
                            .iter()
                            .map(|(k, v)| (k.clone(), v.clone()))
                            .collect();
                        for (k, v) in deviation.iter() {
                            merged.insert(k.clone(), v.clone());
                        }
                        let candidate = ParamPoint::new(merged).unwrap();
                        assert!(poly.eval(&candidate).unwrap() <= value);
                    }
                }
            }
        }
    }
}

/// Reordering the catalogs permutes meta-game labels but not cell payoffs.
#[test]
fn meta_game_cells_are_permutation_stable() {
    let game = chain_store();
    let x_catalog = standard_catalog(&game, "X").unwrap();
    let y_catalog = standard_catalog(&game, "Y").unwrap();
    let mut y_reversed = y_catalog.clone();
    y_reversed.reverse();

    let by_label = |catalogs: &[Vec<varsolve_core::MeasureSpace>]| {
        let meta = varsolve_core::build_meta_game(&game, catalogs).unwrap();
        let mut cells = BTreeMap::new();
        for (i, x_label) in meta.labels(0).iter().enumerate() {
            for (j, y_label) in meta.labels(1).iter().enumerate() {
                cells.insert(
                    (x_label.to_string(), y_label.to_string()),
                    meta.cell(i, j).payoffs.clone(),
                );
            }
        }
        cells
    };

    assert_eq!(
        by_label(&[x_catalog.clone(), y_catalog]),
        by_label(&[x_catalog, y_reversed])
    );
}
