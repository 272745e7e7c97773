//! Equilibria within a fixed joint space, and the meta-game over measure
//! space choices.
//!
//! Expected payoffs are multilinear, so each player's payoff is affine in
//! each own parameter and a best response is always attained at a vertex
//! (every parameter at 0 or 1). Equilibrium search therefore enumerates
//! vertex profiles exactly; interior optima arise only on indifference
//! faces, which are reported as flags.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::{One, Zero};

use crate::error::Error;
use crate::game::OutcomeGame;
use crate::poly::{expected_payoff, CompiledExpectation, MultilinearPoly};
use crate::rational::{in_unit_interval, rat, ratio, to_f64, Rational};
use crate::space::{JointSpace, MeasureSpace, ParamPoint};

/// Maximizers of a player's expected payoff over its own parameters, with
/// the opponent's parameters fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestResponse {
    /// Optimal own vertex points, in lexicographic order.
    pub vertices: Vec<ParamPoint>,
    /// Own parameters taking both values among the optimal vertices.
    pub indifferent: BTreeSet<String>,
    /// The optimal expected payoff.
    pub value: Rational,
}

fn vertex_point(params: &[String], code: usize) -> ParamPoint {
    let k = params.len();
    ParamPoint::vertex(
        params
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), ((code >> (k - 1 - i)) & 1) as u8)),
    )
}

/// Vertex best responses of `player` given fixed opponent parameters.
///
/// `fixed` may omit opponent parameters the player's payoff does not read,
/// but must not contain the player's own parameters.
pub fn best_response(
    game: &OutcomeGame,
    joint: &JointSpace,
    player: &str,
    fixed: &ParamPoint,
) -> Result<BestResponse, Error> {
    let player_idx = game.player_index(player)?;
    for param in fixed.params() {
        if joint.param_owner(param)? == player_idx {
            return Err(Error::ParameterMismatch {
                param: param.clone(),
                player: player.to_string(),
            });
        }
    }

    let own: Vec<String> = joint.params_of(player_idx);
    let mut poly = expected_payoff(game, joint, player)?;
    for (param, value) in fixed.iter() {
        poly = poly.substitute(param, value);
    }
    for param in poly.params() {
        if !own.contains(&param) {
            return Err(Error::MissingParameter(param));
        }
    }

    let mut best: Option<Rational> = None;
    let mut vertices = Vec::new();
    for code in 0..(1usize << own.len()) {
        let point = vertex_point(&own, code);
        let value = poly.eval(&point)?;
        match &best {
            Some(current) if value < *current => {}
            Some(current) if value == *current => vertices.push(point),
            _ => {
                best = Some(value);
                vertices = vec![point];
            }
        }
    }
    let value = best.expect("at least one vertex");

    let mut indifferent = BTreeSet::new();
    for param in &own {
        let takes =
            |bit: i64| vertices.iter().any(|v| v.get(param) == Some(&rat(bit)));
        if takes(0) && takes(1) {
            indifferent.insert(param.clone());
        }
    }
    Ok(BestResponse {
        vertices,
        indifferent,
        value,
    })
}

/// One equilibrium vertex of a joint space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumPoint {
    /// Vertex parameter point (every parameter 0 or 1).
    pub point: ParamPoint,
    /// Expected payoff vector, in player order.
    pub payoffs: Vec<Rational>,
    /// Parameters whose owner's payoff slope is exactly zero at this point.
    pub indifferent: BTreeSet<String>,
}

impl EquilibriumPoint {
    /// True when every indifference-flagged parameter sits at 0, matching
    /// the backward-induction tie-break.
    pub fn tiebreak_consistent(&self) -> bool {
        self.indifferent
            .iter()
            .all(|param| self.point.get(param).map(Rational::is_zero) == Some(true))
    }
}

/// All vertex equilibria of a joint space, with a canonical selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquilibriumReport {
    /// Equilibrium vertices in lexicographic parameter order.
    pub equilibria: Vec<EquilibriumPoint>,
    /// Index of the canonical selection; `None` iff no equilibrium exists.
    pub selected: Option<usize>,
}

impl EquilibriumReport {
    pub fn selected_point(&self) -> Option<&EquilibriumPoint> {
        self.selected.map(|i| &self.equilibria[i])
    }

    /// Equilibria surviving the canonical tie-break (all indifferent
    /// parameters at 0), or every equilibrium when none survives.
    pub fn tiebreak_candidates(&self) -> Vec<&EquilibriumPoint> {
        let consistent: Vec<&EquilibriumPoint> = self
            .equilibria
            .iter()
            .filter(|e| e.tiebreak_consistent())
            .collect();
        if consistent.is_empty() {
            self.equilibria.iter().collect()
        } else {
            consistent
        }
    }

    /// True when the tie-break leaves several equilibria with different
    /// payoff vectors, or none at all.
    pub fn is_ambiguous(&self) -> bool {
        let candidates = self.tiebreak_candidates();
        match candidates.first() {
            None => true,
            Some(first) => candidates.iter().any(|c| c.payoffs != first.payoffs),
        }
    }
}

/// Enumerates all vertex profiles of the joint space and keeps the mutual
/// best responses.
///
/// The canonical selection prefers profiles whose indifferent parameters
/// are all 0 (consistent with the backward-induction tie-break), then the
/// lexicographically smallest. An empty equilibrium list is a finding, not
/// an error.
pub fn within_space_equilibria(
    game: &OutcomeGame,
    joint: &JointSpace,
) -> Result<EquilibriumReport, Error> {
    let players = game.players();
    let polys: Vec<MultilinearPoly> = players
        .iter()
        .map(|p| expected_payoff(game, joint, p))
        .collect::<Result<_, _>>()?;
    let all_params: Vec<String> = joint.params().to_vec();
    let own_params: Vec<Vec<String>> = (0..players.len())
        .map(|i| joint.params_of(i))
        .collect();

    // Best own-assignment sets per player, keyed by the opponent assignment.
    let mut best_sets: Vec<BTreeMap<Vec<u8>, BTreeSet<Vec<u8>>>> = Vec::new();
    for player_idx in 0..players.len() {
        let own = &own_params[player_idx];
        let opp: Vec<String> = all_params
            .iter()
            .filter(|p| !own.contains(p))
            .cloned()
            .collect();
        let mut table = BTreeMap::new();
        for opp_code in 0..(1usize << opp.len()) {
            let opp_bits: Vec<u8> = (0..opp.len())
                .map(|i| ((opp_code >> (opp.len() - 1 - i)) & 1) as u8)
                .collect();
            let opp_point = vertex_point(&opp, opp_code);
            let mut best: Option<Rational> = None;
            let mut arg: BTreeSet<Vec<u8>> = BTreeSet::new();
            for own_code in 0..(1usize << own.len()) {
                let own_bits: Vec<u8> = (0..own.len())
                    .map(|i| ((own_code >> (own.len() - 1 - i)) & 1) as u8)
                    .collect();
                let point = opp_point.union(&vertex_point(own, own_code));
                let value = polys[player_idx].eval(&point)?;
                match &best {
                    Some(current) if value < *current => {}
                    Some(current) if value == *current => {
                        arg.insert(own_bits);
                    }
                    _ => {
                        best = Some(value);
                        arg = BTreeSet::from([own_bits]);
                    }
                }
            }
            table.insert(opp_bits, arg);
        }
        best_sets.push(table);
    }

    let split = |bits: &[u8], subset: &[String]| -> Vec<u8> {
        subset
            .iter()
            .map(|p| bits[all_params.iter().position(|q| q == p).unwrap()])
            .collect()
    };

    let mut equilibria = Vec::new();
    for code in 0..(1usize << all_params.len()) {
        let bits: Vec<u8> = (0..all_params.len())
            .map(|i| ((code >> (all_params.len() - 1 - i)) & 1) as u8)
            .collect();
        let mutual = (0..players.len()).all(|player_idx| {
            let own_bits = split(&bits, &own_params[player_idx]);
            let opp: Vec<String> = all_params
                .iter()
                .filter(|p| !own_params[player_idx].contains(p))
                .cloned()
                .collect();
            let opp_bits = split(&bits, &opp);
            best_sets[player_idx][&opp_bits].contains(&own_bits)
        });
        if !mutual {
            continue;
        }
        let point = vertex_point(&all_params, code);
        let payoffs: Vec<Rational> = polys
            .iter()
            .map(|poly| poly.eval(&point))
            .collect::<Result<_, _>>()?;
        let mut indifferent = BTreeSet::new();
        for param in &all_params {
            let owner = joint.param_owner(param)?;
            if polys[owner].partial(param).eval(&point)?.is_zero() {
                indifferent.insert(param.clone());
            }
        }
        equilibria.push(EquilibriumPoint {
            point,
            payoffs,
            indifferent,
        });
    }

    let selected = equilibria
        .iter()
        .position(EquilibriumPoint::tiebreak_consistent)
        .or(if equilibria.is_empty() { None } else { Some(0) });
    Ok(EquilibriumReport {
        equilibria,
        selected,
    })
}

/// One cell of the meta-game: the within-space analysis for a joint space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaCell {
    /// Payoffs of the selected equilibrium; `None` when no equilibrium exists.
    pub payoffs: Option<Vec<Rational>>,
    /// Set when the tie-break leaves several payoff vectors, or none.
    pub ambiguous: bool,
    /// Full within-space report for the cell.
    pub report: EquilibriumReport,
}

/// The finite game whose moves are choices of measure space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaGame {
    /// Per-player space catalogs, in the order given.
    pub catalogs: Vec<Vec<MeasureSpace>>,
    /// Cells indexed by `[first player's choice][second player's choice]`.
    pub cells: Vec<Vec<MetaCell>>,
}

impl MetaGame {
    pub fn labels(&self, player_idx: usize) -> Vec<&str> {
        self.catalogs[player_idx]
            .iter()
            .map(MeasureSpace::label)
            .collect()
    }

    pub fn cell(&self, first: usize, second: usize) -> &MetaCell {
        &self.cells[first][second]
    }
}

/// A pure equilibrium of the meta-game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaEquilibrium {
    /// Chosen space labels, in player order.
    pub profile: Vec<String>,
    pub payoffs: Vec<Rational>,
}

impl fmt::Display for MetaEquilibrium {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.profile.join(", "))
    }
}

/// Builds the meta-game over the given per-player catalogs: each cell holds
/// the selected within-space equilibrium payoffs for that joint space.
pub fn build_meta_game(
    game: &OutcomeGame,
    catalogs: &[Vec<MeasureSpace>],
) -> Result<MetaGame, Error> {
    if catalogs.len() != game.players().len() {
        return Err(Error::InvalidGame(format!(
            "{} catalogs for {} players",
            catalogs.len(),
            game.players().len()
        )));
    }
    for (catalog, player) in catalogs.iter().zip(game.players()) {
        if catalog.is_empty() {
            return Err(Error::InvalidGame(format!(
                "empty catalog for player `{player}`"
            )));
        }
    }

    let mut cells = Vec::new();
    for first in &catalogs[0] {
        let mut row = Vec::new();
        for second in &catalogs[1] {
            let joint = JointSpace::new(game, vec![first.clone(), second.clone()])?;
            let report = within_space_equilibria(game, &joint)?;
            let ambiguous = report.is_ambiguous();
            let payoffs = report.selected_point().map(|e| e.payoffs.clone());
            row.push(MetaCell {
                payoffs,
                ambiguous,
                report,
            });
        }
        cells.push(row);
    }
    Ok(MetaGame {
        catalogs: catalogs.to_vec(),
        cells,
    })
}

/// All pure Nash equilibria of the meta-game, in row-major cell order.
///
/// Errors when a cell needed for a comparison is ambiguous or has no
/// equilibrium, naming the offending cell.
pub fn meta_pure_equilibria(meta: &MetaGame) -> Result<Vec<MetaEquilibrium>, Error> {
    let first_labels = meta.labels(0);
    let second_labels = meta.labels(1);
    let payoffs = |i: usize, j: usize| -> Result<&Vec<Rational>, Error> {
        let cell = meta.cell(i, j);
        if cell.ambiguous {
            return Err(Error::AmbiguousCell {
                x: first_labels[i].to_string(),
                y: second_labels[j].to_string(),
                detail: if cell.report.equilibria.is_empty() {
                    "no within-space equilibrium".to_string()
                } else {
                    "several equilibria with different payoffs survive the tie-break".to_string()
                },
            });
        }
        cell.payoffs.as_ref().ok_or_else(|| Error::AmbiguousCell {
            x: first_labels[i].to_string(),
            y: second_labels[j].to_string(),
            detail: "no within-space equilibrium".to_string(),
        })
    };

    let mut equilibria = Vec::new();
    for i in 0..first_labels.len() {
        for j in 0..second_labels.len() {
            let cell = payoffs(i, j)?;
            let mut stable = true;
            for alt in 0..first_labels.len() {
                if payoffs(alt, j)?[0] > cell[0] {
                    stable = false;
                    break;
                }
            }
            if stable {
                for alt in 0..second_labels.len() {
                    if payoffs(i, alt)?[1] > cell[1] {
                        stable = false;
                        break;
                    }
                }
            }
            if stable {
                equilibria.push(MetaEquilibrium {
                    profile: vec![
                        first_labels[i].to_string(),
                        second_labels[j].to_string(),
                    ],
                    payoffs: cell.clone(),
                });
            }
        }
    }
    Ok(equilibria)
}

/// A probability weighting over one player's measure spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedSpaceWeighting {
    player: String,
    weights: Vec<(String, Rational)>,
}

impl MixedSpaceWeighting {
    /// Builds a weighting; each weight must lie in `[0,1]` and the weights
    /// must sum to exactly 1.
    pub fn new(
        player: impl Into<String>,
        weights: Vec<(String, Rational)>,
    ) -> Result<Self, Error> {
        let player = player.into();
        let mut total = Rational::zero();
        for (label, weight) in &weights {
            if !in_unit_interval(weight) {
                return Err(Error::WeightOutOfRange {
                    label: label.clone(),
                    value: weight.to_string(),
                });
            }
            total += weight;
        }
        if !total.is_one() {
            return Err(Error::WeightSum {
                player,
                sum: total.to_string(),
            });
        }
        Ok(MixedSpaceWeighting { player, weights })
    }

    pub fn player(&self) -> &str {
        &self.player
    }

    pub fn weights(&self) -> &[(String, Rational)] {
        &self.weights
    }
}

/// Expected payoff of `own_space.owner()` when the opponent mixes over
/// measure spaces with fixed within-space parameter values.
///
/// Returns the convex combination of the per-branch expected payoffs with
/// the opponent's parameters substituted from `opponent_point`; the result
/// is a polynomial in the own space's parameters only, shared across
/// branches.
pub fn mixed_space_payoff(
    game: &OutcomeGame,
    own_space: &MeasureSpace,
    opponent_catalog: &[MeasureSpace],
    weighting: &MixedSpaceWeighting,
    opponent_point: &ParamPoint,
) -> Result<MultilinearPoly, Error> {
    let own_player = own_space.owner().to_string();
    game.player_index(weighting.player())?;
    if weighting.player() == own_player {
        return Err(Error::InvalidSpace {
            label: own_space.label().to_string(),
            message: format!(
                "weighting player `{}` must be the opponent of `{own_player}`",
                weighting.player()
            ),
        });
    }

    let mut total = MultilinearPoly::zero();
    for (label, weight) in weighting.weights() {
        let branch_space = opponent_catalog
            .iter()
            .find(|s| s.label() == label)
            .ok_or_else(|| Error::UnknownSpace(label.clone()))?;
        if branch_space.owner() != weighting.player() {
            return Err(Error::InvalidSpace {
                label: label.clone(),
                message: format!(
                    "owned by `{}`, not by weighting player `{}`",
                    branch_space.owner(),
                    weighting.player()
                ),
            });
        }
        let joint = JointSpace::new(game, vec![own_space.clone(), branch_space.clone()])?;
        let opponent_idx = game.player_index(weighting.player())?;
        let opponent_params: BTreeSet<String> =
            joint.params_of(opponent_idx).into_iter().collect();
        let mut branch = expected_payoff(game, &joint, &own_player)?;
        for param in branch.params() {
            if opponent_params.contains(&param) {
                let value = opponent_point
                    .get(&param)
                    .ok_or_else(|| Error::MissingParameter(param.clone()))?;
                branch = branch.substitute(&param, value);
            }
        }
        total = total.add(&branch.scale(weight));
    }
    Ok(total)
}

/// Best-response classification of the chain store entrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdClass {
    /// Entering (`p=1`) is the unique best response.
    Enter,
    /// Staying out (`p=0`) is the unique best response.
    StayOut,
    /// The entrant's payoff slope is exactly zero.
    Indifferent,
}

impl fmt::Display for ThresholdClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdClass::Enter => write!(f, "enter (p=1)"),
            ThresholdClass::StayOut => write!(f, "stay out (p=0)"),
            ThresholdClass::Indifferent => write!(f, "indifferent"),
        }
    }
}

/// Classifies the entrant's best response when the chain store monopolist
/// mixes over its anti-correlated, independent, and correlated spaces with
/// weights `(a, b, c)` and fights with probability `r` in the independent
/// branch: stay out iff `c + b*r > 1/2`, enter iff `< 1/2`, indifferent at
/// equality. Exact rational comparison.
pub fn chain_store_threshold(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    r: &Rational,
) -> Result<ThresholdClass, Error> {
    for (label, weight) in [("a", a), ("b", b), ("c", c)] {
        if !in_unit_interval(weight) {
            return Err(Error::WeightOutOfRange {
                label: label.to_string(),
                value: weight.to_string(),
            });
        }
    }
    if !(a + b + c).is_one() {
        return Err(Error::WeightSum {
            player: "opponent".to_string(),
            sum: (a + b + c).to_string(),
        });
    }
    if !in_unit_interval(r) {
        return Err(Error::ParameterOutOfRange {
            param: "r".to_string(),
            value: r.to_string(),
        });
    }
    let lhs = c + b * r;
    let half = ratio(1, 2);
    Ok(match lhs.cmp(&half) {
        std::cmp::Ordering::Greater => ThresholdClass::StayOut,
        std::cmp::Ordering::Less => ThresholdClass::Enter,
        std::cmp::Ordering::Equal => ThresholdClass::Indifferent,
    })
}

/// Result of an exhaustive grid search over one player's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOptimum {
    /// The best grid point found (first in scan order on ties).
    pub point: Vec<(String, f64)>,
    /// The expected payoff there.
    pub value: f64,
}

/// Exhaustive grid maximization of a player's directly-summed expected
/// payoff over its own parameters, with opponent parameters fixed.
///
/// `step` must divide 1 evenly (default 0.01 in the CLI). This is a test
/// oracle for [`best_response`]; it evaluates in floating point and never
/// touches the polynomial path.
pub fn grid_oracle(
    game: &OutcomeGame,
    joint: &JointSpace,
    player: &str,
    fixed: &ParamPoint,
    step: f64,
) -> Result<GridOptimum, Error> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::BadGridStep(step));
    }
    let divisions = (1.0 / step).round();
    if (divisions * step - 1.0).abs() > 1e-9 {
        return Err(Error::BadGridStep(step));
    }
    let divisions = divisions as usize;

    let player_idx = game.player_index(player)?;
    for param in fixed.params() {
        if joint.param_owner(param)? == player_idx {
            return Err(Error::ParameterMismatch {
                param: param.clone(),
                player: player.to_string(),
            });
        }
    }

    let compiled = CompiledExpectation::new(game, joint, player)?;
    let own: Vec<usize> = compiled
        .params()
        .iter()
        .enumerate()
        .filter(|(_, p)| joint.param_owner(p).map(|o| o == player_idx) == Ok(true))
        .map(|(i, _)| i)
        .collect();
    let mut slots = Vec::with_capacity(compiled.params().len());
    for (index, param) in compiled.params().iter().enumerate() {
        let value = match fixed.get(param) {
            Some(v) => to_f64(v),
            None if own.contains(&index) || !compiled.is_used(index) => 0.0,
            None => return Err(Error::MissingParameter(param.clone())),
        };
        slots.push(value);
    }

    let mut best_value = f64::NEG_INFINITY;
    let mut best_ticks: Vec<usize> = Vec::new();
    let mut ticks = vec![0usize; own.len()];
    loop {
        for (dim, &slot) in own.iter().enumerate() {
            slots[slot] = ticks[dim] as f64 / divisions as f64;
        }
        let value = compiled.value(&slots);
        if value > best_value {
            best_value = value;
            best_ticks = ticks.clone();
        }
        // Odometer: last own dimension fastest, so scan order is
        // lexicographic over the own parameter list.
        let mut dim = own.len();
        loop {
            if dim == 0 {
                break;
            }
            dim -= 1;
            if ticks[dim] < divisions {
                ticks[dim] += 1;
                break;
            }
            ticks[dim] = 0;
        }
        if ticks.iter().all(|&t| t == 0) {
            break;
        }
    }

    let point = own
        .iter()
        .zip(&best_ticks)
        .map(|(&slot, &tick)| {
            (
                compiled.params()[slot].clone(),
                tick as f64 / divisions as f64,
            )
        })
        .collect();
    Ok(GridOptimum {
        point,
        value: best_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{chain_store, example_game};
    use crate::rational::{rat, to_f64};
    use crate::space::standard_catalog;

    fn catalog_joint(game: &OutcomeGame, x_label: &str, y_label: &str) -> JointSpace {
        let find = |player: &str, label: &str| -> MeasureSpace {
            standard_catalog(game, player)
                .unwrap()
                .into_iter()
                .find(|s| s.label() == label)
                .unwrap()
        };
        JointSpace::new(game, vec![find("X", x_label), find("Y", y_label)]).unwrap()
    }

    fn bit_point<const N: usize>(pairs: [(&str, u8); N]) -> ParamPoint {
        ParamPoint::vertex(pairs)
    }

    #[test]
    fn monopolist_acquiesces_to_a_committed_entrant() {
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y0");
        let response =
            best_response(&game, &joint, "Y", &bit_point([("p", 1)])).unwrap();
        for vertex in &response.vertices {
            assert_eq!(vertex.get("r"), Some(&rat(0)));
        }
        assert_eq!(response.indifferent, BTreeSet::from(["q".to_string()]));
        assert_eq!(response.value, rat(0));
    }

    #[test]
    fn entrant_enters_against_an_acquiescing_monopolist() {
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y0");
        let response =
            best_response(&game, &joint, "X", &bit_point([("r", 0)])).unwrap();
        assert_eq!(response.vertices, vec![bit_point([("p", 1)])]);
        assert!(response.indifferent.is_empty());
        assert_eq!(response.value, rat(1));
    }

    #[test]
    fn example_game_second_mover_response_at_p_zero() {
        let game = example_game();
        let joint = catalog_joint(&game, "X0", "Y0");
        let response =
            best_response(&game, &joint, "Y", &bit_point([("p", 0)])).unwrap();
        assert_eq!(
            response.vertices,
            vec![
                bit_point([("q", 1), ("r", 0)]),
                bit_point([("q", 1), ("r", 1)]),
            ]
        );
        assert_eq!(response.indifferent, BTreeSet::from(["r".to_string()]));
        assert_eq!(response.value, rat(2));
    }

    #[test]
    fn best_response_rejects_own_parameters_in_fixed() {
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y0");
        let err = best_response(&game, &joint, "X", &bit_point([("p", 1)])).unwrap_err();
        assert_eq!(
            err,
            Error::ParameterMismatch {
                param: "p".into(),
                player: "X".into()
            }
        );
        let err = best_response(&game, &joint, "X", &ParamPoint::empty()).unwrap_err();
        assert_eq!(err, Error::MissingParameter("r".into()));
    }

    #[test]
    fn chain_store_behavioural_equilibria() {
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y0");
        let report = within_space_equilibria(&game, &joint).unwrap();
        // Nash vertices: entry with no fighting, and the non-credible
        // threat family (p=0, r=1).
        assert_eq!(report.equilibria.len(), 4);
        let selected = report.selected_point().unwrap();
        assert_eq!(
            selected.point,
            bit_point([("p", 1), ("q", 0), ("r", 0)])
        );
        assert_eq!(selected.payoffs, vec![rat(1), rat(0)]);
        assert_eq!(selected.indifferent, BTreeSet::from(["q".to_string()]));
    }

    #[test]
    fn chain_store_coupled_equilibria() {
        let game = chain_store();

        let correlated = catalog_joint(&game, "X0", "Y+");
        let report = within_space_equilibria(&game, &correlated).unwrap();
        let selected = report.selected_point().unwrap();
        assert_eq!(selected.point, bit_point([("p", 0)]));
        assert_eq!(selected.payoffs, vec![rat(0), rat(1)]);

        let anti = catalog_joint(&game, "X0", "Y-");
        let report = within_space_equilibria(&game, &anti).unwrap();
        let selected = report.selected_point().unwrap();
        assert_eq!(selected.point, bit_point([("p", 1)]));
        assert_eq!(selected.payoffs, vec![rat(1), rat(0)]);
    }

    #[test]
    fn example_game_equilibria() {
        let game = example_game();

        let behavioural = catalog_joint(&game, "X0", "Y0");
        let report = within_space_equilibria(&game, &behavioural).unwrap();
        let selected = report.selected_point().unwrap();
        assert_eq!(
            selected.point,
            bit_point([("p", 0), ("q", 1), ("r", 0)])
        );
        assert_eq!(selected.payoffs, vec![rat(2), rat(2)]);

        let coupled = catalog_joint(&game, "X0", "Y+");
        let report = within_space_equilibria(&game, &coupled).unwrap();
        let selected = report.selected_point().unwrap();
        assert_eq!(selected.point, bit_point([("p", 1)]));
        assert_eq!(selected.payoffs, vec![rat(4), rat(3)]);
    }

    #[test]
    fn chain_store_meta_game_table_and_equilibrium() {
        let game = chain_store();
        let x_catalog = standard_catalog(&game, "X").unwrap();
        let y_catalog = standard_catalog(&game, "Y").unwrap();
        // Present in the anti/independent/correlated order.
        let mut y_sorted = y_catalog.clone();
        y_sorted.sort_by_key(|s| (s.coupling_sign(), s.label().to_string()));
        let meta = build_meta_game(&game, &[x_catalog, y_sorted]).unwrap();

        assert_eq!(meta.labels(1), vec!["Y-", "Y0", "Y+"]);
        let payoffs: Vec<Vec<Rational>> = (0..3)
            .map(|j| meta.cell(0, j).payoffs.clone().unwrap())
            .collect();
        assert_eq!(
            payoffs,
            vec![
                vec![rat(1), rat(0)],
                vec![rat(1), rat(0)],
                vec![rat(0), rat(1)],
            ]
        );
        assert!(meta.cells.iter().flatten().all(|c| !c.ambiguous));

        let equilibria = meta_pure_equilibria(&meta).unwrap();
        assert_eq!(equilibria.len(), 1);
        assert_eq!(equilibria[0].profile, vec!["X0", "Y+"]);
        assert_eq!(equilibria[0].payoffs, vec![rat(0), rat(1)]);
    }

    #[test]
    fn example_game_meta_equilibrium() {
        let game = example_game();
        let x_catalog = standard_catalog(&game, "X").unwrap();
        let y_catalog: Vec<MeasureSpace> = standard_catalog(&game, "Y")
            .unwrap()
            .into_iter()
            .filter(|s| s.label() != "Y-")
            .collect();
        let meta = build_meta_game(&game, &[x_catalog, y_catalog]).unwrap();
        let payoffs: Vec<Vec<Rational>> = (0..2)
            .map(|j| meta.cell(0, j).payoffs.clone().unwrap())
            .collect();
        assert_eq!(
            payoffs,
            vec![vec![rat(2), rat(2)], vec![rat(4), rat(3)]]
        );
        let equilibria = meta_pure_equilibria(&meta).unwrap();
        // Exhaustive comparison of the 1x2 matrix: Y prefers 3 over 2.
        assert_eq!(equilibria.len(), 1);
        assert_eq!(equilibria[0].profile, vec!["X0", "Y+"]);
        assert_eq!(equilibria[0].payoffs, vec![rat(4), rat(3)]);
    }

    #[test]
    fn singleton_meta_game_reduces_to_the_within_space_result() {
        let game = chain_store();
        let x_catalog = standard_catalog(&game, "X").unwrap();
        let y_behavioural = vec![standard_catalog(&game, "Y").unwrap().remove(0)];
        let meta = build_meta_game(&game, &[x_catalog, y_behavioural]).unwrap();
        let equilibria = meta_pure_equilibria(&meta).unwrap();
        assert_eq!(equilibria.len(), 1);
        assert_eq!(equilibria[0].payoffs, vec![rat(1), rat(0)]);
    }

    #[test]
    fn mixed_space_payoff_matches_the_closed_form() {
        let game = chain_store();
        let own = standard_catalog(&game, "X").unwrap().remove(0);
        let catalog = standard_catalog(&game, "Y").unwrap();
        let (a, b, c) = (ratio(1, 5), ratio(3, 10), ratio(1, 2));
        let weighting = MixedSpaceWeighting::new(
            "Y",
            vec![
                ("Y-".into(), a.clone()),
                ("Y0".into(), b.clone()),
                ("Y+".into(), c.clone()),
            ],
        )
        .unwrap();
        let r = ratio(1, 4);
        let point = ParamPoint::from_pairs([("r", r.clone())]).unwrap();
        let poly = mixed_space_payoff(&game, &own, &catalog, &weighting, &point).unwrap();
        // p * (1 - 2c - 2 b r)
        let coefficient = rat(1) - rat(2) * &c - rat(2) * &b * &r;
        assert_eq!(
            poly,
            MultilinearPoly::from_terms([(vec!["p"], coefficient)])
        );
    }

    #[test]
    fn mixed_space_payoff_concentrated_weightings() {
        let game = chain_store();
        let own = standard_catalog(&game, "X").unwrap().remove(0);
        let catalog = standard_catalog(&game, "Y").unwrap();

        let all_on_plus = MixedSpaceWeighting::new(
            "Y",
            vec![
                ("Y-".into(), rat(0)),
                ("Y0".into(), rat(0)),
                ("Y+".into(), rat(1)),
            ],
        )
        .unwrap();
        let point = ParamPoint::from_pairs([("r", ratio(2, 3))]).unwrap();
        let poly =
            mixed_space_payoff(&game, &own, &catalog, &all_on_plus, &point).unwrap();
        assert_eq!(poly, MultilinearPoly::from_terms([(vec!["p"], rat(-1))]));

        let all_on_zero =
            MixedSpaceWeighting::new("Y", vec![("Y0".into(), rat(1))]).unwrap();
        let quarter = ParamPoint::from_pairs([("r", ratio(1, 4))]).unwrap();
        let poly =
            mixed_space_payoff(&game, &own, &catalog, &all_on_zero, &quarter).unwrap();
        assert_eq!(
            poly,
            MultilinearPoly::from_terms([(vec!["p"], ratio(1, 2))])
        );
    }

    #[test]
    fn weighting_validation() {
        let err = MixedSpaceWeighting::new(
            "Y",
            vec![("Y0".into(), ratio(1, 2)), ("Y+".into(), ratio(1, 4))],
        )
        .unwrap_err();
        assert!(matches!(err, Error::WeightSum { .. }));
        let err =
            MixedSpaceWeighting::new("Y", vec![("Y0".into(), ratio(3, 2))]).unwrap_err();
        assert!(matches!(err, Error::WeightOutOfRange { .. }));
    }

    #[test]
    fn threshold_classification() {
        assert_eq!(
            chain_store_threshold(&rat(0), &rat(0), &rat(1), &ratio(1, 3)).unwrap(),
            ThresholdClass::StayOut
        );
        assert_eq!(
            chain_store_threshold(&rat(1), &rat(0), &rat(0), &ratio(1, 3)).unwrap(),
            ThresholdClass::Enter
        );
        assert_eq!(
            chain_store_threshold(&rat(0), &rat(1), &rat(0), &ratio(1, 2)).unwrap(),
            ThresholdClass::Indifferent
        );
        assert!(chain_store_threshold(&rat(1), &rat(1), &rat(-1), &rat(0)).is_err());
        assert!(chain_store_threshold(&ratio(1, 2), &ratio(1, 4), &ratio(1, 8), &rat(0)).is_err());
    }

    #[test]
    fn grid_oracle_agrees_with_best_response() {
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y0");
        let fixed = ParamPoint::from_pairs([("p", ratio(7, 10))]).unwrap();
        let response = best_response(&game, &joint, "Y", &fixed).unwrap();
        let optimum = grid_oracle(&game, &joint, "Y", &fixed, 0.01).unwrap();
        assert!((optimum.value - to_f64(&response.value)).abs() < 1e-9);
    }

    #[test]
    fn grid_oracle_on_a_constant_payoff() {
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y0");
        // With p=0 the monopolist's payoff is constantly 1.
        let fixed = ParamPoint::from_pairs([("p", rat(0))]).unwrap();
        let optimum = grid_oracle(&game, &joint, "Y", &fixed, 0.25).unwrap();
        assert_eq!(optimum.value, 1.0);
        assert_eq!(optimum.point, vec![("q".into(), 0.0), ("r".into(), 0.0)]);
    }

    #[test]
    fn grid_oracle_example_game_maximizer_region() {
        let game = example_game();
        let joint = catalog_joint(&game, "X0", "Y0");
        let fixed = ParamPoint::from_pairs([("p", rat(1))]).unwrap();
        let response = best_response(&game, &joint, "Y", &fixed).unwrap();
        // At p=1 the payoff is 4 - r: q indifferent, r pinned to 0.
        assert_eq!(response.indifferent, BTreeSet::from(["q".to_string()]));
        for vertex in &response.vertices {
            assert_eq!(vertex.get("r"), Some(&rat(0)));
        }
        let optimum = grid_oracle(&game, &joint, "Y", &fixed, 0.05).unwrap();
        assert!((optimum.value - 4.0).abs() < 1e-12);
        assert_eq!(optimum.point.iter().find(|(p, _)| p == "r").unwrap().1, 0.0);
    }

    #[test]
    fn grid_oracle_rejects_bad_steps() {
        let game = chain_store();
        let joint = catalog_joint(&game, "X0", "Y0");
        let fixed = ParamPoint::from_pairs([("p", rat(0))]).unwrap();
        assert!(matches!(
            grid_oracle(&game, &joint, "Y", &fixed, 0.3),
            Err(Error::BadGridStep(_))
        ));
        assert!(matches!(
            grid_oracle(&game, &joint, "Y", &fixed, 0.0),
            Err(Error::BadGridStep(_))
        ));
    }
}
