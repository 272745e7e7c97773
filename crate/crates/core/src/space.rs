//! Parameterized probability measure spaces over game variables.
//!
//! A [`MeasureSpace`] gives its owner one rule per owned variable: either a
//! free probability parameter per observed-history class, or a deterministic
//! coupling (copy/flip/const) to an earlier move. A [`JointSpace`] pairs one
//! space per player and induces the outcome distribution for any parameter
//! point. Deterministic couplings carry no parameters: committing to one
//! removes the corresponding dimension from the owner's optimization.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Signed, Zero};

use crate::error::Error;
use crate::game::{Outcome, OutcomeGame};
use crate::rational::{exact_sqrt, in_unit_interval, rat, to_f64, Rational};

/// One conditional class of a `Param` rule: a conjunction of `var=bit`
/// constraints on earlier variables, mapped to a parameter id. An empty
/// condition matches every history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamClass {
    pub condition: Vec<(String, u8)>,
    pub param: String,
}

/// How a rule produces its variable's move from the observed history.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleBody {
    /// Move is 1 with probability equal to the matching class's parameter.
    /// Classes must partition the observed histories.
    Param(Vec<ParamClass>),
    /// Move equals the observed source variable.
    Copy(String),
    /// Move equals one minus the observed source variable.
    Flip(String),
    /// Move is fixed.
    Const(u8),
}

/// A rule for a single target variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub var: String,
    pub body: RuleBody,
}

impl Rule {
    pub fn param(var: &str, classes: Vec<ParamClass>) -> Self {
        Rule {
            var: var.into(),
            body: RuleBody::Param(classes),
        }
    }

    pub fn copy(var: &str, source: &str) -> Self {
        Rule {
            var: var.into(),
            body: RuleBody::Copy(source.into()),
        }
    }

    pub fn flip(var: &str, source: &str) -> Self {
        Rule {
            var: var.into(),
            body: RuleBody::Flip(source.into()),
        }
    }

    pub fn constant(var: &str, bit: u8) -> Self {
        Rule {
            var: var.into(),
            body: RuleBody::Const(bit),
        }
    }
}

/// A labeled measure space: one rule per variable owned by `owner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureSpace {
    label: String,
    owner: String,
    rules: Vec<Rule>,
    params: Vec<String>,
}

impl MeasureSpace {
    /// Builds a space; the ordered parameter list is derived from the rules
    /// in order of first appearance.
    pub fn new(label: impl Into<String>, owner: impl Into<String>, rules: Vec<Rule>) -> Self {
        let mut params = Vec::new();
        for rule in &rules {
            if let RuleBody::Param(classes) = &rule.body {
                for class in classes {
                    if !params.contains(&class.param) {
                        params.push(class.param.clone());
                    }
                }
            }
        }
        MeasureSpace {
            label: label.into(),
            owner: owner.into(),
            rules,
            params,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn owner(&self) -> &str {
        &self.owner
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Parameters of this space in declaration order.
    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Sum over rules of the coupling direction: `Copy` counts +1, `Flip`
    /// counts -1. Used for the canonical anti/independent/correlated
    /// presentation order of catalogs.
    pub fn coupling_sign(&self) -> i32 {
        self.rules
            .iter()
            .map(|r| match r.body {
                RuleBody::Copy(_) => 1,
                RuleBody::Flip(_) => -1,
                _ => 0,
            })
            .sum()
    }

    /// Checks this space alone against a game: rules must cover every
    /// variable owned by the space's owner exactly once, couplings and
    /// conditions must reference strictly earlier variables, `Param`
    /// classes must partition the observed histories, and a parameter id
    /// may not serve two different variables.
    pub fn validate_against(&self, game: &OutcomeGame) -> Result<(), Error> {
        let invalid = |message: String| Error::InvalidSpace {
            label: self.label.clone(),
            message,
        };
        let mut covered = BTreeSet::new();
        let mut param_var: BTreeMap<String, usize> = BTreeMap::new();
        for rule in &self.rules {
            let target = game.var_index(&rule.var)?;
            if game.variables()[target].owner != self.owner {
                return Err(invalid(format!(
                    "rule targets `{}`, owned by `{}`",
                    rule.var,
                    game.variables()[target].owner
                )));
            }
            if !covered.insert(target) {
                return Err(invalid(format!(
                    "variable `{}` has more than one rule",
                    rule.var
                )));
            }
            let body = JointSpace::resolve_rule(game, &self.label, rule, target)?;
            if let ResolvedRule::Param(classes) = &body {
                for (_, param) in classes {
                    if let Some(&previous) = param_var.get(param) {
                        if previous != target {
                            return Err(invalid(format!(
                                "parameter `{param}` is already used by variable `{}`",
                                game.variables()[previous].name
                            )));
                        }
                    }
                    param_var.insert(param.clone(), target);
                }
            }
        }
        for (idx, variable) in game.variables().iter().enumerate() {
            if variable.owner == self.owner && !covered.contains(&idx) {
                return Err(invalid(format!(
                    "no rule for owned variable `{}`",
                    variable.name
                )));
            }
        }
        Ok(())
    }
}

/// An assignment of values in `[0,1]` to parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamPoint(BTreeMap<String, Rational>);

impl ParamPoint {
    /// Builds a point, rejecting values outside `[0,1]`.
    pub fn new(values: BTreeMap<String, Rational>) -> Result<Self, Error> {
        for (param, value) in &values {
            if !in_unit_interval(value) {
                return Err(Error::ParameterOutOfRange {
                    param: param.clone(),
                    value: value.to_string(),
                });
            }
        }
        Ok(ParamPoint(values))
    }

    pub fn from_pairs<S: Into<String>>(
        pairs: impl IntoIterator<Item = (S, Rational)>,
    ) -> Result<Self, Error> {
        Self::new(pairs.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn empty() -> Self {
        ParamPoint(BTreeMap::new())
    }

    /// A vertex point: every listed parameter at 0 or 1.
    pub fn vertex<S: Into<String>>(pairs: impl IntoIterator<Item = (S, u8)>) -> Self {
        ParamPoint(
            pairs
                .into_iter()
                .map(|(k, b)| {
                    assert!(b <= 1, "vertex bits must be 0 or 1");
                    (k.into(), rat(i64::from(b)))
                })
                .collect(),
        )
    }

    pub fn get(&self, param: &str) -> Option<&Rational> {
        self.0.get(param)
    }

    pub fn contains(&self, param: &str) -> bool {
        self.0.contains_key(param)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.0.iter()
    }

    pub fn params(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every value is 0 or 1.
    pub fn is_vertex(&self) -> bool {
        self.0
            .values()
            .all(|v| v.is_zero() || v.is_one())
    }

    /// Union of two points over disjoint parameter sets.
    pub fn union(&self, other: &ParamPoint) -> ParamPoint {
        let mut merged = self.0.clone();
        for (k, v) in &other.0 {
            let previous = merged.insert(k.clone(), v.clone());
            assert!(
                previous.is_none() || previous.as_ref() == Some(v),
                "conflicting values for parameter `{k}`"
            );
        }
        ParamPoint(merged)
    }
}

/// A rule with names resolved to variable indices, stored per game variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ResolvedRule {
    /// (condition over earlier variable indices, parameter id) per class.
    Param(Vec<(Vec<(usize, u8)>, String)>),
    Copy(usize),
    Flip(usize),
    Const(u8),
}

impl ResolvedRule {
    fn class_matches(condition: &[(usize, u8)], history: &[u8]) -> bool {
        condition.iter().all(|&(idx, bit)| history[idx] == bit)
    }

    /// The parameter id of the class matching `history`, if this is a
    /// `Param` rule. Partition totality is validated at construction.
    pub(crate) fn matching_param(&self, history: &[u8]) -> Option<&str> {
        match self {
            ResolvedRule::Param(classes) => classes
                .iter()
                .find(|(cond, _)| Self::class_matches(cond, history))
                .map(|(_, p)| p.as_str()),
            _ => None,
        }
    }

    /// Probability that the target variable is 1 given `history`, as a
    /// symbolic choice: either a fixed bit or the matching parameter.
    pub(crate) fn outcome_factor(&self, history: &[u8]) -> FactorKind<'_> {
        match self {
            ResolvedRule::Param(_) => {
                let param = self
                    .matching_param(history)
                    .expect("validated partition is total");
                FactorKind::Parameter(param)
            }
            ResolvedRule::Copy(src) => FactorKind::Fixed(history[*src]),
            ResolvedRule::Flip(src) => FactorKind::Fixed(1 - history[*src]),
            ResolvedRule::Const(bit) => FactorKind::Fixed(*bit),
        }
    }
}

/// Probability that a variable is 1 given a history: a fixed bit for
/// deterministic rules, or one of the space parameters.
pub(crate) enum FactorKind<'a> {
    Fixed(u8),
    Parameter(&'a str),
}

/// The product of one measure space per player, validated against a game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointSpace {
    spaces: Vec<MeasureSpace>,
    var_names: Vec<String>,
    resolved: Vec<ResolvedRule>,
    params: Vec<String>,
    param_owner: BTreeMap<String, usize>,
}

impl JointSpace {
    /// Validates and combines one space per player.
    ///
    /// Checks that every game variable has exactly one rule (from its
    /// owner's space), that couplings and conditions reference strictly
    /// earlier variables, that `Param` classes partition the observed
    /// histories, and that no parameter id is shared across players or
    /// across different variables.
    pub fn new(game: &OutcomeGame, spaces: Vec<MeasureSpace>) -> Result<Self, Error> {
        let invalid = |label: &str, message: String| Error::InvalidSpace {
            label: label.to_string(),
            message,
        };

        let mut per_player: Vec<Option<MeasureSpace>> = vec![None; game.players().len()];
        for space in spaces {
            let idx = game.player_index(space.owner())?;
            if per_player[idx].is_some() {
                return Err(invalid(
                    space.label(),
                    format!("player `{}` already has a space", space.owner()),
                ));
            }
            per_player[idx] = Some(space);
        }
        let spaces: Vec<MeasureSpace> = per_player
            .into_iter()
            .zip(game.players())
            .map(|(space, player)| {
                space.ok_or_else(|| Error::InvalidGame(format!("no space for player `{player}`")))
            })
            .collect::<Result<_, _>>()?;
        for space in &spaces {
            space.validate_against(game)?;
        }

        // Resolve one rule per game variable.
        let mut resolved: Vec<Option<(ResolvedRule, String)>> = vec![None; game.variables().len()];
        let mut param_owner = BTreeMap::new();
        let mut param_var: BTreeMap<String, usize> = BTreeMap::new();
        for (player_idx, space) in spaces.iter().enumerate() {
            for rule in space.rules() {
                let target = game.var_index(&rule.var)?;
                let variable = &game.variables()[target];
                if variable.owner != *space.owner() {
                    return Err(invalid(
                        space.label(),
                        format!("rule targets `{}`, owned by `{}`", rule.var, variable.owner),
                    ));
                }
                if resolved[target].is_some() {
                    return Err(invalid(
                        space.label(),
                        format!("variable `{}` has more than one rule", rule.var),
                    ));
                }
                let body = Self::resolve_rule(game, space.label(), rule, target)?;
                if let ResolvedRule::Param(classes) = &body {
                    for (_, param) in classes {
                        if let Some(&var) = param_var.get(param) {
                            if var != target {
                                return Err(invalid(
                                    space.label(),
                                    format!(
                                        "parameter `{param}` is already used by variable `{}`",
                                        game.variables()[var].name
                                    ),
                                ));
                            }
                        }
                        param_var.insert(param.clone(), target);
                        match param_owner.get(param) {
                            Some(&owner) if owner != player_idx => {
                                return Err(invalid(
                                    space.label(),
                                    format!("parameter `{param}` is already used by another player"),
                                ));
                            }
                            _ => {
                                param_owner.insert(param.clone(), player_idx);
                            }
                        }
                    }
                }
                resolved[target] = Some((body, space.label().to_string()));
            }
        }
        let resolved: Vec<ResolvedRule> = resolved
            .into_iter()
            .zip(game.variables())
            .map(|(entry, variable)| {
                entry.map(|(body, _)| body).ok_or_else(|| {
                    Error::InvalidGame(format!("variable `{}` has no rule", variable.name))
                })
            })
            .collect::<Result<_, _>>()?;

        let mut params = Vec::new();
        for space in &spaces {
            for param in space.params() {
                if !params.contains(param) {
                    params.push(param.clone());
                }
            }
        }

        Ok(JointSpace {
            spaces,
            var_names: game.variables().iter().map(|v| v.name.clone()).collect(),
            resolved,
            params,
            param_owner,
        })
    }

    fn resolve_rule(
        game: &OutcomeGame,
        label: &str,
        rule: &Rule,
        target: usize,
    ) -> Result<ResolvedRule, Error> {
        let invalid = |message: String| Error::InvalidSpace {
            label: label.to_string(),
            message,
        };
        let earlier = |name: &str| -> Result<usize, Error> {
            let idx = game.var_index(name)?;
            if idx >= target {
                return Err(invalid(format!(
                    "`{}` must couple to a strictly earlier variable, but `{name}` is not",
                    rule.var
                )));
            }
            Ok(idx)
        };

        match &rule.body {
            RuleBody::Copy(src) => Ok(ResolvedRule::Copy(earlier(src)?)),
            RuleBody::Flip(src) => Ok(ResolvedRule::Flip(earlier(src)?)),
            RuleBody::Const(bit) => {
                if *bit > 1 {
                    return Err(invalid(format!("const value {bit} outside {{0,1}}")));
                }
                Ok(ResolvedRule::Const(*bit))
            }
            RuleBody::Param(classes) => {
                let mut resolved_classes = Vec::with_capacity(classes.len());
                for class in classes {
                    let mut condition = Vec::with_capacity(class.condition.len());
                    let mut seen = BTreeSet::new();
                    for (name, bit) in &class.condition {
                        let idx = earlier(name)?;
                        if *bit > 1 {
                            return Err(invalid(format!(
                                "condition `{name}={bit}` outside {{0,1}}"
                            )));
                        }
                        if !seen.insert(idx) {
                            return Err(invalid(format!(
                                "condition repeats variable `{name}`"
                            )));
                        }
                        condition.push((idx, *bit));
                    }
                    resolved_classes.push((condition, class.param.clone()));
                }
                // Classes must partition the observed histories.
                for code in 0..(1usize << target) {
                    let history: Vec<u8> =
                        (0..target).map(|i| ((code >> (target - 1 - i)) & 1) as u8).collect();
                    let matches = resolved_classes
                        .iter()
                        .filter(|(cond, _)| ResolvedRule::class_matches(cond, &history))
                        .count();
                    if matches != 1 {
                        let rendered: Vec<String> = history
                            .iter()
                            .enumerate()
                            .map(|(i, b)| format!("{}={b}", game.variables()[i].name))
                            .collect();
                        return Err(invalid(format!(
                            "classes for `{}` match history [{}] {matches} times, expected once",
                            rule.var,
                            rendered.join(", ")
                        )));
                    }
                }
                Ok(ResolvedRule::Param(resolved_classes))
            }
        }
    }

    /// The per-player spaces, in game player order.
    pub fn spaces(&self) -> &[MeasureSpace] {
        &self.spaces
    }

    /// Combined parameter list: player order, then space declaration order.
    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Player index owning `param`.
    pub fn param_owner(&self, param: &str) -> Result<usize, Error> {
        self.param_owner
            .get(param)
            .copied()
            .ok_or_else(|| Error::UnknownParameter(param.to_string()))
    }

    /// Parameters owned by the player at `player_idx`, in joint order.
    pub fn params_of(&self, player_idx: usize) -> Vec<String> {
        self.params
            .iter()
            .filter(|p| self.param_owner[*p] == player_idx)
            .cloned()
            .collect()
    }

    pub fn var_count(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, Error> {
        self.var_names
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub(crate) fn resolved_rule(&self, var_index: usize) -> &ResolvedRule {
        &self.resolved[var_index]
    }

    /// Display label for the joint space, e.g. `X0 x Y+`.
    pub fn label(&self) -> String {
        self.spaces
            .iter()
            .map(MeasureSpace::label)
            .collect::<Vec<_>>()
            .join(" x ")
    }

    /// Probability that the variable at `var_index` is 1 given the history
    /// of all earlier variables.
    pub fn prob_one(
        &self,
        var_index: usize,
        history: &[u8],
        point: &ParamPoint,
    ) -> Result<Rational, Error> {
        if history.len() != var_index {
            return Err(Error::IncompleteHistory {
                expected: var_index,
                got: history.len(),
            });
        }
        match self.resolved[var_index].outcome_factor(history) {
            FactorKind::Fixed(bit) => Ok(rat(i64::from(bit))),
            FactorKind::Parameter(param) => point
                .get(param)
                .cloned()
                .ok_or_else(|| Error::MissingParameter(param.to_string())),
        }
    }
}

/// Probability that `var` is 1 given a history assigning all earlier
/// variables, at the given parameter point.
pub fn conditional_prob(
    joint: &JointSpace,
    var: &str,
    history: &[u8],
    point: &ParamPoint,
) -> Result<Rational, Error> {
    let idx = joint.var_index(var)?;
    joint.prob_one(idx, history, point)
}

/// Exact probability of every complete outcome under the joint space.
///
/// Entries are nonnegative and sum to exactly 1; zero-probability outcomes
/// are included.
pub fn outcome_distribution(
    joint: &JointSpace,
    point: &ParamPoint,
) -> Result<BTreeMap<Outcome, Rational>, Error> {
    let n = joint.var_count();
    let mut distribution = BTreeMap::new();
    for code in 0..(1usize << n) {
        let bits: Vec<u8> = (0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect();
        let mut probability = Rational::one();
        for (i, &bit) in bits.iter().enumerate() {
            let one = joint.prob_one(i, &bits[..i], point)?;
            let factor = if bit == 1 {
                one
            } else {
                Rational::one() - one
            };
            probability *= factor;
        }
        distribution.insert(Outcome::new(bits), probability);
    }
    Ok(distribution)
}

/// The single outcome carrying probability 1, when the induced
/// distribution is degenerate (always the case at a vertex point).
pub fn induced_outcome(
    joint: &JointSpace,
    point: &ParamPoint,
) -> Result<Option<Outcome>, Error> {
    let distribution = outcome_distribution(joint, point)?;
    Ok(distribution
        .into_iter()
        .find(|(_, probability)| probability.is_one())
        .map(|(outcome, _)| outcome))
}

/// Candidate parameter names: `p..z`, then `a..o`, then numbered
/// fallbacks, skipping anything that collides with a variable name.
fn param_name_sequence(taken: &BTreeSet<String>) -> impl Iterator<Item = String> + '_ {
    let letters = ('p'..='z').chain('a'..='o').map(|c| c.to_string());
    let numbered = (1u32..).map(|k| format!("p{k}"));
    letters
        .chain(numbered)
        .filter(move |name| !taken.contains(name))
}

/// Canonical parameter names for the fully-independent parameterization:
/// one per (variable, observed-history class), assigned in variable order
/// and class order.
fn behavioural_param_names(game: &OutcomeGame) -> Vec<Vec<String>> {
    let taken: BTreeSet<String> = game.variables().iter().map(|v| v.name.clone()).collect();
    let mut names = param_name_sequence(&taken);
    game.variables()
        .iter()
        .enumerate()
        .map(|(i, _)| (0..(1usize << i)).map(|_| names.next().unwrap()).collect())
        .collect()
}

/// The standard catalog of measure spaces for `player`, in deterministic
/// order: the fully-independent behavioural space first, then, when the
/// player owns exactly one variable, a copy and a flip coupling to each
/// earlier variable.
///
/// Labels are canonical: `<player>0` for the behavioural space and
/// `<player>+` / `<player>-` for couplings (suffixed with the source
/// variable name when there is more than one candidate source).
pub fn standard_catalog(game: &OutcomeGame, player: &str) -> Result<Vec<MeasureSpace>, Error> {
    game.player_index(player)?;
    let owned: Vec<usize> = game
        .variables()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.owner == player)
        .map(|(i, _)| i)
        .collect();
    let class_names = behavioural_param_names(game);

    let behavioural_rules: Vec<Rule> = owned
        .iter()
        .map(|&i| {
            let var = &game.variables()[i];
            let classes = (0..(1usize << i))
                .map(|code| ParamClass {
                    condition: (0..i)
                        .map(|j| {
                            (
                                game.variables()[j].name.clone(),
                                ((code >> (i - 1 - j)) & 1) as u8,
                            )
                        })
                        .collect(),
                    param: class_names[i][code].clone(),
                })
                .collect();
            Rule::param(&var.name, classes)
        })
        .collect();

    let mut catalog = vec![MeasureSpace::new(
        format!("{player}0"),
        player,
        behavioural_rules,
    )];

    // Single-source couplings are cataloged only for single-variable owners;
    // multi-variable owners keep just the behavioural space here, though
    // coupled spaces can still be defined in space files.
    if let [target] = owned[..] {
        let var_name = game.variables()[target].name.clone();
        for source in 0..target {
            let source_name = &game.variables()[source].name;
            let suffix = if target == 1 {
                String::new()
            } else {
                source_name.clone()
            };
            catalog.push(MeasureSpace::new(
                format!("{player}+{suffix}"),
                player,
                vec![Rule::copy(&var_name, source_name)],
            ));
            catalog.push(MeasureSpace::new(
                format!("{player}-{suffix}"),
                player,
                vec![Rule::flip(&var_name, source_name)],
            ));
        }
    }
    Ok(catalog)
}

/// Exact second moments of a pair of game variables under a joint space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correlation {
    pub covariance: Rational,
    pub variance_a: Rational,
    pub variance_b: Rational,
}

impl Correlation {
    /// Pearson coefficient; 0 by convention when either variance is zero.
    ///
    /// Computed from exact moments with a single final square root, so the
    /// perfectly correlated, anti-correlated, and uncorrelated cases come
    /// out as exactly ±1.0 and 0.0.
    pub fn coefficient(&self) -> f64 {
        match self.exact() {
            Some(value) => to_f64(&value),
            None => {
                let squared =
                    &self.covariance * &self.covariance / (&self.variance_a * &self.variance_b);
                let magnitude = to_f64(&squared).sqrt();
                if self.covariance.is_negative() {
                    -magnitude
                } else {
                    magnitude
                }
            }
        }
    }

    /// The coefficient as an exact rational, when it is one.
    pub fn exact(&self) -> Option<Rational> {
        if self.variance_a.is_zero() || self.variance_b.is_zero() || self.covariance.is_zero() {
            return Some(Rational::zero());
        }
        let squared = &self.covariance * &self.covariance / (&self.variance_a * &self.variance_b);
        exact_sqrt(&squared).map(|root| {
            if self.covariance.is_negative() {
                -root
            } else {
                root
            }
        })
    }
}

/// Exact moments of the indicator variables `var_a`, `var_b` under the
/// induced outcome distribution.
pub fn correlation_detail(
    joint: &JointSpace,
    point: &ParamPoint,
    var_a: &str,
    var_b: &str,
) -> Result<Correlation, Error> {
    let a = joint.var_index(var_a)?;
    let b = joint.var_index(var_b)?;
    let distribution = outcome_distribution(joint, point)?;

    let mut mean_a = Rational::zero();
    let mut mean_b = Rational::zero();
    let mut mean_ab = Rational::zero();
    for (outcome, probability) in &distribution {
        if outcome.get(a) == 1 {
            mean_a += probability;
        }
        if outcome.get(b) == 1 {
            mean_b += probability;
        }
        if outcome.get(a) == 1 && outcome.get(b) == 1 {
            mean_ab += probability;
        }
    }
    // Indicator variables: E[A^2] = E[A].
    Ok(Correlation {
        covariance: &mean_ab - &mean_a * &mean_b,
        variance_a: &mean_a - &mean_a * &mean_a,
        variance_b: &mean_b - &mean_b * &mean_b,
    })
}

/// Pearson correlation between two game variables; 0 by convention when
/// either variance is zero.
pub fn correlation(
    joint: &JointSpace,
    point: &ParamPoint,
    var_a: &str,
    var_b: &str,
) -> Result<f64, Error> {
    Ok(correlation_detail(joint, point, var_a, var_b)?.coefficient())
}
