//! Finite sequential games as ordered binary decision variables with a
//! complete-outcome payoff table, plus the classical backward-induction
//! baseline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;
use crate::rational::Rational;

/// A binary decision variable in the game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    /// Variable name, unique within the game.
    pub name: String,
    /// Player who decides this variable.
    pub owner: String,
    /// Stage index; strictly increasing along the variable list.
    pub stage: u32,
}

/// A complete assignment of `{0,1}` to every game variable, in variable order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome(Vec<u8>);

impl Outcome {
    /// Builds an outcome from bits in variable order. Panics on non-bit values.
    pub fn new(bits: Vec<u8>) -> Self {
        assert!(bits.iter().all(|&b| b <= 1), "outcome bits must be 0 or 1");
        Outcome(bits)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Bit of the variable at `index`.
    pub fn get(&self, index: usize) -> u8 {
        self.0[index]
    }

    /// The observed history before the variable at `index`: all earlier bits.
    pub fn history(&self, index: usize) -> &[u8] {
        &self.0[..index]
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// A structural defect found by [`OutcomeGame::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    PlayerCount(usize),
    DuplicatePlayer(String),
    DuplicateVariable(String),
    /// Two consecutive variables whose stages do not strictly increase,
    /// named in list order.
    StageOrder {
        earlier: String,
        later: String,
    },
    UnknownOwner {
        variable: String,
        owner: String,
    },
    /// A complete outcome without a payoff entry. Holds the rendered
    /// assignment, e.g. `x=1 y=0`.
    MissingPayoff(String),
    /// A payoff table key that is not a complete outcome of this game.
    ForeignOutcome(String),
    /// A payoff vector whose length differs from the player count.
    PayoffLength {
        outcome: String,
        expected: usize,
        got: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PlayerCount(n) => write!(f, "game has {n} players, expected exactly 2"),
            Violation::DuplicatePlayer(p) => write!(f, "duplicate player `{p}`"),
            Violation::DuplicateVariable(v) => write!(f, "duplicate variable `{v}`"),
            Violation::StageOrder { earlier, later } => write!(
                f,
                "variables `{earlier}` and `{later}` are not in strictly increasing stage order"
            ),
            Violation::UnknownOwner { variable, owner } => {
                write!(f, "variable `{variable}` owned by unlisted player `{owner}`")
            }
            Violation::MissingPayoff(o) => write!(f, "missing payoff entry for outcome {o}"),
            Violation::ForeignOutcome(o) => {
                write!(f, "payoff entry for {o} does not match the variable list")
            }
            Violation::PayoffLength {
                outcome,
                expected,
                got,
            } => write!(
                f,
                "payoff entry for {outcome} lists {got} payoffs, expected {expected}"
            ),
        }
    }
}

/// A finite two-player sequential game over ordered binary variables.
///
/// Every variable observes all earlier variables, and the payoff table is
/// total over the `2^n` complete outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeGame {
    name: String,
    players: Vec<String>,
    variables: Vec<Variable>,
    payoffs: BTreeMap<Outcome, Vec<Rational>>,
}

impl OutcomeGame {
    pub fn new(
        name: impl Into<String>,
        players: Vec<String>,
        variables: Vec<Variable>,
        payoffs: BTreeMap<Outcome, Vec<Rational>>,
    ) -> Self {
        OutcomeGame {
            name: name.into(),
            players,
            variables,
            payoffs,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn payoffs(&self) -> &BTreeMap<Outcome, Vec<Rational>> {
        &self.payoffs
    }

    /// Index of `player` in the player list.
    pub fn player_index(&self, player: &str) -> Result<usize, Error> {
        self.players
            .iter()
            .position(|p| p == player)
            .ok_or_else(|| Error::UnknownPlayer(player.to_string()))
    }

    /// Index of `name` in the variable list.
    pub fn var_index(&self, name: &str) -> Result<usize, Error> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// All `2^n` complete outcomes in lexicographic order (first variable
    /// most significant).
    pub fn outcomes(&self) -> Vec<Outcome> {
        let n = self.variables.len();
        (0..(1usize << n))
            .map(|code| {
                Outcome::new((0..n).map(|i| ((code >> (n - 1 - i)) & 1) as u8).collect())
            })
            .collect()
    }

    /// Renders an outcome as `x=1 y=0` using variable names.
    pub fn format_outcome(&self, outcome: &Outcome) -> String {
        self.variables
            .iter()
            .zip(outcome.bits())
            .map(|(v, b)| format!("{}={}", v.name, b))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Checks the structural invariants, returning all violations found.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();

        if self.players.len() != 2 {
            violations.push(Violation::PlayerCount(self.players.len()));
        }
        let mut seen_players = BTreeSet::new();
        for p in &self.players {
            if !seen_players.insert(p.clone()) {
                violations.push(Violation::DuplicatePlayer(p.clone()));
            }
        }

        let mut seen_vars = BTreeSet::new();
        for v in &self.variables {
            if !seen_vars.insert(v.name.clone()) {
                violations.push(Violation::DuplicateVariable(v.name.clone()));
            }
            if !self.players.contains(&v.owner) {
                violations.push(Violation::UnknownOwner {
                    variable: v.name.clone(),
                    owner: v.owner.clone(),
                });
            }
        }
        for pair in self.variables.windows(2) {
            if pair[0].stage >= pair[1].stage {
                violations.push(Violation::StageOrder {
                    earlier: pair[0].name.clone(),
                    later: pair[1].name.clone(),
                });
            }
        }

        let n = self.variables.len();
        for outcome in self.outcomes() {
            match self.payoffs.get(&outcome) {
                None => violations.push(Violation::MissingPayoff(self.format_outcome(&outcome))),
                Some(vector) if vector.len() != self.players.len() => {
                    violations.push(Violation::PayoffLength {
                        outcome: self.format_outcome(&outcome),
                        expected: self.players.len(),
                        got: vector.len(),
                    });
                }
                Some(_) => {}
            }
        }
        for key in self.payoffs.keys() {
            if key.len() != n {
                violations.push(Violation::ForeignOutcome(format!("{key}")));
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// Exact payoff of `player` at a complete `outcome`.
    pub fn leaf_payoff(&self, outcome: &Outcome, player: &str) -> Result<Rational, Error> {
        let idx = self.player_index(player)?;
        self.leaf_payoffs(outcome).map(|v| v[idx].clone())
    }

    /// Exact payoff vector (player order) at a complete `outcome`.
    pub fn leaf_payoffs(&self, outcome: &Outcome) -> Result<Vec<Rational>, Error> {
        if outcome.len() != self.variables.len() {
            return Err(Error::IncompleteOutcome {
                expected: self.variables.len(),
                got: outcome.len(),
            });
        }
        self.payoffs
            .get(outcome)
            .cloned()
            .ok_or_else(|| Error::MissingPayoff(self.format_outcome(outcome)))
    }
}

/// Tie-break rule for an indifferent chooser in backward induction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Indifferent owner selects move 0.
    #[default]
    FavorZero,
    /// Indifferent owner selects move 1.
    FavorOne,
}

/// Subgame-perfect pure profile under the given tie-break.
///
/// Works back from the last variable: at every history the variable's owner
/// picks the move maximizing their own continuation payoff, breaking exact
/// ties per `tiebreak`. Returns the realized outcome and its payoff vector.
pub fn backward_induction(
    game: &OutcomeGame,
    tiebreak: TieBreak,
) -> Result<(Outcome, Vec<Rational>), Error> {
    induce_from(game, &[], tiebreak)
}

/// Backward induction of the subgame rooted at a partial history.
pub fn induce_from(
    game: &OutcomeGame,
    history: &[u8],
    tiebreak: TieBreak,
) -> Result<(Outcome, Vec<Rational>), Error> {
    let n = game.variables().len();
    if history.len() > n {
        return Err(Error::IncompleteHistory {
            expected: n,
            got: history.len(),
        });
    }
    if history.len() == n {
        let outcome = Outcome::new(history.to_vec());
        let payoffs = game.leaf_payoffs(&outcome)?;
        return Ok((outcome, payoffs));
    }

    let var = &game.variables()[history.len()];
    let owner = game.player_index(&var.owner)?;

    let with = |bit: u8| -> Result<(Outcome, Vec<Rational>), Error> {
        let mut next = history.to_vec();
        next.push(bit);
        induce_from(game, &next, tiebreak)
    };
    let zero = with(0)?;
    let one = with(1)?;

    let pick_one = match one.1[owner].cmp(&zero.1[owner]) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => tiebreak == TieBreak::FavorOne,
    };
    Ok(if pick_one { one } else { zero })
}
