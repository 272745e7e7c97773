//! Line-oriented parser for game and space definition files.
//!
//! Grammar (one declaration per line, `#` starts a comment):
//!
//! ```text
//! game <string>
//! players <id> <id>
//! var <name> owner=<player> stage=<int>
//! payoff <name>=<bit> <name>=<bit> ... -> <player>:<rational> <player>:<rational>
//! space <label> owner=<player>
//!   rule <var> | <name>=<bit>[,<name>=<bit>...] : param <id>
//!   rule <var> : copy <name> | flip <name> | const <bit>
//! ```
//!
//! Rationals are written `a/b` or as integers. Rule lines are indented
//! under their `space` line; the `| ...` condition is omitted for the
//! unconditional class.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use varsolve_core::{
    MeasureSpace, Outcome, OutcomeGame, ParamClass, Rational, Rule, Variable,
};

/// A parse or semantic error with its location in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    /// 1-based column number.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed game definition: the game plus its named space definitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameFile {
    pub game: OutcomeGame,
    pub spaces: Vec<MeasureSpace>,
}

impl GameFile {
    pub fn space(&self, label: &str) -> Option<&MeasureSpace> {
        self.spaces.iter().find(|s| s.label() == label)
    }

    /// File-defined spaces of one player, in declaration order.
    pub fn spaces_of(&self, player: &str) -> Vec<&MeasureSpace> {
        self.spaces.iter().filter(|s| s.owner() == player).collect()
    }
}

/// One whitespace-separated token with its 1-based column.
struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (offset, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(from) = start.take() {
                tokens.push(Token {
                    column: from + 1,
                    text: &line[from..offset],
                });
            }
        } else if start.is_none() {
            start = Some(offset);
        }
    }
    if let Some(from) = start {
        tokens.push(Token {
            column: from + 1,
            text: &line[from..],
        });
    }
    tokens
}

/// Strips a `#` comment, respecting double quotes.
fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (offset, ch) in line.char_indices() {
        match ch {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..offset],
            _ => {}
        }
    }
    line
}

/// Parses `a/b` or an integer.
pub fn parse_file_rational(text: &str) -> Option<Rational> {
    if let Some((numerator, denominator)) = text.split_once('/') {
        let numerator: BigInt = numerator.parse().ok()?;
        let denominator: BigInt = denominator.parse().ok()?;
        if denominator == BigInt::from(0) {
            return None;
        }
        Some(Rational::new(numerator, denominator))
    } else {
        let integer: BigInt = text.parse().ok()?;
        Some(Rational::from_integer(integer))
    }
}

fn parse_bit(text: &str) -> Option<u8> {
    match text {
        "0" => Some(0),
        "1" => Some(1),
        _ => None,
    }
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    name: Option<String>,
    players: Option<Vec<String>>,
    variables: Vec<Variable>,
    payoff_rows: Vec<(usize, Outcome, Vec<Rational>)>,
    spaces: Vec<(usize, MeasureSpace)>,
}

impl<'a> Parser<'a> {
    fn fail<T>(&self, line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(line, column, message))
    }

    fn players(&self, line: usize) -> Result<&[String], ParseError> {
        match &self.players {
            Some(players) => Ok(players),
            None => Err(ParseError::new(line, 1, "no `players` declaration yet")),
        }
    }

    fn var_index(&self, name: &str, line: usize, column: usize) -> Result<usize, ParseError> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| ParseError::new(line, column, format!("unknown variable `{name}`")))
    }

    fn key_value<'t>(
        &self,
        token: &Token<'t>,
        key: &str,
        line: usize,
    ) -> Result<&'t str, ParseError> {
        match token.text.split_once('=') {
            Some((k, v)) if k == key && !v.is_empty() => Ok(v),
            _ => self.fail(line, token.column, format!("expected `{key}=<value>`")),
        }
    }

    fn parse_game_line(&mut self, line: usize, rest: &str) -> Result<(), ParseError> {
        if self.name.is_some() {
            return self.fail(line, 1, "duplicate `game` declaration");
        }
        let rest = rest.trim();
        if rest.is_empty() {
            return self.fail(line, 1, "`game` needs a name");
        }
        let name = rest
            .strip_prefix('"')
            .and_then(|s| s.strip_suffix('"'))
            .unwrap_or(rest);
        self.name = Some(name.to_string());
        Ok(())
    }

    fn parse_players(&mut self, line: usize, tokens: &[Token]) -> Result<(), ParseError> {
        if self.players.is_some() {
            return self.fail(line, 1, "duplicate `players` declaration");
        }
        if tokens.len() != 2 {
            return self.fail(line, 1, "expected exactly two player ids");
        }
        if tokens[0].text == tokens[1].text {
            return self.fail(
                line,
                tokens[1].column,
                format!("duplicate player `{}`", tokens[1].text),
            );
        }
        self.players = Some(tokens.iter().map(|t| t.text.to_string()).collect());
        Ok(())
    }

    fn parse_var(&mut self, line: usize, tokens: &[Token]) -> Result<(), ParseError> {
        if tokens.len() != 3 {
            return self.fail(line, 1, "expected `var <name> owner=<player> stage=<int>`");
        }
        let name = tokens[0].text.to_string();
        if self.variables.iter().any(|v| v.name == name) {
            return self.fail(line, tokens[0].column, format!("duplicate variable `{name}`"));
        }
        let owner = self.key_value(&tokens[1], "owner", line)?.to_string();
        if !self.players(line)?.contains(&owner) {
            return self.fail(line, tokens[1].column, format!("unknown player `{owner}`"));
        }
        let stage_text = self.key_value(&tokens[2], "stage", line)?;
        let stage: u32 = stage_text.parse().map_err(|_| {
            ParseError::new(line, tokens[2].column, format!("bad stage `{stage_text}`"))
        })?;
        if let Some(last) = self.variables.last() {
            if last.stage >= stage {
                return self.fail(
                    line,
                    tokens[2].column,
                    format!(
                        "stage {stage} of `{name}` does not increase over stage {} of `{}`",
                        last.stage, last.name
                    ),
                );
            }
        }
        self.variables.push(Variable { name, owner, stage });
        Ok(())
    }

    fn parse_payoff(&mut self, line: usize, tokens: &[Token]) -> Result<(), ParseError> {
        let players = self.players(line)?.to_vec();
        let arrow = tokens
            .iter()
            .position(|t| t.text == "->")
            .ok_or_else(|| ParseError::new(line, 1, "payoff line needs `->`"))?;

        let mut bits: Vec<Option<u8>> = vec![None; self.variables.len()];
        for token in &tokens[..arrow] {
            let (name, bit_text) = token.text.split_once('=').ok_or_else(|| {
                ParseError::new(line, token.column, "expected `<variable>=<bit>`")
            })?;
            let index = self.var_index(name, line, token.column)?;
            let bit = parse_bit(bit_text).ok_or_else(|| {
                ParseError::new(line, token.column, format!("bad bit `{bit_text}`"))
            })?;
            if bits[index].is_some() {
                return self.fail(line, token.column, format!("variable `{name}` listed twice"));
            }
            bits[index] = Some(bit);
        }
        let missing: Vec<&str> = self
            .variables
            .iter()
            .zip(&bits)
            .filter(|(_, b)| b.is_none())
            .map(|(v, _)| v.name.as_str())
            .collect();
        if !missing.is_empty() {
            return self.fail(
                line,
                1,
                format!("payoff line does not assign: {}", missing.join(", ")),
            );
        }
        let outcome = Outcome::new(bits.into_iter().map(Option::unwrap).collect());

        let mut values: Vec<Option<Rational>> = vec![None; players.len()];
        for token in &tokens[arrow + 1..] {
            let (player, value_text) = token.text.split_once(':').ok_or_else(|| {
                ParseError::new(line, token.column, "expected `<player>:<rational>`")
            })?;
            let index = players.iter().position(|p| p == player).ok_or_else(|| {
                ParseError::new(line, token.column, format!("unknown player `{player}`"))
            })?;
            let value = parse_file_rational(value_text).ok_or_else(|| {
                ParseError::new(line, token.column, format!("bad rational `{value_text}`"))
            })?;
            if values[index].is_some() {
                return self.fail(line, token.column, format!("player `{player}` listed twice"));
            }
            values[index] = Some(value);
        }
        let unpaid: Vec<&str> = players
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.is_none())
            .map(|(p, _)| p.as_str())
            .collect();
        if !unpaid.is_empty() {
            return self.fail(
                line,
                1,
                format!("payoff line misses players: {}", unpaid.join(", ")),
            );
        }
        if self.payoff_rows.iter().any(|(_, o, _)| *o == outcome) {
            return self.fail(line, 1, "duplicate payoff line for this outcome");
        }
        self.payoff_rows.push((
            line,
            outcome,
            values.into_iter().map(Option::unwrap).collect(),
        ));
        Ok(())
    }

    fn parse_space_header(
        &mut self,
        line: usize,
        tokens: &[Token],
    ) -> Result<(String, String), ParseError> {
        if tokens.len() != 2 {
            return self.fail(line, 1, "expected `space <label> owner=<player>`");
        }
        let label = tokens[0].text.to_string();
        if self.spaces.iter().any(|(_, s)| s.label() == label) {
            return self.fail(line, tokens[0].column, format!("duplicate space `{label}`"));
        }
        let owner = self.key_value(&tokens[1], "owner", line)?.to_string();
        if !self.players(line)?.contains(&owner) {
            return self.fail(line, tokens[1].column, format!("unknown player `{owner}`"));
        }
        Ok((label, owner))
    }

    fn parse_rule(&self, line: usize, tokens: &[Token]) -> Result<Rule, ParseError> {
        if tokens.is_empty() {
            return self.fail(line, 1, "empty rule");
        }
        let var = tokens[0].text.to_string();
        self.var_index(&var, line, tokens[0].column)?;

        let colon = tokens
            .iter()
            .position(|t| t.text == ":")
            .ok_or_else(|| ParseError::new(line, 1, "rule needs `:`"))?;
        let body = &tokens[colon + 1..];

        // Optional `| <cond>` between the variable and the colon.
        let condition = match tokens.get(1) {
            Some(token) if token.text == "|" => {
                let mut condition = Vec::new();
                for token in &tokens[2..colon] {
                    for clause in token.text.split(',').filter(|c| !c.is_empty()) {
                        let (name, bit_text) = clause.split_once('=').ok_or_else(|| {
                            ParseError::new(line, token.column, "expected `<variable>=<bit>`")
                        })?;
                        self.var_index(name, line, token.column)?;
                        let bit = parse_bit(bit_text).ok_or_else(|| {
                            ParseError::new(line, token.column, format!("bad bit `{bit_text}`"))
                        })?;
                        condition.push((name.to_string(), bit));
                    }
                }
                Some(condition)
            }
            _ if colon != 1 => {
                return self.fail(line, tokens[1].column, "expected `|` or `:` after the variable")
            }
            _ => None,
        };

        let keyword = body
            .first()
            .ok_or_else(|| ParseError::new(line, 1, "rule needs a body"))?;
        let argument = body.get(1);
        if body.len() > 2 {
            return self.fail(line, body[2].column, "unexpected trailing tokens");
        }
        let needs = |what: &str| -> Result<&Token, ParseError> {
            argument.ok_or_else(|| {
                ParseError::new(line, keyword.column, format!("`{}` needs {what}", keyword.text))
            })
        };

        match keyword.text {
            "param" => {
                let id = needs("a parameter id")?;
                Ok(Rule::param(
                    &var,
                    vec![ParamClass {
                        condition: condition.unwrap_or_default(),
                        param: id.text.to_string(),
                    }],
                ))
            }
            "copy" | "flip" => {
                if condition.is_some() {
                    return self.fail(line, keyword.column, "couplings take no condition");
                }
                let source = needs("a source variable")?;
                self.var_index(source.text, line, source.column)?;
                Ok(if keyword.text == "copy" {
                    Rule::copy(&var, source.text)
                } else {
                    Rule::flip(&var, source.text)
                })
            }
            "const" => {
                if condition.is_some() {
                    return self.fail(line, keyword.column, "`const` takes no condition");
                }
                let bit_token = needs("a bit")?;
                let bit = parse_bit(bit_token.text).ok_or_else(|| {
                    ParseError::new(
                        line,
                        bit_token.column,
                        format!("probability literal `{}` outside {{0,1}}", bit_token.text),
                    )
                })?;
                Ok(Rule::constant(&var, bit))
            }
            other => self.fail(line, keyword.column, format!("unknown rule body `{other}`")),
        }
    }
}

/// Parses a game/space definition file. The returned game passes
/// [`OutcomeGame::validate`] and every space passes
/// [`MeasureSpace::validate_against`].
pub fn parse_game_file(text: &str) -> Result<GameFile, ParseError> {
    let mut parser = Parser {
        lines: text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect(),
        name: None,
        players: None,
        variables: Vec::new(),
        payoff_rows: Vec::new(),
        spaces: Vec::new(),
    };

    // Rules of the space block currently open, with its header line.
    let mut open_space: Option<(usize, String, String, Vec<Rule>)> = None;
    let mut last_line = 1;

    for (line, raw) in parser.lines.clone() {
        last_line = line;
        let stripped = strip_comment(raw);
        if stripped.trim().is_empty() {
            continue;
        }
        let indented = stripped.starts_with(' ') || stripped.starts_with('\t');
        let tokens = tokenize(stripped);
        let keyword = &tokens[0];

        if indented || keyword.text == "rule" {
            let Some((_, _, _, rules)) = open_space.as_mut() else {
                return Err(ParseError::new(
                    line,
                    keyword.column,
                    "rule outside a `space` block",
                ));
            };
            if keyword.text != "rule" {
                return Err(ParseError::new(
                    line,
                    keyword.column,
                    format!("expected `rule`, found `{}`", keyword.text),
                ));
            }
            let rule = parser.parse_rule(line, &tokens[1..])?;
            // Several `param` lines for one variable accumulate into one
            // rule with several classes.
            match rules.iter_mut().find(|r| r.var == rule.var) {
                None => rules.push(rule),
                Some(existing) => match (&mut existing.body, rule.body) {
                    (
                        varsolve_core::RuleBody::Param(classes),
                        varsolve_core::RuleBody::Param(new_classes),
                    ) => classes.extend(new_classes),
                    _ => {
                        return Err(ParseError::new(
                            line,
                            keyword.column,
                            format!("variable `{}` already has a rule", rule.var),
                        ));
                    }
                },
            }
            continue;
        }

        // A non-indented line closes any open space block.
        if let Some((header_line, label, owner, rules)) = open_space.take() {
            parser
                .spaces
                .push((header_line, MeasureSpace::new(label, owner, rules)));
        }

        match keyword.text {
            "game" => {
                let rest = &stripped[keyword.column - 1 + "game".len()..];
                parser.parse_game_line(line, rest)?;
            }
            "players" => parser.parse_players(line, &tokens[1..])?,
            "var" => parser.parse_var(line, &tokens[1..])?,
            "payoff" => parser.parse_payoff(line, &tokens[1..])?,
            "space" => {
                let (label, owner) = parser.parse_space_header(line, &tokens[1..])?;
                open_space = Some((line, label, owner, Vec::new()));
            }
            other => {
                return Err(ParseError::new(
                    line,
                    keyword.column,
                    format!("unknown declaration `{other}`"),
                ));
            }
        }
    }
    if let Some((header_line, label, owner, rules)) = open_space.take() {
        parser
            .spaces
            .push((header_line, MeasureSpace::new(label, owner, rules)));
    }

    let name = parser
        .name
        .clone()
        .ok_or_else(|| ParseError::new(1, 1, "expected a `game` declaration"))?;
    let players = parser.players(last_line)?.to_vec();
    if parser.variables.is_empty() {
        return Err(ParseError::new(last_line, 1, "no variables declared"));
    }

    let payoffs: BTreeMap<Outcome, Vec<Rational>> = parser
        .payoff_rows
        .iter()
        .map(|(_, outcome, values)| (outcome.clone(), values.clone()))
        .collect();
    let game = OutcomeGame::new(name, players, parser.variables.clone(), payoffs);
    if let Err(violations) = game.validate() {
        let rendered: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(ParseError::new(
            last_line,
            1,
            format!("invalid game: {}", rendered.join("; ")),
        ));
    }

    let mut spaces = Vec::new();
    for (header_line, space) in parser.spaces {
        space
            .validate_against(&game)
            .map_err(|e| ParseError::new(header_line, 1, e.to_string()))?;
        spaces.push(space);
    }
    // Parameter ids must not straddle players, or no joint space could
    // ever pair the two definitions.
    for (i, a) in spaces.iter().enumerate() {
        for b in &spaces[i + 1..] {
            if a.owner() != b.owner() {
                if let Some(shared) = a.params().iter().find(|p| b.params().contains(p)) {
                    return Err(ParseError::new(
                        1,
                        1,
                        format!(
                            "parameter `{shared}` is used by both `{}` and `{}`, owned by different players",
                            a.label(),
                            b.label()
                        ),
                    ));
                }
            }
        }
    }

    Ok(GameFile { game, spaces })
}

/// Pretty-prints a game file in canonical form; the output re-parses to an
/// equal [`GameFile`].
pub fn format_game_file(file: &GameFile) -> String {
    let mut out = String::new();
    let game = &file.game;
    out.push_str(&format!("game \"{}\"\n", game.name()));
    out.push_str(&format!("players {}\n\n", game.players().join(" ")));
    for variable in game.variables() {
        out.push_str(&format!(
            "var {} owner={} stage={}\n",
            variable.name, variable.owner, variable.stage
        ));
    }
    out.push('\n');
    for outcome in game.outcomes() {
        let assignment: Vec<String> = game
            .variables()
            .iter()
            .zip(outcome.bits())
            .map(|(v, b)| format!("{}={b}", v.name))
            .collect();
        let payoffs: Vec<String> = game
            .players()
            .iter()
            .zip(game.payoffs()[&outcome].iter())
            .map(|(p, value)| format!("{p}:{value}"))
            .collect();
        out.push_str(&format!(
            "payoff {} -> {}\n",
            assignment.join(" "),
            payoffs.join(" ")
        ));
    }
    for space in &file.spaces {
        out.push_str(&format!("\nspace {} owner={}\n", space.label(), space.owner()));
        for rule in space.rules() {
            match &rule.body {
                varsolve_core::RuleBody::Param(classes) => {
                    for class in classes {
                        if class.condition.is_empty() {
                            out.push_str(&format!("  rule {} : param {}\n", rule.var, class.param));
                        } else {
                            let condition: Vec<String> = class
                                .condition
                                .iter()
                                .map(|(v, b)| format!("{v}={b}"))
                                .collect();
                            out.push_str(&format!(
                                "  rule {} | {} : param {}\n",
                                rule.var,
                                condition.join(","),
                                class.param
                            ));
                        }
                    }
                }
                varsolve_core::RuleBody::Copy(source) => {
                    out.push_str(&format!("  rule {} : copy {source}\n", rule.var));
                }
                varsolve_core::RuleBody::Flip(source) => {
                    out.push_str(&format!("  rule {} : flip {source}\n", rule.var));
                }
                varsolve_core::RuleBody::Const(bit) => {
                    out.push_str(&format!("  rule {} : const {bit}\n", rule.var));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use varsolve_core::games::{chain_store, example_game};

    const CHAINSTORE: &str = include_str!("../games/chainstore.game");
    const EXAMPLE: &str = include_str!("../games/example.game");

    #[test]
    fn bundled_chainstore_parses() {
        let file = parse_game_file(CHAINSTORE).unwrap();
        assert_eq!(file.game.players().len(), 2);
        assert_eq!(file.game.variables().len(), 2);
        assert_eq!(file.game.payoffs().len(), 4);
        assert_eq!(file.spaces.len(), 4);
        assert_eq!(file.game, chain_store());
    }

    #[test]
    fn bundled_example_parses() {
        let file = parse_game_file(EXAMPLE).unwrap();
        assert_eq!(file.spaces.len(), 3);
        assert_eq!(file.game, example_game());
        assert_eq!(file.space("Y1").unwrap().coupling_sign(), 1);
    }

    #[test]
    fn empty_file_fails_at_line_one() {
        let err = parse_game_file("").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        let err = parse_game_file("# only a comment\n\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
    }

    #[test]
    fn later_stage_coupling_is_a_semantic_error() {
        let text = "\
game coupled
players X Y
var x owner=X stage=1
var z owner=Y stage=2
payoff x=0 z=0 -> X:0 Y:0
payoff x=0 z=1 -> X:0 Y:0
payoff x=1 z=0 -> X:0 Y:0
payoff x=1 z=1 -> X:0 Y:0
space X1 owner=X
  rule x : copy z
";
        let err = parse_game_file(text).unwrap_err();
        assert!(err.message.contains('z'), "{}", err.message);
    }

    #[test]
    fn missing_payoff_entry_names_the_outcome() {
        let text = "\
game short
players X Y
var x owner=X stage=1
var y owner=Y stage=2
payoff x=0 y=0 -> X:0 Y:0
payoff x=0 y=1 -> X:0 Y:0
payoff x=1 y=0 -> X:0 Y:0
";
        let err = parse_game_file(text).unwrap_err();
        assert!(err.message.contains("x=1 y=1"), "{}", err.message);
    }

    #[test]
    fn duplicate_variable_is_reported_with_location() {
        let text = "\
game dup
players X Y
var x owner=X stage=1
var x owner=Y stage=2
";
        let err = parse_game_file(text).unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("duplicate variable"));
    }

    #[test]
    fn const_rule_rejects_non_bits() {
        let text = "\
game c
players X Y
var x owner=X stage=1
payoff x=0 -> X:0 Y:0
payoff x=1 -> X:0 Y:0
space X1 owner=X
  rule x : const 2
";
        let err = parse_game_file(text).unwrap_err();
        assert!(err.message.contains("outside"), "{}", err.message);
    }

    #[test]
    fn round_trip_is_stable() {
        for text in [CHAINSTORE, EXAMPLE] {
            let parsed = parse_game_file(text).unwrap();
            let formatted = format_game_file(&parsed);
            let reparsed = parse_game_file(&formatted).unwrap();
            assert_eq!(parsed, reparsed);
        }
    }

    #[test]
    fn cross_player_parameter_reuse_is_rejected() {
        let text = "\
game clash
players X Y
var x owner=X stage=1
var y owner=Y stage=2
payoff x=0 y=0 -> X:0 Y:0
payoff x=0 y=1 -> X:0 Y:0
payoff x=1 y=0 -> X:0 Y:0
payoff x=1 y=1 -> X:0 Y:0
space X0 owner=X
  rule x : param p
space Y0 owner=Y
  rule y : param p
";
        let err = parse_game_file(text).unwrap_err();
        assert!(err.message.contains("different players"), "{}", err.message);
    }
}
