//! Subcommand dispatch and output assembly.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use num::bigint::BigInt;
use num::Zero;
use varsolve_core::{
    backward_induction, best_response, build_meta_game, expected_payoff, grid_oracle,
    induced_outcome, meta_pure_equilibria, mixed_space_payoff, standard_catalog,
    within_space_equilibria, Error as CoreError, JointSpace, MeasureSpace, MixedSpaceWeighting,
    OutcomeGame, ParamPoint, Rational, TieBreak,
};

use crate::parse::{parse_game_file, GameFile};
use crate::reproduce;
use crate::table::{
    fmt_decimal, fmt_outcome, fmt_payoffs, fmt_point, fmt_rational, is_zero_one, Format, Table,
};

/// Result of running the CLI: exit code plus captured streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A failed command: usage and parse problems exit 2, analysis problems
/// exit 1. Analysis failures may still carry tables for stdout.
enum Failure {
    Usage(String),
    Analysis(String),
    AnalysisWithOutput { stdout: String, message: String },
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Analysis(e.to_string())
    }
}

type CmdResult = Result<String, Failure>;

const BUNDLED_GAMES: &[(&str, &str)] = &[
    ("chainstore.game", include_str!("../games/chainstore.game")),
    ("example.game", include_str!("../games/example.game")),
];

#[derive(Parser)]
#[command(
    name = "varsolve",
    version,
    about = "Equilibrium solver for finite sequential games with selectable probability measure spaces"
)]
struct Cli {
    /// Game definition file; `chainstore.game` and `example.game` fall
    /// back to the bundled copies when no such file exists.
    #[arg(long, global = true)]
    game: Option<String>,

    /// Output as an aligned table or tab-separated values.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Print decimals (12 significant digits) instead of exact rationals.
    #[arg(long, global = true)]
    decimal: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a game file, printing a summary.
    Validate,
    /// Print exact expected-payoff polynomials per joint space and player.
    Payoffs {
        /// Comma-separated space labels, one per player (default: all pairs).
        #[arg(long)]
        spaces: Option<String>,
    },
    /// Print payoff partial derivatives at a parameter point.
    Grad {
        /// Parameter point, e.g. `p=0.5,q=0.1,r=1/3`.
        #[arg(long)]
        at: String,
        /// Comma-separated space labels (default: behavioural pair).
        #[arg(long)]
        spaces: Option<String>,
    },
    /// Correlation between two game variables at a parameter point.
    Corr {
        /// Two comma-separated variable names, e.g. `x,y`.
        #[arg(long)]
        vars: String,
        /// Parameter point.
        #[arg(long)]
        at: String,
        /// Comma-separated space labels (default: behavioural pair).
        #[arg(long)]
        spaces: Option<String>,
    },
    /// Within-space equilibria of a joint space.
    Eq {
        /// Comma-separated space labels, one per player.
        #[arg(long)]
        spaces: String,
    },
    /// Meta-game payoff matrix over the space catalogs, with pure equilibria.
    Meta,
    /// Expected payoff when the opponent mixes over measure spaces.
    Mixed {
        /// Weights per space label, e.g. `Y-:1/5,Y0:3/10,Y+:1/2`.
        #[arg(long)]
        weights: String,
        /// Values for the opponent's within-space parameters, e.g. `r=0.3`.
        #[arg(long)]
        at: Option<String>,
        /// Own space label (default: own behavioural space).
        #[arg(long)]
        own: Option<String>,
    },
    /// Exhaustive grid-search check of a best response.
    Oracle {
        /// Comma-separated space labels, one per player.
        #[arg(long)]
        spaces: String,
        /// Player to maximize for.
        #[arg(long)]
        player: String,
        /// Fixed opponent parameters, e.g. `p=0.7`.
        #[arg(long)]
        fixed: Option<String>,
        /// Grid step; must divide 1 evenly.
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Re-run the bundled analyses and check them against known results.
    Reproduce {
        /// Check all bundled games (the default).
        #[arg(long)]
        all: bool,
        /// Restrict to `chainstore` or `example`.
        which: Option<String>,
    },
}

/// Runs the CLI on the given arguments (program name excluded).
pub fn run_command<S: AsRef<str>>(args: &[S]) -> CommandOutput {
    let mut argv: Vec<String> = vec!["varsolve".to_string()];
    argv.extend(args.iter().map(|a| a.as_ref().to_string()));

    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandOutput {
                    code: 0,
                    stdout: err.to_string(),
                    stderr: String::new(),
                },
                _ => CommandOutput {
                    code: 2,
                    stdout: String::new(),
                    stderr: err.to_string(),
                },
            }
        }
    };

    let result = dispatch(&cli);
    match result {
        Ok(stdout) => CommandOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(Failure::Analysis(message)) => CommandOutput {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
        Err(Failure::AnalysisWithOutput { stdout, message }) => CommandOutput {
            code: 1,
            stdout,
            stderr: format!("error: {message}\n"),
        },
        Err(Failure::Usage(message)) => CommandOutput {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        },
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Reproduce { all, which } => {
            let which = match (all, which.as_deref()) {
                (_, None) => reproduce::Scope::All,
                (false, Some("chainstore")) => reproduce::Scope::ChainStore,
                (false, Some("example")) => reproduce::Scope::Example,
                (true, Some(_)) => {
                    return Err(Failure::Usage(
                        "pass either --all or a game name, not both".to_string(),
                    ))
                }
                (_, Some(other)) => {
                    return Err(Failure::Usage(format!(
                        "unknown reproduction target `{other}` (expected `chainstore` or `example`)"
                    )))
                }
            };
            let (ok, report) = reproduce::run(which);
            if ok {
                Ok(report)
            } else {
                Err(Failure::AnalysisWithOutput {
                    stdout: report,
                    message: "reproduction checks failed".to_string(),
                })
            }
        }
        command => {
            let file = load_game(cli.game.as_deref())?;
            match command {
                Command::Validate => cmd_validate(&file),
                Command::Payoffs { spaces } => cmd_payoffs(&file, spaces.as_deref(), cli.format),
                Command::Grad { at, spaces } => {
                    cmd_grad(&file, at, spaces.as_deref(), cli.format, cli.decimal)
                }
                Command::Corr { vars, at, spaces } => {
                    cmd_corr(&file, vars, at, spaces.as_deref(), cli.format, cli.decimal)
                }
                Command::Eq { spaces } => cmd_eq(&file, spaces, cli.format, cli.decimal),
                Command::Meta => cmd_meta(&file, cli.format, cli.decimal),
                Command::Mixed { weights, at, own } => cmd_mixed(
                    &file,
                    weights,
                    at.as_deref(),
                    own.as_deref(),
                    cli.format,
                    cli.decimal,
                ),
                Command::Oracle {
                    spaces,
                    player,
                    fixed,
                    step,
                } => cmd_oracle(
                    &file,
                    spaces,
                    player,
                    fixed.as_deref(),
                    *step,
                    cli.format,
                    cli.decimal,
                ),
                Command::Reproduce { .. } => unreachable!("handled above"),
            }
        }
    }
}

fn load_game(path: Option<&str>) -> Result<GameFile, Failure> {
    let path = path.ok_or_else(|| Failure::Usage("--game <file> is required".to_string()))?;
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(io_error) => {
            let bundled = std::path::Path::new(path)
                .file_name()
                .and_then(|n| n.to_str())
                .and_then(|name| BUNDLED_GAMES.iter().find(|(b, _)| *b == name));
            match bundled {
                Some((_, text)) => (*text).to_string(),
                None => {
                    return Err(Failure::Usage(format!("cannot read `{path}`: {io_error}")))
                }
            }
        }
    };
    parse_game_file(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

/// Spaces available for a player: the file's definitions, falling back to
/// the standard catalog, presented in anti/independent/correlated order.
fn player_spaces(file: &GameFile, player: &str) -> Result<Vec<MeasureSpace>, Failure> {
    let mut spaces: Vec<MeasureSpace> = file
        .spaces_of(player)
        .into_iter()
        .cloned()
        .collect();
    if spaces.is_empty() {
        spaces = standard_catalog(&file.game, player)?;
    }
    spaces.sort_by(|a, b| {
        (a.coupling_sign(), a.label()).cmp(&(b.coupling_sign(), b.label()))
    });
    Ok(spaces)
}

fn resolve_space(file: &GameFile, label: &str) -> Result<MeasureSpace, Failure> {
    if let Some(space) = file.space(label) {
        return Ok(space.clone());
    }
    for player in file.game.players() {
        if let Some(space) = standard_catalog(&file.game, player)?
            .into_iter()
            .find(|s| s.label() == label)
        {
            return Ok(space);
        }
    }
    Err(Failure::Analysis(format!("unknown space label `{label}`")))
}

/// The fully-independent space of a player: the first all-`param` file
/// space, else the catalog's behavioural space.
fn behavioural_space(file: &GameFile, player: &str) -> Result<MeasureSpace, Failure> {
    let from_file = file.spaces_of(player).into_iter().find(|s| {
        !s.rules().is_empty()
            && s.rules()
                .iter()
                .all(|r| matches!(r.body, varsolve_core::RuleBody::Param(_)))
    });
    match from_file {
        Some(space) => Ok(space.clone()),
        None => Ok(standard_catalog(&file.game, player)?.remove(0)),
    }
}

fn joint_from_labels(file: &GameFile, labels: &str) -> Result<JointSpace, Failure> {
    let spaces: Vec<MeasureSpace> = labels
        .split(',')
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|label| resolve_space(file, label))
        .collect::<Result<_, _>>()?;
    if spaces.len() != file.game.players().len() {
        return Err(Failure::Usage(format!(
            "--spaces needs {} comma-separated labels",
            file.game.players().len()
        )));
    }
    Ok(JointSpace::new(&file.game, spaces)?)
}

fn default_joint(file: &GameFile) -> Result<JointSpace, Failure> {
    let spaces: Vec<MeasureSpace> = file
        .game
        .players()
        .iter()
        .map(|p| behavioural_space(file, p))
        .collect::<Result<_, _>>()?;
    Ok(JointSpace::new(&file.game, spaces)?)
}

fn joint_or_default(file: &GameFile, labels: Option<&str>) -> Result<JointSpace, Failure> {
    match labels {
        Some(labels) => joint_from_labels(file, labels),
        None => default_joint(file),
    }
}

/// Parses `a/b`, an integer, or a decimal literal into an exact rational.
fn parse_rational_arg(text: &str) -> Result<Rational, Failure> {
    let bad = || Failure::Usage(format!("bad rational `{text}`"));
    if let Some(value) = crate::parse::parse_file_rational(text) {
        return Ok(value);
    }
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text),
    };
    let (integer, fraction) = digits.split_once('.').ok_or_else(bad)?;
    if !integer.chars().all(|c| c.is_ascii_digit())
        || !fraction.chars().all(|c| c.is_ascii_digit())
        || fraction.is_empty()
    {
        return Err(bad());
    }
    let integer: BigInt = if integer.is_empty() {
        BigInt::zero()
    } else {
        integer.parse().map_err(|_| bad())?
    };
    let numerator: BigInt = fraction.parse().map_err(|_| bad())?;
    let scale = BigInt::from(10u32).pow(fraction.len() as u32);
    let value = Rational::from_integer(integer) + Rational::new(numerator, scale);
    Ok(value * Rational::from_integer(BigInt::from(sign)))
}

/// Parses `p=0.5,q=1/3` into a parameter point.
fn parse_point_arg(text: &str) -> Result<ParamPoint, Failure> {
    let mut pairs = Vec::new();
    for clause in text.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        let (param, value_text) = clause
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("expected `<param>=<value>` in `{clause}`")))?;
        pairs.push((param.to_string(), parse_rational_arg(value_text)?));
    }
    ParamPoint::from_pairs(pairs).map_err(|e| Failure::Usage(e.to_string()))
}

fn cmd_validate(file: &GameFile) -> CmdResult {
    let game = &file.game;
    Ok(format!(
        "ok: {}: {} players, {} variables, {} payoff rows, {} spaces\n",
        game.name(),
        game.players().len(),
        game.variables().len(),
        game.payoffs().len(),
        file.spaces.len()
    ))
}

fn cmd_payoffs(file: &GameFile, labels: Option<&str>, format: Format) -> CmdResult {
    let game = &file.game;
    let joints: Vec<JointSpace> = match labels {
        Some(labels) => vec![joint_from_labels(file, labels)?],
        None => {
            let firsts = player_spaces(file, &game.players()[0])?;
            let seconds = player_spaces(file, &game.players()[1])?;
            let mut joints = Vec::new();
            for first in &firsts {
                for second in &seconds {
                    joints.push(JointSpace::new(
                        game,
                        vec![first.clone(), second.clone()],
                    )?);
                }
            }
            joints
        }
    };

    let mut table = Table::new(["spaces", "player", "expected payoff"]);
    for joint in &joints {
        for player in game.players() {
            let poly = expected_payoff(game, joint, player)?;
            table.row([joint.label(), player.clone(), poly.to_string()]);
        }
    }
    Ok(table.render(format))
}

fn cmd_grad(
    file: &GameFile,
    at: &str,
    labels: Option<&str>,
    format: Format,
    decimal: bool,
) -> CmdResult {
    let game = &file.game;
    let joint = joint_or_default(file, labels)?;
    let point = parse_point_arg(at)?;
    for param in point.params() {
        joint.param_owner(param)?;
    }

    let mut table = Table::new(["player", "parameter", "partial", "value"]);
    for player in game.players() {
        let poly = expected_payoff(game, &joint, player)?;
        for param in joint.params() {
            let partial = poly.partial(param);
            let value = partial.eval(&point)?;
            table.row([
                player.clone(),
                param.clone(),
                partial.to_string(),
                fmt_rational(&value, decimal),
            ]);
        }
    }
    Ok(table.render(format))
}

fn cmd_corr(
    file: &GameFile,
    vars: &str,
    at: &str,
    labels: Option<&str>,
    format: Format,
    decimal: bool,
) -> CmdResult {
    let names: Vec<&str> = vars.split(',').map(str::trim).collect();
    let [var_a, var_b] = names[..] else {
        return Err(Failure::Usage(
            "--vars needs exactly two comma-separated names".to_string(),
        ));
    };
    let joint = joint_or_default(file, labels)?;
    let point = parse_point_arg(at)?;
    let detail = varsolve_core::correlation_detail(&joint, &point, var_a, var_b)?;
    let rendered = match detail.exact() {
        Some(value) if !decimal => fmt_rational(&value, false),
        _ => fmt_decimal(detail.coefficient()),
    };
    let mut table = Table::new(["var_a", "var_b", "correlation"]);
    table.row([var_a.to_string(), var_b.to_string(), rendered]);
    Ok(table.render(format))
}

fn cmd_eq(file: &GameFile, labels: &str, format: Format, decimal: bool) -> CmdResult {
    let game = &file.game;
    let joint = joint_from_labels(file, labels)?;
    let report = within_space_equilibria(game, &joint)?;
    if report.equilibria.is_empty() {
        return Ok(format!("no equilibria found in {}\n", joint.label()));
    }

    let params: Vec<String> = joint.params().to_vec();
    let mut table = Table::new(["selected", "point", "indifferent", "outcome", "payoffs"]);
    for (index, equilibrium) in report.equilibria.iter().enumerate() {
        let pinned: Vec<String> = params
            .iter()
            .filter(|p| !equilibrium.indifferent.contains(*p))
            .cloned()
            .collect();
        let indifferent = if equilibrium.indifferent.is_empty() {
            "-".to_string()
        } else {
            equilibrium
                .indifferent
                .iter()
                .cloned()
                .collect::<Vec<_>>()
                .join(",")
        };
        let outcome = match induced_outcome(&joint, &equilibrium.point)? {
            Some(outcome) => fmt_outcome(game, &outcome),
            None => "-".to_string(),
        };
        table.row([
            if report.selected == Some(index) { "*" } else { "" }.to_string(),
            fmt_point(&equilibrium.point, &pinned, decimal),
            indifferent,
            outcome,
            fmt_payoffs(&equilibrium.payoffs, decimal),
        ]);
    }
    Ok(table.render(format))
}

fn cmd_meta(file: &GameFile, format: Format, decimal: bool) -> CmdResult {
    let game = &file.game;
    let catalogs = vec![
        player_spaces(file, &game.players()[0])?,
        player_spaces(file, &game.players()[1])?,
    ];
    let meta = build_meta_game(game, &catalogs)?;
    let equilibria = meta_pure_equilibria(&meta);

    let markers: Vec<(String, String)> = match &equilibria {
        Ok(list) => list
            .iter()
            .map(|e| (e.profile[0].clone(), e.profile[1].clone()))
            .collect(),
        Err(_) => Vec::new(),
    };

    let mut headers = vec!["payoffs".to_string()];
    headers.extend(meta.labels(0).iter().map(|l| l.to_string()));
    let mut table = Table::new(headers);
    for (j, y_label) in meta.labels(1).iter().enumerate() {
        let mut row = vec![y_label.to_string()];
        for (i, x_label) in meta.labels(0).iter().enumerate() {
            let cell = meta.cell(i, j);
            let mut rendered = match &cell.payoffs {
                Some(payoffs) => fmt_payoffs(payoffs, decimal),
                None => "-".to_string(),
            };
            if cell.ambiguous {
                rendered.push_str(" ?");
            }
            if markers
                .iter()
                .any(|(x, y)| x == x_label && y == *y_label)
            {
                rendered.push_str(" *");
            }
            row.push(rendered);
        }
        table.row(row);
    }
    let mut out = table.render(format);

    match equilibria {
        Ok(list) => {
            if list.is_empty() {
                out.push_str("no pure meta equilibrium\n");
            }
            for equilibrium in list {
                out.push_str(&format!(
                    "meta equilibrium {} -> {}\n",
                    equilibrium,
                    fmt_payoffs(&equilibrium.payoffs, decimal)
                ));
            }
            Ok(out)
        }
        Err(error) => Err(Failure::AnalysisWithOutput {
            stdout: out,
            message: error.to_string(),
        }),
    }
}

fn cmd_mixed(
    file: &GameFile,
    weights: &str,
    at: Option<&str>,
    own_label: Option<&str>,
    format: Format,
    decimal: bool,
) -> CmdResult {
    let game = &file.game;
    let mut parsed: Vec<(String, Rational)> = Vec::new();
    for clause in weights.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        let (label, value) = clause.split_once(':').ok_or_else(|| {
            Failure::Usage(format!("expected `<space>:<weight>` in `{clause}`"))
        })?;
        parsed.push((label.to_string(), parse_rational_arg(value)?));
    }
    if parsed.is_empty() {
        return Err(Failure::Usage("--weights is empty".to_string()));
    }

    let branch_spaces: Vec<MeasureSpace> = parsed
        .iter()
        .map(|(label, _)| resolve_space(file, label))
        .collect::<Result<_, _>>()?;
    let mixing_player = branch_spaces[0].owner().to_string();
    if let Some(stray) = branch_spaces.iter().find(|s| s.owner() != mixing_player) {
        return Err(Failure::Analysis(format!(
            "weighted spaces belong to different players (`{}` vs `{}`)",
            mixing_player,
            stray.owner()
        )));
    }
    let own_player = game
        .players()
        .iter()
        .find(|p| **p != mixing_player)
        .ok_or_else(|| Failure::Analysis("no opposing player".to_string()))?
        .clone();

    let own_space = match own_label {
        Some(label) => resolve_space(file, label)?,
        None => behavioural_space(file, &own_player)?,
    };
    if own_space.owner() != own_player {
        return Err(Failure::Analysis(format!(
            "own space `{}` belongs to `{}`, expected `{own_player}`",
            own_space.label(),
            own_space.owner()
        )));
    }

    let weighting = MixedSpaceWeighting::new(mixing_player.clone(), parsed)?;
    let opponent_point = match at {
        Some(at) => parse_point_arg(at)?,
        None => ParamPoint::empty(),
    };
    let poly = mixed_space_payoff(game, &own_space, &branch_spaces, &weighting, &opponent_point)?;

    let mut table = Table::new(["quantity", "value", "maximize"]);
    table.row([
        format!("<payoff {own_player}>"),
        poly.to_string(),
        "-".to_string(),
    ]);
    for param in own_space.params() {
        let partial = poly.partial(param);
        let direction = if partial.is_zero() {
            "indifferent".to_string()
        } else if partial.params().is_empty() {
            let slope = partial.eval(&ParamPoint::empty())?;
            if slope > varsolve_core::rat(0) {
                format!("{param}=1")
            } else {
                format!("{param}=0")
            }
        } else {
            "-".to_string()
        };
        let value = if partial.params().is_empty() {
            fmt_rational(&partial.eval(&ParamPoint::empty())?, decimal)
        } else {
            partial.to_string()
        };
        table.row([format!("d/d{param}"), value, direction]);
    }
    Ok(table.render(format))
}

fn cmd_oracle(
    file: &GameFile,
    labels: &str,
    player: &str,
    fixed: Option<&str>,
    step: f64,
    format: Format,
    decimal: bool,
) -> CmdResult {
    let game = &file.game;
    let joint = joint_from_labels(file, labels)?;
    let fixed = match fixed {
        Some(text) => parse_point_arg(text)?,
        None => ParamPoint::empty(),
    };
    let optimum = grid_oracle(game, &joint, player, &fixed, step)?;
    let response = best_response(game, &joint, player, &fixed)?;

    let grid_point = if optimum.point.is_empty() {
        "()".to_string()
    } else {
        let names: Vec<&str> = optimum.point.iter().map(|(p, _)| p.as_str()).collect();
        let values: Vec<String> = optimum
            .point
            .iter()
            .map(|(_, v)| fmt_decimal(*v))
            .collect();
        format!("({})=({})", names.join(","), values.join(","))
    };
    let vertex_value = varsolve_core::rational::to_f64(&response.value);

    let mut table = Table::new(["quantity", "value"]);
    table.row(["grid optimum".to_string(), fmt_decimal(optimum.value)]);
    table.row(["grid point".to_string(), grid_point]);
    table.row([
        "vertex optimum".to_string(),
        fmt_rational(&response.value, decimal),
    ]);
    table.row([
        "difference".to_string(),
        fmt_decimal((optimum.value - vertex_value).abs()),
    ]);
    Ok(table.render(format))
}

/// Shared by `reproduce`: backward-induction summary used in its report.
pub(crate) fn backward_induction_line(game: &OutcomeGame) -> Result<String, CoreError> {
    let (outcome, payoffs) = backward_induction(game, TieBreak::FavorZero)?;
    Ok(format!(
        "{} -> {}",
        fmt_outcome(game, &outcome),
        fmt_payoffs(&payoffs, false)
    ))
}
