//! Command-line front end: game file parsing, analysis subcommands, and
//! deterministic table output.

pub mod commands;
pub mod parse;
pub mod reproduce;
pub mod table;

pub use commands::{run_command, CommandOutput};
pub use parse::{format_game_file, parse_game_file, GameFile, ParseError};
