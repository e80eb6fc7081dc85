//! Command line front end of `graded-pbw`: chart files, the expression
//! grammar and the `gpbw` subcommands.
//!
//! Exit codes: 0 success, 1 a failed identity or an unexpected algebra
//! error, 2 unreadable input (chart file or expression), 3 truncation
//! overflow, 4 a failed precondition such as a connection with torsion.

pub mod chart_file;
pub mod commands;
pub mod error;
pub mod parse;

pub use error::CliError;
