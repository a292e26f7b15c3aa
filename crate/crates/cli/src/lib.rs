//! Command-line front end for `ga-vieta`.

pub mod commands;
pub mod expr;

pub use commands::{run, Cli, Output};
pub use expr::{parse_multivector, print_multivector, ParseError};
