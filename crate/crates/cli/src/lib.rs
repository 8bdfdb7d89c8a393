//! Command-line front end: the expression language, symbol declarations,
//! CFT declaration files and the `pva` subcommands.

pub mod cftfile;
pub mod commands;
pub mod expr;
pub mod session;

pub use commands::{run, run_args, Cli, Command, Format, Outcome};
pub use session::{Session, SessionError, SymbolDecl};
