//! Configuration, dispatch and table output behind the `loopsense` binary.

pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_config, parse_config_with_command, Command, ConfigError, Format, RunConfig};
pub use output::emit_table;
pub use run::{run, RunError};
