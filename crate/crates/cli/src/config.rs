use std::path::PathBuf;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Perimeter,
    Volume,
    Center,
    KgonTable,
    Alexandrov,
    InvarianceCheck,
    ConjectureSearch,
}

/// Settings shared by every command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub output: Option<PathBuf>,
    pub nodes: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub max_dim: usize,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.nodes < 64 {
            return Err(CliError::Config(format!(
                "--nodes must be at least 64, got {}",
                self.nodes
            )));
        }
        if self.command == Command::Alexandrov && !self.nodes.is_multiple_of(4) {
            return Err(CliError::Config(format!(
                "alexandrov needs --nodes divisible by 4, got {}",
                self.nodes
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-2) {
            return Err(CliError::Config(format!(
                "--tolerance must lie in (0, 1e-2], got {}",
                self.tolerance
            )));
        }
        if self.max_dim == 0 {
            return Err(CliError::Config("--max-dim must be positive".into()));
        }
        Ok(())
    }
}
