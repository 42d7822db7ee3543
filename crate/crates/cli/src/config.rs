//! TOML run configurations.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::args::{Command, CurveArgs, Format, OutputArgs};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Verify,
    Residual,
    Classify,
    Solve,
    Minimize,
    Sweep,
    Probe,
    Curve,
}

/// A complete run: one subcommand, its inputs, parameters and output.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandName,
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    #[serde(default)]
    pub params: toml::Table,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses a configuration; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> CliResult<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        for p in &mut cfg.inputs {
            *p = base.join(&*p);
        }
        if let Some(o) = &mut cfg.output {
            *o = base.join(&*o);
        }
        Ok(cfg)
    }

    fn params<T: DeserializeOwned>(&self) -> CliResult<T> {
        toml::Value::Table(self.params.clone())
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(format!("params: {}", e.message())))
    }

    fn single_input(&self) -> CliResult<Option<PathBuf>> {
        match self.inputs.as_slice() {
            [] => Ok(None),
            [p] => Ok(Some(p.clone())),
            _ => Err(CliError::Config(format!(
                "{:?} takes at most one input, got {}",
                self.command,
                self.inputs.len()
            ))),
        }
    }

    fn no_inputs(&self) -> CliResult<()> {
        if self.inputs.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(format!("{:?} takes no inputs", self.command)))
        }
    }

    /// The equivalent command-line invocation.
    pub fn to_command(&self) -> CliResult<Command> {
        let output = OutputArgs {
            out: self.output.clone(),
            format: self.format,
        };
        Ok(match self.command {
            CommandName::Verify => {
                let mut a: crate::args::VerifyArgs = self.params()?;
                if let Some(p) = self.single_input()? {
                    if a.family.is_some() {
                        return Err(CliError::Config("verify takes either an input or a family".into()));
                    }
                    a.curve = Some(p);
                }
                a.output = output;
                Command::Verify(a)
            }
            CommandName::Residual => {
                let mut a: crate::args::ResidualArgs = self.params()?;
                a.curve = self.single_input()?.or(a.curve);
                a.output = output;
                Command::Residual(a)
            }
            CommandName::Classify => {
                let mut a: crate::args::ClassifyArgs = self.params()?;
                a.input = self.single_input()?.or(a.input);
                a.output = output;
                Command::Classify(a)
            }
            CommandName::Solve => {
                self.no_inputs()?;
                let mut a: crate::args::SolveArgs = self.params()?;
                a.output = output;
                Command::Solve(a)
            }
            CommandName::Minimize => {
                let mut a: crate::args::MinimizeArgs = self.params()?;
                a.curve = self.single_input()?.or(a.curve);
                a.output = output;
                Command::Minimize(a)
            }
            CommandName::Sweep => {
                self.no_inputs()?;
                let mut a: crate::args::SweepArgs = self.params()?;
                a.output = output;
                Command::Sweep(a)
            }
            CommandName::Probe => {
                self.no_inputs()?;
                let mut a: crate::args::ProbeArgs = self.params()?;
                a.output = output;
                Command::Probe(a)
            }
            CommandName::Curve => {
                self.no_inputs()?;
                if self.format.is_some() {
                    return Err(CliError::Config("curve files are always JSON".into()));
                }
                let mut a: CurveArgs = self.params()?;
                a.out = self.output.clone();
                Command::Curve(a)
            }
        })
    }
}
