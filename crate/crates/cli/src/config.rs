//! Flat `key = value` configuration files. Keys are long flag names; values
//! apply only where the flag was not given on the command line.

use crate::error::CliError;
use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Command};
use std::ffi::OsString;
use std::path::Path;

pub fn parse_str(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config line {}: expected key = value, got {line:?}",
                i + 1
            )));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        if out.iter().any(|(prev, _)| prev == k) {
            return Err(CliError::Usage(format!("config line {}: duplicate key {k}", i + 1)));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

pub fn read(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_str(&text)
}

fn given_on_command_line(m: &ArgMatches, id: &str) -> bool {
    matches!(m.try_get_raw(id), Ok(Some(_)))
        && m.value_source(id) == Some(ValueSource::CommandLine)
}

/// Extra arguments that realize the config entries not overridden by flags.
/// Unknown keys, and keys that do not belong to the chosen command, are rejected.
pub fn injected_args(
    root: &Command,
    matches: &ArgMatches,
    entries: &[(String, String)],
) -> Result<Vec<OsString>, CliError> {
    let Some((sub_name, sub_matches)) = matches.subcommand() else {
        return Ok(Vec::new());
    };
    let sub = root
        .find_subcommand(sub_name)
        .expect("matched subcommand exists");
    let mut extra = Vec::new();
    for (key, value) in entries {
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        let arg = sub
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(key.as_str()))
            .ok_or_else(|| {
                CliError::Usage(format!("unknown config key {key:?} for command {sub_name}"))
            })?;
        let id = arg.get_id().as_str();
        if given_on_command_line(sub_matches, id) || given_on_command_line(matches, id) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => {
                let on: bool = value.parse().map_err(|_| {
                    CliError::Usage(format!("config key {key}: expected true or false, got {value:?}"))
                })?;
                if on {
                    extra.push(OsString::from(format!("--{key}")));
                }
            }
            _ => extra.push(OsString::from(format!("--{key}={value}"))),
        }
    }
    Ok(extra)
}
