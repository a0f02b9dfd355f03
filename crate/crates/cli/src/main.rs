mod args;
mod commands;
mod config;
mod error;
mod output;
mod problem;
mod reproduce;
mod runs;

use args::{Cli, Command};
use clap::{ArgMatches, CommandFactory, FromArgMatches};
use commands::Ctx;
use error::CliError;
use output::Output;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::process::ExitCode;

fn matches_from(args: &[OsString]) -> Result<ArgMatches, ExitCode> {
    Cli::command().try_get_matches_from(args).map_err(|e| {
        let _ = e.print();
        ExitCode::from(if e.use_stderr() { 1 } else { 0 })
    })
}

/// Effective values of every argument of the chosen command, defaults included.
fn spec_echo(m: &ArgMatches) -> BTreeMap<String, String> {
    let root = Cli::command();
    let sub = m.subcommand_name().and_then(|n| root.find_subcommand(n));
    let is_arg = |id: &str| {
        root.get_arguments()
            .chain(sub.into_iter().flat_map(|s| s.get_arguments()))
            .any(|a| a.get_id() == id)
    };
    let mut out = BTreeMap::new();
    let mut collect = |m: &ArgMatches| {
        for id in m.ids().filter(|id| is_arg(id.as_str())) {
            if let Ok(Some(vals)) = m.try_get_raw(id.as_str()) {
                let v: Vec<String> = vals.map(|s| s.to_string_lossy().into_owned()).collect();
                out.insert(id.as_str().replace('_', "-"), v.join(","));
            }
        }
    };
    collect(m);
    if let Some((_, sub)) = m.subcommand() {
        collect(sub);
    }
    out.remove("config");
    out
}

fn run(cli: &Cli, spec: BTreeMap<String, String>, command: &str) -> Result<(), CliError> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.threads.unwrap_or(0))
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let ctx = Ctx {
        out: Output {
            dir: cli.global.out.clone(),
            format: cli.global.format,
            quiet: cli.global.quiet,
        },
        spec,
        command: command.to_string(),
    };
    match &cli.command {
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::SweepBeta(a) => commands::sweep_beta(&ctx, a),
        Command::SweepSigma(a) => commands::sweep_sigma(&ctx, a),
        Command::Layer(a) => commands::layer(&ctx, a),
        Command::Shoot(a) => commands::shoot(&ctx, a),
        Command::Classify(a) => commands::classify(&ctx, a),
        Command::Reproduce(a) => reproduce::reproduce(&ctx, a),
    }
}

fn main() -> ExitCode {
    let mut args: Vec<OsString> = std::env::args_os().collect();
    let mut matches = match matches_from(&args) {
        Ok(m) => m,
        Err(code) => return code,
    };
    if let Some(path) = matches.get_one::<std::path::PathBuf>("config").cloned() {
        let extra = config::read(&path)
            .and_then(|entries| config::injected_args(&Cli::command(), &matches, &entries));
        match extra {
            Ok(extra) => {
                args.extend(extra);
                matches = match matches_from(&args) {
                    Ok(m) => m,
                    Err(code) => return code,
                };
            }
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(e.exit_code() as u8);
            }
        }
    }
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let command = matches.subcommand_name().unwrap_or_default().to_string();
    match run(&cli, spec_echo(&matches), &command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
