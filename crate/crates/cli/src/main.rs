mod args;
mod commands;
mod config;
mod layout;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};
use dockeval::par::Execution;

use args::{Cli, Command, LogLevel};

/// Bad flags, config or settings: exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// What the batch commands need besides their own arguments.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub exec: Execution,
    pub jobs: usize,
}

fn command() -> clap::Command {
    Cli::command().mut_subcommands(|s| s.args_override_self(true))
}

fn parse(argv: &[OsString]) -> Result<Cli, clap::Error> {
    let first = Cli::from_arg_matches(&command().try_get_matches_from(argv)?)?;
    let Some(path) = &first.config else {
        return Ok(first);
    };
    let sub = command()
        .try_get_matches_from(argv)?
        .subcommand_name()
        .expect("subcommand is required")
        .to_string();
    let extra = config::config_args(&command(), &sub, path)
        .map_err(|e| command().error(clap::error::ErrorKind::InvalidValue, format!("config: {}", e.0)))?;
    let merged = config::splice(argv, &sub, extra);
    Cli::from_arg_matches(&command().try_get_matches_from(merged)?)
}

fn init_logging(level: LogLevel) {
    let filter = match level {
        LogLevel::Error => log::LevelFilter::Error,
        LogLevel::Warn => log::LevelFilter::Warn,
        LogLevel::Info => log::LevelFilter::Info,
        LogLevel::Debug => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new()
        .filter_level(filter)
        .target(env_logger::Target::Stderr)
        .format(|buf, rec| writeln!(buf, "level={} {}", rec.level().as_str().to_lowercase(), rec.args()))
        .try_init();
}

fn dispatch(cli: Cli, ctx: Ctx) -> anyhow::Result<usize> {
    match cli.command {
        Command::Validate(a) => commands::validate(a, ctx),
        Command::Rmsd(a) => commands::rmsd(a, ctx),
        Command::Evaluate(a) => commands::evaluate(a, ctx),
        Command::Relax(a) => commands::relax(a, ctx),
        Command::Crossdock(a) => commands::crossdock(a, ctx),
        Command::PocketSim(a) => commands::pocket_sim(a, ctx),
        Command::Curate(a) => commands::curate(a, ctx),
        Command::Report(a) => commands::report(a, ctx),
    }
}

fn run(argv: Vec<OsString>) -> ExitCode {
    let cli = match parse(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    init_logging(cli.log_level);

    let jobs = cli.jobs.unwrap_or(0);
    let exec = if jobs == 1 { Execution::Sequential } else { Execution::Parallel };
    let ctx = Ctx { exec, jobs };

    #[cfg(feature = "parallel")]
    let result = {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if jobs > 0 {
            pool = pool.num_threads(jobs);
        }
        match pool.build() {
            Ok(pool) => pool.install(|| dispatch(cli, ctx)),
            Err(e) => Err(usage(format!("cannot start {jobs} workers: {e}"))),
        }
    };
    #[cfg(not(feature = "parallel"))]
    let result = dispatch(cli, ctx);

    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failures) => {
            log::warn!("event=finished failures={failures}");
            ExitCode::from(1)
        }
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            log::error!("event=failed error={:?}", format!("{e:#}"));
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    run(std::env::args_os().collect())
}
