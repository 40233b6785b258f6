use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eac_cli::{cmd_find, cmd_register, cmd_simulate, cmd_verify, parse_times, resolve_seed, CliError, FindRoute, Outcome, RunConfig, SEED_ENV};

/// Find and verify error-avoiding codes for open quantum systems.
#[derive(Debug, Parser)]
#[command(name = "eac", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search a model for codes and write a JSON report.
    Find {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check a code against a model, statically and by sampled joint evolution.
    Verify {
        model: PathBuf,
        /// A find report, a verify report, or a bare `{ambient_dim, basis}` document.
        code: PathBuf,
        /// Which entry of a find report's code list to check.
        #[arg(long, default_value_t = 0)]
        code_index: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Singlet code of an N-cell register of d-level systems, as CSV rows.
    Register {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Sweep N from --n up to this value.
        #[arg(long)]
        n_max: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Purity and fidelity time series of a system coupled to an environment.
    Simulate {
        model: PathBuf,
        state: PathBuf,
        envops: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RouteArg {
    Auto,
    Eigenspace,
    Singlet,
    Weight,
}

impl From<RouteArg> for FindRoute {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Auto => FindRoute::Auto,
            RouteArg::Eigenspace => FindRoute::Eigenspace,
            RouteArg::Singlet => FindRoute::Singlet,
            RouteArg::Weight => FindRoute::Weight,
        }
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, default_value_t = eac_core::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 4)]
    env_dim: usize,
    #[arg(long, default_value_t = 16)]
    trials: usize,
    /// Overridden by EAC_SEED when that is set.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated sample times; default 8 points log-spaced in [0.1, 10].
    #[arg(long)]
    times: Option<String>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest ambient dimension accepted.
    #[arg(long, default_value_t = eac_core::codes::DEFAULT_AMBIENT_CAP)]
    cap: usize,
}

impl CommonArgs {
    fn config(&self) -> Result<RunConfig, CliError> {
        let env_seed = std::env::var(SEED_ENV).ok();
        let mut config = RunConfig {
            tol: self.tol,
            env_dim: self.env_dim,
            trials: self.trials,
            seed: resolve_seed(self.seed, env_seed.as_deref())?,
            ambient_cap: self.cap,
            ..RunConfig::default()
        };
        if let Some(times) = &self.times {
            config.times = parse_times(times)?;
        }
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let outcome = match &cli.command {
        Command::Find { model, route, common } => (cmd_find(model, (*route).into(), &common.config()?)?, common),
        Command::Verify {
            model,
            code,
            code_index,
            common,
        } => (cmd_verify(model, code, *code_index, &common.config()?)?, common),
        Command::Register { d, n, n_max, common } => {
            (cmd_register(*d, *n, n_max.unwrap_or(*n), &common.config()?)?, common)
        }
        Command::Simulate {
            model,
            state,
            envops,
            common,
        } => (cmd_simulate(model, state, envops, &common.config()?)?, common),
    };
    Ok((outcome.0, outcome.1.out.clone()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out) = match run(cli) {
        Ok(result) => result,
        Err(err) => {
            eprintln!("eac: {err}");
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &outcome.output) {
                eprintln!("eac: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{}", outcome.output),
    }
    ExitCode::from(outcome.exit_code as u8)
}
