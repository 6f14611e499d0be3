use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mixhypo::estimate::Method;
use mixhypo::Family;
use mixhypo_cli::{cmd_check, cmd_eval, cmd_fit, cmd_sample, CliError, JobConfig, Output, EXIT_CONFIG};

/// Mixed hypoexponential-G distributions: curves, samples, fits and checks.
#[derive(Debug, Parser)]
#[command(name = "mixhypo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate t, pdf, cdf, reliability and hazard as CSV.
    Eval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, allow_hyphen_values = true)]
        t_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Draw values, one per line.
    Sample {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Fit a family to a data file and print the result as JSON.
    Fit {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        family: Option<Family>,
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        method: Option<Method>,
        #[arg(long = "components")]
        n_components: Option<usize>,
        /// Hold the shared parameter at this value.
        #[arg(long)]
        fixed_shared: Option<f64>,
        /// Starting point `shared,v1,...,vn`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        init: Option<Vec<f64>>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        sep_min: Option<f64>,
    },
    /// Audit the closed forms and run the construction-equivalence suite.
    Check {
        #[command(flatten)]
        common: Common,
        /// Restrict to one family.
        #[arg(long)]
        family: Option<Family>,
        #[arg(long, allow_hyphen_values = true)]
        tolerance: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// JSON job configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpecArgs {
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    shared: Option<f64>,
    /// Comma-separated vector parameter.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    vector: Option<Vec<f64>>,
    #[arg(long)]
    sep_min: Option<f64>,
}

impl SpecArgs {
    fn into_config(self) -> JobConfig {
        JobConfig {
            family: self.family,
            shared: self.shared,
            vector: self.vector,
            sep_min: self.sep_min,
            ..Default::default()
        }
    }
}

type CommandFn = fn(&JobConfig) -> Result<Output, CliError>;

fn resolve(common: &Common, flags: JobConfig) -> Result<JobConfig, CliError> {
    let base = match &common.config {
        Some(path) => JobConfig::from_file(path)?,
        None => JobConfig::default(),
    };
    let flags = JobConfig { seed: common.seed, output: common.output.clone(), ..flags };
    Ok(base.overlay(flags))
}

fn run(cli: Cli) -> Result<(Output, Option<PathBuf>), CliError> {
    let (cfg, command): (JobConfig, CommandFn) = match cli.command {
        Command::Eval { common, spec, t_min, t_max, points } => {
            let flags = JobConfig { t_min, t_max, points, ..spec.into_config() };
            (resolve(&common, flags)?, cmd_eval)
        }
        Command::Sample { common, spec, count } => {
            let flags = JobConfig { count, ..spec.into_config() };
            (resolve(&common, flags)?, cmd_sample)
        }
        Command::Fit {
            common,
            family,
            data,
            method,
            n_components,
            fixed_shared,
            init,
            max_iter,
            tol,
            restarts,
            sep_min,
        } => {
            let flags = JobConfig {
                family,
                data,
                method,
                n_components,
                fixed_shared,
                init,
                max_iter,
                tol,
                restarts,
                sep_min,
                ..Default::default()
            };
            (resolve(&common, flags)?, cmd_fit)
        }
        Command::Check { common, family, tolerance, grid, samples } => {
            let flags = JobConfig { family, tolerance, grid, samples, ..Default::default() };
            (resolve(&common, flags)?, cmd_check)
        }
    };
    Ok((command(&cfg)?, cfg.output))
}

fn emit(out: &Output, path: Option<PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(&p, &out.text).map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Config(format!("cannot write output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MIXHYPO_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = run(cli).and_then(|(out, path)| emit(&out, path).map(|_| out.code));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code().max(EXIT_CONFIG))
        }
    }
}
