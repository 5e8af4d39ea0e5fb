use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subdiff_cli::commands::{decay_fits, mlf, ode_table, oracle_table, OdeMethod, OdeRequest};
use subdiff_cli::output::fmt17;
use subdiff_cli::tables::{format_tables, run_tables, TableOptions};
use subdiff_cli::{run, CliError, CliResult, PdeConfig};

#[derive(Debug, Parser)]
#[command(name = "subdiff", version, about = "Weakly coupled time-fractional subdiffusion toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the Mittag-Leffler function E_{eta,mu}(z) for real z.
    Mlf {
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// Solve the two-component fractional relaxation system with u(0) = 1, v(0) = 0.
    Ode {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        c1: f64,
        #[arg(long, allow_hyphen_values = true)]
        c2: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, value_enum, default_value = "picard")]
        method: OdeMethod,
        /// Picard time steps, or number of log-spaced output times for laplace.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Run a finite-difference experiment described by a JSON configuration.
    Pde {
        #[arg(long)]
        config: String,
        /// Write the resolved configuration and results as JSON.
        #[arg(long)]
        report: Option<String>,
    },
    /// Exact and leading-order norms of the slow component of the one-way pair with u0 = sin x.
    Oracle {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long)]
        output: Option<String>,
    },
    /// Reproduce the K = 3 decay-rate tables.
    Report {
        #[arg(long, required = true)]
        tables: bool,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        horizon: Option<f64>,
    },
    /// Fit decay exponents to the norm columns of a CSV file.
    Decay {
        #[arg(long)]
        input: String,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        window: Option<Vec<f64>>,
    },
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Mlf { eta, mu, z } => {
            println!("{}", fmt17(mlf(eta, mu, z)?));
        }
        Command::Ode {
            alpha,
            beta,
            c1,
            c2,
            t_max,
            method,
            points,
            output,
        } => {
            let default = match method {
                OdeMethod::Picard => 4096,
                OdeMethod::Laplace => 41,
            };
            let req = OdeRequest {
                alpha,
                beta,
                c1,
                c2,
                t_max,
                method,
                points: points.unwrap_or(default),
            };
            ode_table(&req)?.write_to(output.as_deref())?;
        }
        Command::Pde { config, report } => {
            let text = fs::read_to_string(&config).map_err(|e| CliError::io(&config, e))?;
            let cfg = PdeConfig::from_json(&text)?;
            let outcome = run(&cfg)?;
            if cfg.output.is_none() {
                outcome.csv.write_to(None)?;
            }
            if let Some(path) = report {
                let json = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
                fs::write(&path, json).map_err(|e| CliError::io(&path, e))?;
            }
            eprintln!("{}", outcome.report);
        }
        Command::Oracle {
            beta,
            t_max,
            points,
            output,
        } => {
            oracle_table(beta, t_max, points)?.write_to(output.as_deref())?;
        }
        Command::Report {
            tables: _,
            cells,
            steps,
            horizon,
        } => {
            let mut opts = TableOptions::default();
            if let Some(h) = horizon {
                opts.horizon = h;
                opts.steps = (h / subdiff_cli::config::DEFAULT_DT).round() as usize;
            }
            opts.cells = cells.unwrap_or(opts.cells);
            opts.steps = steps.unwrap_or(opts.steps);
            let rows = run_tables(&opts)?;
            println!("{}", format_tables(&rows, opts.tolerance));
        }
        Command::Decay { input, window } => {
            let file = fs::File::open(&input).map_err(|e| CliError::io(&input, e))?;
            let window = window.map(|w| (w[0], w[1]));
            for f in decay_fits(file, window)? {
                println!(
                    "{}: exponent {:+.6} on [{}, {}] ({} samples, rms {:.3e})",
                    f.column, f.fit.exponent, f.fit.window.0, f.fit.window.1, f.fit.samples, f.fit.rms_residual
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
