use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swipt_cli::{
    generate_problem, load_problem, run_experiment, run_suite, solve_problem, write_csv, write_jsonl,
    Algorithm, CliError, ExperimentConfig, Result, SolveOptions, Suite, VerifyOptions,
};
use swipt_core::{CsiMode, GreedyVariant};

#[derive(Parser)]
#[command(name = "swipt", version, about = "Receive-antenna partitioning for SWIPT")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment sweep and write CSV (or JSON lines).
    Run {
        #[arg(short, long)]
        config: PathBuf,
        /// Output file; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// Fill the `wall_s` column (makes output run-dependent).
        #[arg(long)]
        timing: bool,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Solve one problem file and print the result as JSON.
    Solve {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value = "csir")]
        mode: CsiMode,
        #[arg(long, value_enum, default_value = "greedy")]
        alg: Algorithm,
        /// Seed for continuous greedy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Greedy stops as soon as the overall best antenna is infeasible.
        #[arg(long)]
        literal: bool,
    },
    /// Write a random problem file.
    Gen {
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 5)]
        nt: usize,
        #[arg(long, default_value_t = 8)]
        nr: usize,
        #[arg(long, default_value_t = 4)]
        np: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Circuit-power threshold in watts.
        #[arg(long, conflicts_with = "pc_coeff")]
        pc: Option<f64>,
        /// Threshold as a multiple of `nr`.
        #[arg(long, default_value_t = 0.2)]
        pc_coeff: f64,
        /// Transmit power in watts.
        #[arg(long, default_value_t = 5.0)]
        power: f64,
    },
    /// Run a property suite; exits 0 iff no violations.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "csir")]
        mode: CsiMode,
    },
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| CliError::Io {
            path: p.to_path_buf(),
            source: e,
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable output");
    println!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            output,
            json,
            timing,
            threads,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rows = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Config(format!("--threads: {e}")))?
                    .install(|| run_experiment(&cfg))?,
                None => run_experiment(&cfg)?,
            };
            let path = output.as_deref();
            let mut out = writer(path)?;
            if json {
                write_jsonl(&mut out, &rows, timing).map_err(io_err(path))?;
            } else {
                write_csv(&mut out, &rows, timing).map_err(io_err(path))?;
            }
            out.flush().map_err(io_err(path))?;
        }
        Command::Solve {
            input,
            mode,
            alg,
            seed,
            literal,
        } => {
            let problem = load_problem(&input)?;
            let greedy = if literal {
                GreedyVariant::Literal
            } else {
                GreedyVariant::FeasibleArgmax
            };
            print_json(&solve_problem(
                &problem,
                mode,
                alg,
                SolveOptions { seed, greedy },
            )?)?;
        }
        Command::Gen {
            output,
            nt,
            nr,
            np,
            seed,
            pc,
            pc_coeff,
            power,
        } => {
            let problem = generate_problem(nt, nr, np, seed, pc.unwrap_or(pc_coeff * nr as f64), power)?;
            let text = serde_json::to_string_pretty(&problem).expect("serializable problem");
            std::fs::write(&output, text + "\n").map_err(|e| CliError::Io {
                path: output,
                source: e,
            })?;
        }
        Command::Verify {
            suite,
            trials,
            seed,
            mode,
        } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, &VerifyOptions::new(trials, seed, mode))?;
            print_json(&report)?;
            if !suite.passes(&report) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
