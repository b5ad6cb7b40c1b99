//! `micromacro` command line front end.
//!
//! On failure a single line `error: <category>: <message>` goes to stderr and the exit code is
//! nonzero. Categories: usage, parse, config, state, io, format, worker.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use micromacro::error::{Error, Result};
use micromacro::mms::{format_table, write_table};
use micromacro::runner::config::parse_worker_grid;
use micromacro::runner::scaling::{format_records, scaling_study, ScaleMode, ScaleOptions};
use micromacro::runner::{
    format_sweep, knudsen_sweep, load_config, mms_convergence, reference, solve_and_write,
    write_frame, write_text, CaseName,
};

#[derive(Parser, Debug)]
#[command(
    name = "micromacro",
    version,
    about = "Micro-macro finite volume solver for BGK and ES-BGK"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a configuration and write frames plus a summary.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Worker grid RxC (rows along y, columns along x).
        #[arg(long)]
        workers: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Manufactured-solution convergence table.
    Mms {
        #[arg(long, value_enum)]
        case: MmsCase,
        #[arg(long)]
        levels: usize,
        /// Write the table here as well as printing it.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Knudsen sweep of the heat-transfer problem.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        /// Base configuration; defaults to the reference sweep.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Lid-cavity scaling study.
    Scale {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, value_delimiter = ',', required = true)]
        workers: Vec<usize>,
        /// Cells per worker along each direction (weak mode).
        #[arg(long, default_value_t = 36)]
        block: usize,
        /// Global cells along each direction (strong mode).
        #[arg(long, default_value_t = 360)]
        n: usize,
        #[arg(long, default_value_t = 14)]
        nv: usize,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MmsCase {
    #[value(name = "1d")]
    OneD,
    #[value(name = "2d")]
    TwoD,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Weak,
    Strong,
}

fn solve(config: &Path, workers: Option<&str>, output: Option<PathBuf>) -> Result<()> {
    let mut cfg = load_config(config)?;
    if let Some(w) = workers {
        cfg.workers = parse_worker_grid(w)?;
    }
    let out = output.unwrap_or_else(|| cfg.output_dir.clone());
    for (dir, run) in solve_and_write(&cfg, &out)? {
        println!(
            "{}: {} steps, {} frames, {:.3} s",
            dir.display(),
            run.summary.steps,
            run.frames.len(),
            run.summary.seconds
        );
    }
    Ok(())
}

fn mms(case: MmsCase, levels: usize, output: Option<PathBuf>) -> Result<()> {
    if levels == 0 {
        return Err(Error::config("levels", "need at least one level"));
    }
    let case = match case {
        MmsCase::OneD => CaseName::Mms1d,
        MmsCase::TwoD => CaseName::Mms2d,
    };
    let rows = mms_convergence(case, levels)?;
    print!("{}", format_table(&rows));
    if let Some(p) = output {
        write_table(&p, &rows)?;
    }
    Ok(())
}

fn sweep(epsilons: &[f64], config: Option<PathBuf>, output: Option<PathBuf>) -> Result<()> {
    let cfg = match config {
        Some(p) => load_config(&p)?,
        None => reference(CaseName::KnudsenSweep)?,
    };
    if let Some(e) = epsilons.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        return Err(Error::config(
            "epsilons",
            format!("{e} is not a positive number"),
        ));
    }
    let out = output.unwrap_or_else(|| cfg.output_dir.clone());
    let runs = knudsen_sweep(&cfg, epsilons)?;
    let rows: Vec<(f64, f64)> = runs.iter().map(|(e, h, _)| (*e, *h)).collect();
    for (e, _, run) in &runs {
        let dir = out.join(format!("eps_{e:e}"));
        for f in &run.frames {
            write_frame(f, &dir)?;
        }
        write_text(&dir.join("summary.txt"), &run.summary.to_text())?;
    }
    let table = format_sweep(&rows);
    write_text(&out.join("sweep.csv"), &table)?;
    print!("{table}");
    Ok(())
}

fn scale(opts: ScaleOptions, output: Option<PathBuf>) -> Result<()> {
    let text = format_records(&scaling_study(&opts)?);
    if let Some(p) = output {
        write_text(&p, &text)?;
    }
    print!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Solve {
            config,
            workers,
            output,
        } => solve(&config, workers.as_deref(), output),
        Cmd::Mms {
            case,
            levels,
            output,
        } => mms(case, levels, output),
        Cmd::Sweep {
            epsilons,
            config,
            output,
        } => sweep(&epsilons, config, output),
        Cmd::Scale {
            mode,
            workers,
            block,
            n,
            nv,
            max_steps,
            output,
        } => {
            let mode = match mode {
                Mode::Weak => ScaleMode::Weak,
                Mode::Strong => ScaleMode::Strong,
            };
            scale(
                ScaleOptions {
                    mode,
                    workers,
                    block,
                    n,
                    nv,
                    max_steps,
                },
                output,
            )
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!(
                "error: usage: {}",
                one_line(first.trim_start_matches("error:"))
            );
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.category(), one_line(&e.to_string()));
            ExitCode::from(1)
        }
    }
}
