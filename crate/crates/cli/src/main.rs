//! `pdm`: build pseudo-density matrices from schedule files, sweep waiting
//! times, locate causal transitions and run the verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 invariant violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pdm_core::causality::classify_default;
use pdm_core::schedule::format::{matrix_to_spec, parse_schedule};
use pdm_core::sweep::{rows_to_csv, SweepConfig};
use pdm_core::svg::emit_svg;
use pdm_core::verify::{run_verify, DEFAULT_SEED, DEFAULT_TRIALS};
use pdm_core::{build_pdm, Error};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "pdm", version, about = "Pseudo-density matrices and the trace-norm causality monotone")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the PDM of a schedule file and report its spectrum and f_tr.
    Build {
        file: PathBuf,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the waiting time of a two-event schedule and write CSV (and SVG).
    Sweep {
        config: PathBuf,
        /// Defaults to the config's `csv` entry.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Defaults to the config's `svg` entry.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the waiting time at which the classification flips, or "none".
    Transition { config: PathBuf },
    /// Run the verification suites.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
}

enum Failure {
    Usage(String),
    Invariant(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_usage() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Invariant(e.to_string())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn fmt_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{}", v + 0.0)).collect::<Vec<_>>().join(" ")
}

fn build(file: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let schedule = parse_schedule(&read(file)?)?;
    let pdm = build_pdm(&schedule)?;
    let report = classify_default(&pdm);

    println!("events: {}", pdm.event_count());
    println!("matrix:");
    for row in pdm.matrix().rows() {
        let cells: Vec<String> = row.iter().map(|z| format!("{}{:+}i", z.re + 0.0, z.im + 0.0)).collect();
        println!("  {}", cells.join(" "));
    }
    println!("eigenvalues: {}", fmt_list(&report.eigenvalues));
    println!("f_tr: {}", report.f_tr);
    println!("classification: {}", report.classification);

    if let Some(out) = out {
        let doc = serde_json::json!({
            "events": pdm.event_count(),
            "matrix": matrix_to_spec(pdm.matrix()),
            "eigenvalues": report.eigenvalues,
            "min_eigenvalue": report.min_eigenvalue,
            "f_tr": report.f_tr,
            "classification": report.classification,
            "tolerance": report.tolerance,
        });
        let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Invariant(e.to_string()))?;
        write(out, &(text + "\n"))?;
    }
    Ok(())
}

fn sweep(config: &Path, csv: Option<PathBuf>, svg: Option<PathBuf>) -> Result<(), Failure> {
    let cfg = SweepConfig::parse(&read(config)?)?;
    let csv = csv
        .or_else(|| cfg.csv.as_ref().map(PathBuf::from))
        .ok_or_else(|| Failure::Usage("no CSV output path: pass --csv or set `csv` in the config".into()))?;
    let svg = svg.or_else(|| cfg.svg.as_ref().map(PathBuf::from));
    let rows = cfg.prepare()?.run()?;
    write(&csv, &rows_to_csv(&rows))?;
    if let Some(svg) = svg {
        write(&svg, &emit_svg(&rows)?)?;
    }
    eprintln!("wrote {} rows to {}", rows.len(), csv.display());
    Ok(())
}

fn transition(config: &Path) -> Result<(), Failure> {
    let cfg = SweepConfig::parse(&read(config)?)?;
    match cfg.prepare()?.find_transition()? {
        Some(t) => println!("{}", t.t),
        None => println!("none"),
    }
    Ok(())
}

fn verify(seed: u64, trials: usize) -> Result<(), Failure> {
    let report = run_verify(seed, trials)?;
    print!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build { file, out } => build(&file, out.as_deref()),
        Command::Sweep { config, csv, svg } => sweep(&config, csv, svg),
        Command::Transition { config } => transition(&config),
        Command::Verify { seed, trials } => verify(seed, trials),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}
