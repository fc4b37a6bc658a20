use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use siegel_core::fixtures::FixtureKind;

mod commands;
mod input;
mod report;

use commands::{FixtureArgs, Overrides};

#[derive(Parser)]
#[command(name = "siegel", version, about = "Complex hyperbolic isometries and Fuchsian subgroup detection")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Word-ball radius for audit, detect and orbit (default 4).
    #[arg(long, global = true)]
    radius: Option<usize>,
    /// Group-membership tolerance.
    #[arg(long, global = true)]
    tol_grp: Option<f64>,
    /// Trace-realness tolerance.
    #[arg(long, global = true)]
    tol_tr: Option<f64>,
    /// Certification tolerance.
    #[arg(long, global = true)]
    tol_cert: Option<f64>,
    /// Worker threads for the trace audit; output does not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Omit wall time so identical inputs give byte-identical reports.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check generators for membership in SU(2,1).
    Validate { file: PathBuf },
    /// Classify generators as loxodromic, parabolic or elliptic.
    Classify { file: PathBuf },
    /// Cartan angular invariant of boundary triples.
    Cartan { file: PathBuf },
    /// Cross-ratio triples and coplanarity of boundary quadruples.
    Cross { file: PathBuf },
    /// Look for a non-real trace in the word ball.
    Audit { file: PathBuf },
    /// Decide whether the group is R-Fuchsian, C-Fuchsian or neither.
    Detect { file: PathBuf },
    /// Write randomly conjugated fixture groups.
    Fixtures {
        /// r (real plane), c (complex line) or near-miss.
        #[arg(long, default_value = "r")]
        kind: FixtureKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Extra generators: random words in the two fixture generators.
        #[arg(long, default_value_t = 0)]
        words: usize,
        /// Phase perturbation of the near-miss companion.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Orbit of a point under the word ball, as CSV.
    Orbit {
        file: PathBuf,
        /// `inf` or `[[re, im], [re, im]]`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let overrides = Overrides {
        radius: g.radius,
        group: g.tol_grp,
        trace: g.tol_tr,
        certification: g.tol_cert,
    };
    let jobs = g.jobs.max(1);
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Validate { file } => commands::validate(file, &overrides)?,
        Command::Classify { file } => commands::classify(file, &overrides)?,
        Command::Cartan { file } => commands::cartan(file, &overrides)?,
        Command::Cross { file } => commands::cross(file, &overrides)?,
        Command::Audit { file } => commands::audit(file, &overrides, jobs)?,
        Command::Detect { file } => commands::detect(file, &overrides, jobs)?,
        Command::Fixtures {
            kind,
            seed,
            count,
            words,
            delta,
            out_dir,
        } => commands::fixtures(&FixtureArgs {
            kind: *kind,
            seed: *seed,
            count: *count,
            words: *words,
            delta: *delta,
            out_dir: out_dir.clone(),
        })?,
        Command::Orbit { file, point, out } => {
            let csv = commands::orbit(file, point, &overrides)?;
            match out {
                Some(path) => std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?,
                None => std::io::stdout().write_all(csv.as_bytes())?,
            }
            return Ok(());
        }
    };
    let envelope = report::Envelope {
        command: command_echo(),
        digest: outcome.digest,
        tolerances: outcome.tolerances,
        wall_ms: (!g.deterministic).then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    std::io::stdout().write_all(report::to_string(&envelope.wrap(outcome.results)).as_bytes())?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
