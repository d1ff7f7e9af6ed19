//! `predpac` command-line front end.
//!
//! Exit codes: 0 on success and passing verdicts, 1 on configuration or
//! domain errors, 2 on failed verdicts (experiment assertions, VC
//! mismatches).

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use predpac::bounds::{BoundFormula, BoundSpec};
use predpac::concept::{vc_dimension_bruteforce, ConceptClass, FamilyKind};
use predpac::config::{load_plan, ExperimentKind};
use predpac::domain::DomainGrid;
use predpac::experiment::run_experiment;
use predpac::report::render_bounds_csv;
use predpac::{Error, Result};

const VCDIM_MAX_GRID: usize = 10;
const VCDIM_CAP: usize = 6;

#[derive(Parser)]
#[command(
    name = "predpac",
    version,
    about = "Experiment laboratory for predictive learning from exchangeable data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config; writes CSV records and a JSON summary.
    Run {
        /// Path to the JSON experiment config.
        #[arg(long)]
        config: PathBuf,
        /// Override the config's master_seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker thread count (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory for the CSV and summary files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Print a sample-complexity table as CSV on standard output.
    Bounds {
        /// VC dimension.
        #[arg(long)]
        d: usize,
        /// Comma-separated confidence parameters in (0,1).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        delta: Vec<f64>,
        /// Comma-separated accuracy parameters in (0,1).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        epsilon: Vec<f64>,
        /// Formula name: vidyasagar78 | corollary_predictive.
        #[arg(long)]
        formula: String,
    },
    /// Compare brute-force VC dimension against the declared value.
    Vcdim {
        /// Class spec: thresholds | intervals | unions:<k>, optionally
        /// with a :declared=<d> override as a negative control.
        #[arg(long)]
        class: String,
        /// Comma-separated probe grid points (at most 10).
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
    },
    /// Run a gc_curve config and print deviation rows to standard output.
    Gc {
        #[arg(long)]
        config: PathBuf,
    },
    /// Parse and validate a config without running or writing anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version go to stdout and exit 0; usage errors are
            // configuration errors in this tool's exit-code scheme
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run {
            config,
            seed,
            workers,
            out,
        } => {
            let mut plan = load_plan(&config)?;
            if let Some(seed) = seed {
                plan.master_seed = seed;
            }
            let output = run_experiment(&plan, workers)?;
            let (csv_path, summary_path) = output.write_to(&out, plan.output_base())?;
            println!("wrote {}", csv_path.display());
            println!("wrote {}", summary_path.display());
            if output.pass() {
                println!("verdict: pass");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verdict: fail");
                Ok(ExitCode::from(2))
            }
        }
        Command::Bounds {
            d,
            delta,
            epsilon,
            formula,
        } => {
            let spec = BoundSpec::new(d, BoundFormula::from_name(&formula)?)?;
            if delta.is_empty() || epsilon.is_empty() {
                // header stays present so the output is always a valid table
                print!("{}", render_bounds_csv(&[]));
                eprintln!("error: empty delta or epsilon range");
                return Ok(ExitCode::from(1));
            }
            let mut rows = Vec::with_capacity(delta.len() * epsilon.len());
            for &dl in &delta {
                for &ep in &epsilon {
                    rows.push((
                        d,
                        dl,
                        ep,
                        spec.evaluate(dl, ep)?,
                        spec.evaluate_predictive(dl, ep)?,
                    ));
                }
            }
            print!("{}", render_bounds_csv(&rows));
            Ok(ExitCode::SUCCESS)
        }
        Command::Vcdim { class, grid } => {
            if grid.len() > VCDIM_MAX_GRID {
                return Err(Error::SizeGuard(format!(
                    "vcdim probe grid limited to {VCDIM_MAX_GRID} points, got {}",
                    grid.len()
                )));
            }
            let (family, declared_override) = parse_class_spec(&class)?;
            let grid = Arc::new(DomainGrid::new(grid)?);
            let concept_class = ConceptClass::new(family, grid.clone())?;
            let declared = declared_override.unwrap_or(concept_class.declared_vc());
            let cap = VCDIM_CAP.min(grid.len());
            if declared > cap {
                return Err(Error::Config(format!(
                    "declared VC {declared} exceeds the brute-force cap {cap}; \
                     a match could not be certified"
                )));
            }
            let brute = vc_dimension_bruteforce(&concept_class, &grid, cap)?;
            let verdict = if brute == declared { "match" } else { "mismatch" };
            println!("class={class} declared={declared} brute_force={brute} verdict={verdict}");
            Ok(if brute == declared {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Gc { config } => {
            let plan = load_plan(&config)?;
            if plan.kind != ExperimentKind::GcCurve {
                return Err(Error::Config(format!(
                    "gc needs a gc_curve config, got kind {:?}",
                    plan.kind.name()
                )));
            }
            let output = run_experiment(&plan, None)?;
            print!("{}", output.csv);
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let plan = load_plan(&config)?;
            println!(
                "ok: kind={} trials={} n_grid={:?} seed={}",
                plan.kind.name(),
                plan.trials,
                plan.n_grid,
                plan.master_seed
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Parses `thresholds | intervals | unions:<k>` with an optional
/// `:declared=<d>` suffix overriding the declared VC dimension.
fn parse_class_spec(spec: &str) -> Result<(FamilyKind, Option<usize>)> {
    let mut parts: Vec<&str> = spec.split(':').collect();
    let mut declared = None;
    if let Some(last) = parts.last() {
        if let Some(value) = last.strip_prefix("declared=") {
            declared = Some(value.parse::<usize>().map_err(|_| {
                Error::Config(format!("bad declared override {value:?}; expected an integer"))
            })?);
            parts.pop();
        }
    }
    let family = match parts.as_slice() {
        ["thresholds"] => FamilyKind::Thresholds,
        ["intervals"] => FamilyKind::Intervals,
        ["unions", k] => FamilyKind::UnionsOfIntervals {
            k: k.parse::<usize>().map_err(|_| {
                Error::Config(format!("bad union count {k:?}; expected an integer"))
            })?,
        },
        _ => {
            return Err(Error::Config(format!(
                "unknown class spec {spec:?}; expected thresholds | intervals | unions:<k>\
                 [:declared=<d>]"
            )))
        }
    };
    Ok((family, declared))
}
