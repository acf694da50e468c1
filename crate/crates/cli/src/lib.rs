//! Command-line front end: `run`, `table1`, `export-topology` and `check`.

pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod table;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use lisl_core::scenario::{internal_snapshots, run_scenario, StationPair, TopologySource};
use lisl_core::topology::SnapshotCsvWriter;
use lisl_core::ScenarioResultF64;

pub use error::CliError;
use config::Overrides;
use output::{MANIFEST_JSON, METRICS_CSV, SLOTS_CSV, TABLE1_TXT, TOLERABLE_CSV};

#[derive(Debug, Parser)]
#[command(name = "lisl", version, about = "LISL setup-delay latency simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pair x range sweep and write the output bundle.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Print the first slots of one (pair, range) cell.
    Table1 {
        #[arg(long)]
        config: PathBuf,
        /// "Source:Destination"
        #[arg(long)]
        pair: String,
        /// LISL range, km.
        #[arg(long)]
        range: f64,
        #[arg(long, default_value_t = 6)]
        first_n: usize,
        /// Setup delay charged on route changes, ms.
        #[arg(long, default_value_t = 100.0)]
        eta: f64,
        /// Write the table here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Write the per-slot topology of every configured range as snapshot CSVs.
    ExportTopology {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Validate a scenario file without running it.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

/// Setup delay used for the per-cell tables in a run bundle.
fn table_eta(result: &ScenarioResultF64) -> f64 {
    let etas = &result.config.latency.setup_delays_ms;
    if etas.contains(&100.0) {
        100.0
    } else {
        etas[0]
    }
}

/// Writes the complete output bundle for a finished run into `out`.
pub fn write_bundle(out: &Path, result: &ScenarioResultF64, sweep: Option<&[f64]>) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let stale = [SLOTS_CSV, METRICS_CSV, TABLE1_TXT, TOLERABLE_CSV, MANIFEST_JSON];
    for name in stale {
        let _ = fs::remove_file(out.join(name));
    }

    let mut w = create(&out.join(SLOTS_CSV))?;
    output::write_slots_csv(result, &mut w)?;
    w.flush().map_err(|e| io_err(out, e))?;

    let mut w = create(&out.join(METRICS_CSV))?;
    output::write_metrics_csv(result, &mut w)?;
    w.flush().map_err(|e| io_err(out, e))?;

    let eta = table_eta(result);
    let mut text = String::new();
    for cell in &result.cells {
        text.push_str(&table::render(cell, 6, eta));
        text.push('\n');
    }
    fs::write(out.join(TABLE1_TXT), text).map_err(|e| io_err(out, e))?;

    if let Some(etas) = sweep {
        let mut w = create(&out.join(TOLERABLE_CSV))?;
        output::write_tolerable_csv(result, etas, &mut w)?;
        w.flush().map_err(|e| io_err(out, e))?;
    }

    plot::write_plots(out, result, sweep);
    output::write_manifest(out, result)?;
    Ok(())
}

fn run_command(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { config, out, overrides } => {
            let cfg = config::resolve(&config, &overrides)?;
            let sweep = overrides.sweep()?;
            let result = run_scenario(&cfg)?;
            write_bundle(&out, &result, sweep.as_deref())?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!("wrote {} cells to {}", result.cells.len(), out.display());
        }
        Command::Table1 { config, pair, range, first_n, eta, out, mut overrides } => {
            let pairs = config::parse_pairs(&pair)?;
            let [pair] = &pairs[..] else {
                return Err(CliError::Config("--pair takes a single 'Source:Destination'".into()));
            };
            overrides.pairs = Some(pair.to_string().replacen('-', ":", 1));
            overrides.ranges = Some(range.to_string());
            if overrides.slots.is_none() {
                overrides.slots = Some(first_n.max(1));
            }
            let mut cfg = config::resolve(&config, &overrides)?;
            cfg.pairs = vec![StationPair::new(pair.source(), pair.destination())];
            cfg.validate()?;
            let result = run_scenario(&cfg)?;
            let text = table::emit_table1(&result, pair, range, first_n, eta)?;
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| io_err(&path, e))?,
                None => print!("{text}"),
            }
        }
        Command::ExportTopology { config, out, overrides } => {
            let cfg = config::resolve(&config, &overrides)?;
            if cfg.topology != TopologySource::Internal {
                return Err(CliError::Config("export-topology needs the internal topology source".into()));
            }
            fs::create_dir_all(&out).map_err(|e| io_err(&out, e))?;
            for &range in &cfg.lisl_ranges_km {
                let path = out.join(format!("topology_{range}km.csv"));
                let mut writer = SnapshotCsvWriter::new(create(&path)?)?;
                for snapshot in internal_snapshots(&cfg, range)? {
                    writer.write(&snapshot?)?;
                }
                writer.finish()?.flush().map_err(|e| io_err(&path, e))?;
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Check { config, overrides } => {
            let cfg = config::resolve(&config, &overrides)?;
            println!(
                "ok: {} satellites, {} stations, {} pairs x {} ranges, {} slots",
                cfg.constellation.total_satellites(),
                cfg.stations.len(),
                cfg.pairs.len(),
                cfg.lisl_ranges_km.len(),
                cfg.num_slots
            );
        }
    }
    Ok(())
}

/// Parses `args` and executes the command, returning the exit status.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
