//! Scenario file loading and command-line overrides.

use std::path::{Path, PathBuf};

use clap::Args;
use lisl_core::metrics::NodeDelayMode;
use lisl_core::scenario::{StationPair, TopologySource};
use lisl_core::ScenarioConfigF64;

use crate::error::CliError;

/// Flags that override fields of the scenario file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Read topology snapshots from this CSV instead of propagating.
    #[arg(long, value_name = "PATH")]
    pub ingest: Option<PathBuf>,
    /// Station pairs, e.g. "New York:London,New York:Hanoi".
    #[arg(long)]
    pub pairs: Option<String>,
    /// LISL ranges in km, comma separated.
    #[arg(long)]
    pub ranges: Option<String>,
    /// Setup delays in ms, comma separated.
    #[arg(long)]
    pub etas: Option<String>,
    /// Setup-delay sweep lo:hi:step (ms) for the tolerable-delay output.
    #[arg(long, value_name = "LO:HI:STEP")]
    pub etas_sweep: Option<String>,
    /// Number of slots to simulate.
    #[arg(long)]
    pub slots: Option<usize>,
    /// per-node or per-path.
    #[arg(long)]
    pub node_delay_mode: Option<String>,
    /// Treat connectivity warnings as errors.
    #[arg(long)]
    pub strict: bool,
    /// Worker threads.
    #[arg(long)]
    pub threads: Option<usize>,
}

pub fn load(path: &Path) -> Result<ScenarioConfigF64, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config file {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("invalid config file {}: {e}", path.display())))
}

fn numbers(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("--{flag}: '{s}' is not a number")))
        })
        .collect()
}

pub fn parse_pairs(text: &str) -> Result<Vec<StationPair>, CliError> {
    text.split(',')
        .map(|p| match p.split_once(':') {
            Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => Ok(StationPair::new(a.trim(), b.trim())),
            _ => Err(CliError::Config(format!("pair '{p}' must look like 'Source:Destination'"))),
        })
        .collect()
}

/// Setup delays lo, lo+step, ... up to hi inclusive.
pub fn parse_sweep(text: &str) -> Result<Vec<f64>, CliError> {
    let parts = numbers("etas-sweep", &text.replace(':', ","))?;
    let [lo, hi, step] = parts[..] else {
        return Err(CliError::Config(format!("--etas-sweep must be lo:hi:step, got '{text}'")));
    };
    if !(step > 0.0) || !(lo > 0.0) || hi < lo {
        return Err(CliError::Config(format!("--etas-sweep needs 0 < lo <= hi and step > 0, got '{text}'")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + step * i as f64).collect())
}

impl Overrides {
    pub fn apply(&self, config: &mut ScenarioConfigF64) -> Result<(), CliError> {
        if let Some(path) = &self.ingest {
            config.topology = TopologySource::Ingest(path.clone());
        }
        if let Some(pairs) = &self.pairs {
            config.pairs = parse_pairs(pairs)?;
        }
        if let Some(ranges) = &self.ranges {
            config.lisl_ranges_km = numbers("ranges", ranges)?;
        }
        if let Some(etas) = &self.etas {
            config.latency.setup_delays_ms = numbers("etas", etas)?;
        }
        if let Some(slots) = self.slots {
            config.num_slots = slots;
        }
        if let Some(mode) = &self.node_delay_mode {
            config.latency.node_delay_mode = mode.parse::<NodeDelayMode>()?;
        }
        if self.strict {
            config.strict = true;
        }
        if self.threads.is_some() {
            config.threads = self.threads;
        }
        Ok(())
    }

    pub fn sweep(&self) -> Result<Option<Vec<f64>>, CliError> {
        self.etas_sweep.as_deref().map(parse_sweep).transpose()
    }
}

/// Loads, overrides and validates a scenario.
pub fn resolve(path: &Path, overrides: &Overrides) -> Result<ScenarioConfigF64, CliError> {
    let mut config = load(path)?;
    overrides.apply(&mut config)?;
    config.validate()?;
    Ok(config)
}
