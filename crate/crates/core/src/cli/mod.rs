//! Configuration files, orchestration of all checks, and report output.
//!
//! Exit statuses of the `meancmp` binary:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | finished; nothing refuted the comparison |
//! | 1 | comparison refuted (a conclusion is `Refuted` or the gap search found a witness), or a selftest suite failed |
//! | 2 | configuration or usage error |
//! | 3 | evaluation or internal-consistency error while running checks |

mod config;
mod output;
mod selftest;

use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::compare::{compare_selected, CompareError, ComparisonReport, Outcome};
use crate::search::{gap_landscape, local_gap_probe, max_gap, GapResult, LocalProbe, SearchError};

pub use config::{
    Checks, IntervalConfig, MeanConfig, OutputConfig, PowerWeightsConfig, ProblemConfig, Sampling,
    Tolerances, WindowSection,
};
pub use output::{landscape_csv, summary_text, JsonReport};
pub use selftest::{battery_pairs, run_selftest, SuiteResult};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("evaluation error: {0}")]
    Compare(#[from] CompareError),
    #[error("evaluation error: {0}")]
    Search(#[from] SearchError),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compare(_) | CliError::Search(_) | CliError::Io { .. } => 3,
        }
    }
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    /// Search grid resolution per axis.
    pub grid: Option<usize>,
    /// Equality tolerance and slack.
    pub tol: Option<f64>,
    pub csv: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ProblemConfig) {
        if let Some(seed) = self.seed {
            cfg.search.seed = seed;
        }
        if let Some(grid) = self.grid {
            cfg.search.grid = grid;
        }
        if let Some(tol) = self.tol {
            cfg.tolerances.equality = tol;
            cfg.tolerances.slack = tol;
        }
        if let Some(csv) = &self.csv {
            cfg.output.csv = Some(csv.clone());
        }
    }
}

/// Everything one `compare` run produced.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub report: ComparisonReport,
    pub gap_search: Option<GapResult>,
    pub local_probe: Option<LocalProbe>,
    /// `(x, y, A_{f,p}, A_{g,q}, gap)` rows when a CSV was requested.
    #[serde(skip)]
    pub landscape: Option<Vec<[f64; 5]>>,
}

impl RunOutcome {
    /// Whether anything refuted `A_{f,p} <= A_{g,q}`.
    pub fn refuted(&self) -> bool {
        self.report.locally_smaller.outcome == Outcome::Refuted
            || self.report.globally_smaller.outcome == Outcome::Refuted
            || self.gap_search.as_ref().is_some_and(|g| g.witness.is_some())
            || self
                .local_probe
                .as_ref()
                .is_some_and(|p| p.levels.iter().any(|l| l.witness.is_some()))
    }

    pub fn exit_code(&self) -> i32 {
        if self.refuted() {
            1
        } else {
            0
        }
    }
}

/// Runs every enabled check for a parsed config, without writing files.
pub fn evaluate(cfg: &ProblemConfig) -> Result<RunOutcome, CliError> {
    let (m1, m2) = cfg.means()?;
    let checks = cfg.check_config()?;
    let search = cfg.search_config()?;
    let report = compare_selected(&m1, &m2, &checks, &cfg.checks.selection())?;
    let gap_search = cfg
        .checks
        .gap_search
        .then(|| max_gap(&m1, &m2, &search))
        .transpose()?;
    let local_probe = cfg
        .checks
        .local_probe
        .then(|| local_gap_probe(&m1, &m2, &search))
        .transpose()?;
    let landscape = match &cfg.output.csv {
        Some(_) if cfg.n != 2 => {
            return Err(CliError::Config(format!("the CSV landscape needs n = 2, got n = {}", cfg.n)))
        }
        Some(_) => {
            let window = search.window_for(&m1)?;
            Some(gap_landscape(&m1, &m2, &window, cfg.output.csv_resolution.unwrap_or(64))?)
        }
        None => None,
    };
    Ok(RunOutcome {
        report,
        gap_search,
        local_probe,
        landscape,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a config, runs it, and writes the requested outputs. The summary
/// is returned so the caller can print it.
pub fn run_compare(path: &Path, overrides: &Overrides) -> Result<(RunOutcome, String), CliError> {
    let mut cfg = ProblemConfig::load(path)?;
    overrides.apply(&mut cfg);
    let outcome = evaluate(&cfg)?;
    let summary = summary_text(&cfg, &outcome);
    if let Some(p) = &cfg.output.summary {
        write(p, &summary)?;
    }
    if let Some(p) = &cfg.output.report {
        let json = JsonReport::new(&cfg, &outcome);
        let text = serde_json::to_string_pretty(&json).expect("report serializes");
        write(p, &(text + "\n"))?;
    }
    if let (Some(p), Some(rows)) = (&cfg.output.csv, &outcome.landscape) {
        write(p, &landscape_csv(rows))?;
    }
    Ok((outcome, summary))
}
