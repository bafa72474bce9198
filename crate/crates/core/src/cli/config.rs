//! TOML problem configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::compare::{CheckConfig, CheckSelection};
use crate::expr::parse_expr;
use crate::interval::{Interval, WindowConfig};
use crate::kernel::{CertifyConfig, GeneratorSpec, MeanSpec, WeightFamily};
use crate::search::SearchConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub n: usize,
    pub interval: IntervalConfig,
    pub mean1: MeanConfig,
    pub mean2: MeanConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub window: WindowSection,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalConfig {
    pub lower: f64,
    pub upper: f64,
}

/// One mean: a generator (`generator` DSL string or `power` exponent) and
/// weights (`weights` DSL list or `power_weights`; unit weights if neither).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanConfig {
    pub generator: Option<String>,
    pub power: Option<f64>,
    pub weights: Option<Vec<String>>,
    pub power_weights: Option<PowerWeightsConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerWeightsConfig {
    pub lambda: Vec<f64>,
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub equality: f64,
    pub slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            equality: 1e-9,
            slack: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampling {
    /// Points for one-variable checks and generator certification.
    pub samples: usize,
    /// Points per axis for two-point checks.
    pub grid: usize,
    pub refine_starts: usize,
    pub refine_iters: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        let c = CheckConfig::default();
        Sampling {
            samples: c.samples,
            grid: c.grid,
            refine_starts: c.refine_starts,
            refine_iters: c.refine_iters,
        }
    }
}

/// Truncation of unbounded domains, and an optional explicit window used by
/// the checks, the gap search and the CSV landscape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowSection {
    pub positive_upper: f64,
    pub span: f64,
    pub margin: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
}

impl Default for WindowSection {
    fn default() -> Self {
        let w = WindowConfig::default();
        WindowSection {
            positive_upper: w.positive_upper,
            span: w.span,
            margin: w.margin,
            lo: None,
            hi: None,
        }
    }
}

impl WindowSection {
    fn config(&self) -> WindowConfig {
        WindowConfig {
            positive_upper: self.positive_upper,
            span: self.span,
            margin: self.margin,
        }
    }

    fn explicit(&self) -> Result<Option<(f64, f64)>, CliError> {
        match (self.lo, self.hi) {
            (Some(lo), Some(hi)) => Ok(Some((lo, hi))),
            (None, None) => Ok(None),
            _ => Err(CliError::Config("[window] needs both lo and hi, or neither".into())),
        }
    }
}

/// Which checks run; everything is on by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Checks {
    pub first_order: bool,
    pub ratio_monotone: bool,
    pub hessian_definite: bool,
    pub two_point: bool,
    pub monotone_ratios: bool,
    pub shared_weights: bool,
    pub shared_generator: bool,
    pub power: bool,
    pub gap_search: bool,
    pub local_probe: bool,
}

impl Default for Checks {
    fn default() -> Self {
        Checks {
            first_order: true,
            ratio_monotone: true,
            hessian_definite: true,
            two_point: true,
            monotone_ratios: true,
            shared_weights: true,
            shared_generator: true,
            power: true,
            gap_search: true,
            local_probe: true,
        }
    }
}

impl Checks {
    pub fn selection(&self) -> CheckSelection {
        CheckSelection {
            first_order: self.first_order,
            ratio_monotone: self.ratio_monotone,
            hessian_definite: self.hessian_definite,
            two_point: self.two_point,
            monotone_ratios: self.monotone_ratios,
            shared_weights: self.shared_weights,
            shared_generator: self.shared_generator,
            power: self.power,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Machine-readable JSON report.
    pub report: Option<PathBuf>,
    /// Human-readable summary (also printed unless `--quiet`).
    pub summary: Option<PathBuf>,
    /// Gap landscape CSV, `n = 2` only.
    pub csv: Option<PathBuf>,
    /// Points per axis of the landscape (default 64).
    pub csv_resolution: Option<usize>,
}

impl ProblemConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Reads a config; relative output paths are taken relative to the
    /// config file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.output.report, &mut cfg.output.summary, &mut cfg.output.csv]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn domain(&self) -> Result<Interval, CliError> {
        Interval::new(self.interval.lower, self.interval.upper).map_err(|e| CliError::Config(format!("[interval]: {e}")))
    }

    pub fn certify(&self) -> CertifyConfig {
        CertifyConfig {
            samples: self.sampling.samples,
            window: self.window.config(),
        }
    }

    pub fn check_config(&self) -> Result<CheckConfig, CliError> {
        Ok(CheckConfig {
            samples: self.sampling.samples,
            grid: self.sampling.grid,
            equality_tol: self.tolerances.equality,
            slack: self.tolerances.slack,
            refine_starts: self.sampling.refine_starts,
            refine_iters: self.sampling.refine_iters,
            window: self.window.config(),
            window_override: self.window.explicit()?,
        })
    }

    pub fn search_config(&self) -> Result<SearchConfig, CliError> {
        let mut s = self.search.clone();
        s.window_config = self.window.config();
        if s.window.is_none() {
            s.window = self.window.explicit()?;
        }
        Ok(s)
    }

    pub fn means(&self) -> Result<(MeanSpec, MeanSpec), CliError> {
        let domain = self.domain()?;
        let certify = self.certify();
        let m1 = self.mean1.build("mean1", self.n, domain, &certify)?;
        let m2 = self.mean2.build("mean2", self.n, domain, &certify)?;
        Ok((m1, m2))
    }
}

impl MeanConfig {
    fn build(&self, name: &str, n: usize, domain: Interval, certify: &CertifyConfig) -> Result<MeanSpec, CliError> {
        let err = |msg: String| CliError::Config(format!("[{name}]: {msg}"));
        let generator = match (&self.generator, self.power) {
            (Some(_), Some(_)) => return Err(err("`generator` and `power` are mutually exclusive".into())),
            (None, None) => return Err(err("one of `generator` or `power` is required".into())),
            (Some(src), None) => {
                let e = parse_expr(src).map_err(|e| err(format!("generator {src:?}: {e}")))?;
                GeneratorSpec::with_config(e, domain, certify)
            }
            (None, Some(a)) => GeneratorSpec::power_with_config(a, domain, certify),
        }
        .map_err(|e| err(e.to_string()))?;
        let weights = match (&self.weights, &self.power_weights) {
            (Some(_), Some(_)) => return Err(err("`weights` and `power_weights` are mutually exclusive".into())),
            (Some(list), None) => {
                let exprs = list
                    .iter()
                    .map(|s| parse_expr(s).map_err(|e| err(format!("weight {s:?}: {e}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                WeightFamily::with_config(exprs, domain, certify)
            }
            (None, Some(pw)) => WeightFamily::power_with_config(&pw.lambda, &pw.alpha, domain, certify),
            (None, None) => WeightFamily::power_with_config(&vec![1.0; n], &vec![0.0; n], domain, certify),
        }
        .map_err(|e| err(e.to_string()))?;
        if weights.n() != n {
            return Err(err(format!("{} weights but n = {n}", weights.n())));
        }
        MeanSpec::new(generator, weights).map_err(|e| err(e.to_string()))
    }
}
