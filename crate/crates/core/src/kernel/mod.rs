//! Generalized Bajraktarević means: generators, weight families, evaluation,
//! inversion, and closed-form derivatives on the diagonal.

mod diag;
mod generator;
mod invert;
mod mean;
mod weights;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::EvalError;
use crate::interval::WindowConfig;

pub use generator::{Direction, GeneratorSpec};
pub use invert::invert_generator;
pub use mean::MeanSpec;
pub use weights::{PowerWeights, WeightFamily};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("evaluating {what} at x = {x}: {source}")]
    Eval {
        what: &'static str,
        x: f64,
        #[source]
        source: EvalError,
    },
    #[error("generator derivative is {derivative} at x = {x}; a nonvanishing derivative of constant sign is required")]
    NotStrictlyMonotone { x: f64, derivative: f64 },
    #[error("weight p_{index} is {value} at x = {x}; weights must be positive", index = .index + 1)]
    NonPositiveWeight { index: usize, x: f64, value: f64 },
    #[error("a weight family needs at least 2 weights, got {0}")]
    TooFewWeights(usize),
    #[error("generator domain {generator} differs from weight domain {weights}")]
    DomainMismatch { generator: String, weights: String },
    #[error("expected {expected} arguments, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("argument {x} is outside the domain {domain}")]
    OutOfDomain { x: f64, domain: String },
    #[error("weight index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{y} is outside the image of the generator; searched x in [{lo}, {hi}] with values [{f_lo}, {f_hi}]")]
    OutsideImage {
        y: f64,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("no bracket for {y}: search stopped at x in [{lo}, {hi}] ({cause})")]
    BracketNotFound {
        y: f64,
        lo: f64,
        hi: f64,
        cause: EvalError,
    },
    #[error("invalid power parameters: {0}")]
    InvalidPowerParams(String),
}

/// Sample-based certification settings for generators and weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CertifyConfig {
    pub samples: usize,
    pub window: WindowConfig,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            samples: 4096,
            window: WindowConfig::default(),
        }
    }
}
