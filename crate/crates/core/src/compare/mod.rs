//! Local and global comparison conditions for two means `A_{f,p}` and
//! `A_{g,q}`.
//!
//! Every check returns a [`Verdict`]. Sampled checks evaluate their
//! condition on a grid over the working window and therefore only certify
//! the condition on those samples; closed-form verdicts come from
//! [`classify_power`]. [`compare`] runs the applicable checks and derives
//! the `locally_smaller` / `globally_smaller` conclusions.

mod global;
mod local;
mod power;
mod report;
mod verdict;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalError, Window, WindowConfig};
use crate::kernel::{KernelError, MeanSpec};

pub use global::{
    check_monotone_ratios, check_power_two_point, check_shared_generator, check_shared_weights,
    check_two_point, SharedWeightsBattery,
};
pub use local::{
    check_first_order, check_hessian_definite, check_ratio_monotone, comparison_discriminant,
    first_order_residuals, hessian_minor_dets, leading_minors, MinorDets,
};
pub use power::{classify_power, divided_power_difference, exponent_bounds_hold, PowerParams};
pub use report::{
    compare, compare_selected, CheckSelection, ComparisonReport, PowerDerived, IMPLICATION_TABLE,
};
pub use verdict::{Certification, Conclusion, Outcome, Rule, Status, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompareError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("incompatible means: {0}")]
    Incompatible(String),
    #[error("first-order condition fails at x = {x} (index {index}, residual {residual:e}); the minor formula does not apply")]
    FirstOrderViolated { x: f64, index: usize, residual: f64 },
    #[error("minor order {kmax} outside 1..={max}")]
    InvalidMinorOrder { kmax: usize, max: usize },
    #[error("internal consistency: minor {k} closed form {closed_form:e} vs direct determinant {direct:e}")]
    MinorMismatch {
        k: usize,
        closed_form: f64,
        direct: f64,
    },
    #[error("internal consistency: shared-weight conditions disagree ({0})")]
    Disagreement(Box<SharedWeightsBattery>),
    #[error("{0}")]
    NotPositiveDomain(String),
}

impl std::fmt::Display for SharedWeightsBattery {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ratio increasing: {}, curvature order: {}, composite convexity: {}, two-point: {}",
            self.ratio_increasing.status,
            self.curvature_order.status,
            self.composite_convexity.status,
            self.two_point.status
        )
    }
}

/// Sampling resolution and tolerances shared by the sampled checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckConfig {
    /// Points for one-variable conditions.
    pub samples: usize,
    /// Points per axis for two-variable conditions.
    pub grid: usize,
    /// Absolute tolerance on ratio equalities such as `p_i/p_0 = q_i/q_0`.
    pub equality_tol: f64,
    /// Relative slack for inequalities and monotonicity.
    pub slack: f64,
    /// Local minimizations started from the worst grid pairs.
    pub refine_starts: usize,
    pub refine_iters: usize,
    pub window: WindowConfig,
    /// Explicit sampling window; must lie inside the domain.
    pub window_override: Option<(f64, f64)>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            samples: 4096,
            grid: 256,
            equality_tol: 1e-9,
            slack: 1e-9,
            refine_starts: 8,
            refine_iters: 200,
            window: WindowConfig::default(),
            window_override: None,
        }
    }
}

impl CheckConfig {
    pub fn window_for(&self, domain: &Interval) -> Result<Window, CompareError> {
        match self.window_override {
            Some((lo, hi)) => Ok(Window::inside(domain, lo, hi)?),
            None => Ok(Window::for_interval(domain, &self.window)),
        }
    }

    pub(crate) fn sampled(&self, points: usize) -> Certification {
        Certification::Sampled {
            points,
            tolerance: self.slack,
        }
    }
}

pub(crate) fn ensure_compatible(m1: &MeanSpec, m2: &MeanSpec) -> Result<(), CompareError> {
    if m1.n() != m2.n() {
        return Err(CompareError::Incompatible(format!(
            "n = {} vs n = {}",
            m1.n(),
            m2.n()
        )));
    }
    if m1.domain() != m2.domain() {
        return Err(CompareError::Incompatible(format!(
            "domains {} vs {}",
            m1.domain(),
            m2.domain()
        )));
    }
    Ok(())
}
