//! Evaluation and comparison of generalized Bajraktarević means
//!
//! ```text
//! A_{f,p}(x_1, ..., x_n) = f^{-1}( Σ p_i(x_i) f(x_i) / Σ p_i(x_i) )
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`expr`]: a small expression language with symbolic derivatives,
//! * [`kernel`]: generators, weight families, mean evaluation and the
//!   closed-form derivatives on the diagonal,
//! * [`compare`]: necessary and sufficient comparison conditions returning
//!   three-valued verdicts,
//! * [`search`]: numerical search for violations of `A_{f,p} <= A_{g,q}`,
//! * [`cli`]: configuration files, orchestration and report output.

// `!(x > 0.0)` is written on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod compare;
pub mod expr;
pub mod interval;
pub mod kernel;
pub mod search;
pub mod sum;

pub use compare::{
    check_first_order, check_hessian_definite, check_monotone_ratios, check_power_two_point,
    check_ratio_monotone, check_shared_generator, check_shared_weights, check_two_point,
    classify_power, compare, divided_power_difference, hessian_minor_dets, CheckConfig,
    ComparisonReport, Conclusion, Outcome, PowerParams, Rule, Status, Verdict,
};
pub use expr::{parse_expr, Expr};
pub use interval::{Interval, Window};
pub use kernel::{invert_generator, GeneratorSpec, MeanSpec, WeightFamily};
pub use search::{local_gap_probe, max_gap, GapWitness, SearchConfig};
