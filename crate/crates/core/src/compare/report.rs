//! Aggregation of verdicts into local/global conclusions.

use serde::{Deserialize, Serialize};

use super::{
    check_first_order, check_hessian_definite, check_monotone_ratios, check_power_two_point,
    check_ratio_monotone, check_shared_generator, check_shared_weights, check_two_point,
    classify_power, ensure_compatible, CheckConfig, CompareError, Conclusion, Outcome, PowerParams,
    Rule, SharedWeightsBattery, Status, Verdict,
};
use crate::kernel::{KernelError, MeanSpec};

/// `γ`, `δ` from `μ_i = γλ_i`, `β_i = α_i + δ`, with the generator exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerDerived {
    pub gamma: f64,
    pub delta: f64,
    pub a: f64,
    pub b: f64,
}

/// Every verdict computed for `A_{f,p}` versus `A_{g,q}`, plus the two
/// conclusions. Checks that were not run, or do not apply, are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub first_order: Option<Verdict>,
    pub ratio_monotone: Option<Verdict>,
    pub hessian_definite: Option<Verdict>,
    pub two_point: Option<Verdict>,
    pub monotone_ratios: Option<Verdict>,
    /// Only when `p = q`.
    pub shared_weights: Option<SharedWeightsBattery>,
    /// Only when `f = g`.
    pub shared_generator: Option<Verdict>,
    /// Only for power generators with power weights.
    pub power_two_point: Option<Verdict>,
    pub power: Option<PowerDerived>,
    pub locally_smaller: Conclusion,
    pub globally_smaller: Conclusion,
}

impl ComparisonReport {
    pub(crate) fn empty() -> Self {
        ComparisonReport {
            first_order: None,
            ratio_monotone: None,
            hessian_definite: None,
            two_point: None,
            monotone_ratios: None,
            shared_weights: None,
            shared_generator: None,
            power_two_point: None,
            power: None,
            locally_smaller: Conclusion::unknown("no check decided it"),
            globally_smaller: Conclusion::unknown("no check decided it"),
        }
    }
}

/// Which checks [`compare`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckSelection {
    pub first_order: bool,
    pub ratio_monotone: bool,
    pub hessian_definite: bool,
    pub two_point: bool,
    pub monotone_ratios: bool,
    pub shared_weights: bool,
    pub shared_generator: bool,
    pub power: bool,
}

impl Default for CheckSelection {
    fn default() -> Self {
        CheckSelection {
            first_order: true,
            ratio_monotone: true,
            hessian_definite: true,
            two_point: true,
            monotone_ratios: true,
            shared_weights: true,
            shared_generator: true,
            power: true,
        }
    }
}

/// Premise, rule and conclusion of every inference [`compare`] draws.
pub const IMPLICATION_TABLE: &[(&str, Rule, &str)] = &[
    ("first_order Fails", Rule::FirstOrderNecessary, "locally and globally Refuted"),
    ("ratio_monotone Fails", Rule::SecondOrderNecessary, "locally and globally Refuted"),
    ("hessian_definite Fails", Rule::SecondOrderNecessary, "locally and globally Refuted"),
    (
        "first_order Holds and ratio_monotone Holds strictly",
        Rule::SecondOrderSufficient,
        "locally Implied",
    ),
    ("first_order Holds and two_point Holds", Rule::TwoPointSufficient, "globally Implied"),
    ("first_order Holds and monotone_ratios Holds", Rule::MonotoneRatios, "globally Implied"),
    ("first_order Holds and power_two_point Holds", Rule::PowerTwoPoint, "globally Implied"),
    ("shared_weights all Hold", Rule::SharedWeightsEquivalence, "locally and globally Implied"),
    ("shared_weights all Fail", Rule::SharedWeightsEquivalence, "locally and globally Refuted"),
    ("shared_generator Holds", Rule::SharedGeneratorEquivalence, "locally and globally Implied"),
    ("shared_generator Fails", Rule::SharedGeneratorEquivalence, "locally and globally Refuted"),
    ("power: mu not proportional to lambda or beta - alpha not constant", Rule::PowerProportionality, "locally and globally Refuted"),
    ("power: a > b + 2 delta", Rule::PowerExponentOrder, "locally and globally Refuted"),
    ("power: a < b + 2 delta", Rule::PowerExponentOrder, "locally Implied"),
    ("power: exponent bounds hold", Rule::PowerExponentBounds, "globally Implied"),
    ("power: identical means", Rule::IdenticalMeans, "locally and globally Implied"),
    ("globally Implied", Rule::GlobalImpliesLocal, "locally Implied"),
    ("locally Refuted", Rule::GlobalImpliesLocal, "globally Refuted"),
];

fn status(v: &Option<Verdict>) -> Option<Status> {
    v.as_ref().map(|v| v.status)
}

/// Power parameters when both means use power generators and power weights.
pub(crate) fn power_params(m1: &MeanSpec, m2: &MeanSpec) -> Option<PowerParams> {
    let a = m1.generator().power_exponent()?;
    let b = m2.generator().power_exponent()?;
    let p = m1.weights().power_params()?;
    let q = m2.weights().power_params()?;
    Some(PowerParams {
        a,
        b,
        lambda: p.lambda.clone(),
        alpha: p.alpha.clone(),
        mu: q.lambda.clone(),
        beta: q.alpha.clone(),
    })
}

/// Picks a single conclusion from the rules that fired, or `Unknown` when
/// nothing fired or the evidence conflicts.
fn resolve(implied: &[Rule], refuted: &[Rule], via: Option<Rule>) -> Conclusion {
    match (implied.first(), refuted.first()) {
        (Some(i), Some(r)) => Conclusion::unknown(format!(
            "conflicting sampled evidence: implied by {}, refuted by {}",
            i.describe(),
            r.describe()
        )),
        (Some(&i), None) => Conclusion::implied(i),
        (None, Some(&r)) => {
            let c = Conclusion::refuted(r);
            match via {
                Some(_) => c.with_note("global comparability implies local"),
                None => c,
            }
        }
        (None, None) => Conclusion::unknown("no check decided it"),
    }
}

/// Runs every applicable check and derives the conclusions.
pub fn compare(m1: &MeanSpec, m2: &MeanSpec, cfg: &CheckConfig) -> Result<ComparisonReport, CompareError> {
    compare_selected(m1, m2, cfg, &CheckSelection::default())
}

/// [`compare`] restricted to the selected checks.
///
/// For power means the closed-form conclusions take precedence; sampled
/// verdicts are still reported and decide only what the closed form leaves
/// unknown.
pub fn compare_selected(
    m1: &MeanSpec,
    m2: &MeanSpec,
    cfg: &CheckConfig,
    sel: &CheckSelection,
) -> Result<ComparisonReport, CompareError> {
    ensure_compatible(m1, m2)?;
    let mut r = ComparisonReport::empty();
    if sel.first_order {
        r.first_order = Some(check_first_order(m1, m2, cfg)?);
    }
    if sel.ratio_monotone {
        r.ratio_monotone = Some(check_ratio_monotone(m1, m2, cfg)?);
    }
    if sel.hessian_definite {
        r.hessian_definite = Some(check_hessian_definite(m1, m2, cfg)?);
    }
    if sel.two_point {
        r.two_point = Some(check_two_point(m1, m2, cfg)?);
    }
    if sel.monotone_ratios {
        r.monotone_ratios = Some(check_monotone_ratios(m1, m2, cfg)?);
    }
    if sel.shared_weights && m1.weights().same_as(m2.weights()) {
        r.shared_weights = Some(check_shared_weights(m1.generator(), m2.generator(), m1.weights(), cfg)?);
    }
    if sel.shared_generator && m1.generator().same_as(m2.generator()) {
        r.shared_generator = Some(check_shared_generator(m1.generator(), m1.weights(), m2.weights(), cfg)?);
    }
    let power = if sel.power { power_params(m1, m2) } else { None };
    let closed = match &power {
        Some(params) => Some(
            classify_power(params).map_err(|e| CompareError::Kernel(KernelError::InvalidPowerParams(e)))?,
        ),
        None => None,
    };
    if let Some(c) = &closed {
        r.power = c.power;
        if let Some(d) = c.power {
            r.power_two_point = Some(check_power_two_point(m1.generator(), m2.generator(), d.delta, cfg)?);
        }
    }

    let (local, global) = sampled_conclusions(&r);
    r.locally_smaller = local;
    r.globally_smaller = global;
    if let Some(c) = closed {
        if c.locally_smaller.outcome != Outcome::Unknown {
            r.locally_smaller = c.locally_smaller;
        }
        if c.globally_smaller.outcome != Outcome::Unknown {
            r.globally_smaller = c.globally_smaller;
        }
    }
    Ok(r)
}

fn sampled_conclusions(r: &ComparisonReport) -> (Conclusion, Conclusion) {
    use Status::{Fails, Holds};
    let first = status(&r.first_order);
    let mut local_refuted = Vec::new();
    let mut local_implied = Vec::new();
    let mut global_implied = Vec::new();

    if first == Some(Fails) {
        local_refuted.push(Rule::FirstOrderNecessary);
    }
    if status(&r.ratio_monotone) == Some(Fails) || status(&r.hessian_definite) == Some(Fails) {
        local_refuted.push(Rule::SecondOrderNecessary);
    }
    if first == Some(Holds) && r.ratio_monotone.as_ref().is_some_and(|v| v.is_holds() && v.strict) {
        local_implied.push(Rule::SecondOrderSufficient);
    }
    if first == Some(Holds) {
        if status(&r.two_point) == Some(Holds) {
            global_implied.push(Rule::TwoPointSufficient);
        }
        if status(&r.monotone_ratios) == Some(Holds) {
            global_implied.push(Rule::MonotoneRatios);
        }
        if status(&r.power_two_point) == Some(Holds) {
            global_implied.push(Rule::PowerTwoPoint);
        }
    }
    match r.shared_weights.as_ref().and_then(|b| b.unanimous()) {
        Some(Holds) => global_implied.push(Rule::SharedWeightsEquivalence),
        Some(Fails) => local_refuted.push(Rule::SharedWeightsEquivalence),
        _ => {}
    }
    match status(&r.shared_generator) {
        Some(Holds) => global_implied.push(Rule::SharedGeneratorEquivalence),
        Some(Fails) => local_refuted.push(Rule::SharedGeneratorEquivalence),
        _ => {}
    }

    let global = resolve(&global_implied, &local_refuted, Some(Rule::GlobalImpliesLocal));
    if global.outcome == Outcome::Implied && local_implied.is_empty() {
        local_implied.push(match global.rule {
            Some(rule @ (Rule::SharedWeightsEquivalence | Rule::SharedGeneratorEquivalence)) => rule,
            _ => Rule::GlobalImpliesLocal,
        });
    }
    let local = resolve(&local_implied, &local_refuted, None);
    (local, global)
}
