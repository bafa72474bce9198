//! Closed-form classification of power means with power weights:
//! generators `x^a` (`log x` for `a = 0`) and weights `λ_i x^{α_i}`.

use serde::{Deserialize, Serialize};

use super::report::{ComparisonReport, PowerDerived};
use super::{Certification, Conclusion, Rule, Verdict, Witness};

/// Relative tolerance when deriving `γ` and `δ` from the coefficients.
const DERIVE_TOL: f64 = 1e-12;

/// Parameters of `A_{x^a, λx^α}` versus `A_{x^b, μx^β}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerParams {
    pub a: f64,
    pub b: f64,
    pub lambda: Vec<f64>,
    pub alpha: Vec<f64>,
    pub mu: Vec<f64>,
    pub beta: Vec<f64>,
}

impl PowerParams {
    /// Unit-coefficient weights `λ = μ = 1`, `α = 0`, `β = δ`.
    pub fn with_shift(a: f64, b: f64, delta: f64, n: usize) -> Self {
        PowerParams {
            a,
            b,
            lambda: vec![1.0; n],
            alpha: vec![0.0; n],
            mu: vec![1.0; n],
            beta: vec![delta; n],
        }
    }

    /// `(γ, δ)` with `μ_i = γλ_i` and `β_i = α_i + δ` for all `i`, if any.
    pub fn gamma_delta(&self) -> Option<(f64, f64)> {
        let gamma = self.mu[0] / self.lambda[0];
        let delta = self.beta[0] - self.alpha[0];
        let proportional = self
            .mu
            .iter()
            .zip(&self.lambda)
            .all(|(m, l)| (m / l - gamma).abs() <= DERIVE_TOL * gamma.abs());
        let shifted = self.beta.iter().zip(&self.alpha).all(|(b, a)| {
            ((b - a) - delta).abs() <= DERIVE_TOL * (1.0 + a.abs() + b.abs())
        });
        (proportional && shifted).then_some((gamma, delta))
    }

    fn validate(&self) -> Result<(), String> {
        let n = self.lambda.len();
        if n < 2 || [self.alpha.len(), self.mu.len(), self.beta.len()] != [n; 3] {
            return Err(format!(
                "need n >= 2 coefficients per vector, got lengths {}, {}, {}, {}",
                n,
                self.alpha.len(),
                self.mu.len(),
                self.beta.len()
            ));
        }
        if let Some(v) = self.lambda.iter().chain(&self.mu).find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(format!("weight coefficients must be positive and finite, got {v}"));
        }
        let all_finite = [self.a, self.b]
            .iter()
            .chain(&self.alpha)
            .chain(&self.beta)
            .all(|v| v.is_finite());
        if !all_finite {
            return Err("exponents must be finite".into());
        }
        Ok(())
    }

    fn weight(&self, coef: &[f64], exps: &[f64], i: usize, x: f64) -> f64 {
        coef[i] * x.powf(exps[i])
    }

    /// Largest `|p_i/p_0 - q_i/q_0|` over a few points, with its location.
    fn first_order_witness(&self) -> Witness {
        let n = self.lambda.len();
        let mut best = Witness::at(vec![1.0], 0.0).with_index(0);
        for x in [1.0, 2.0, 0.5, 4.0, 0.25] {
            let p: Vec<f64> = (0..n).map(|i| self.weight(&self.lambda, &self.alpha, i, x)).collect();
            let q: Vec<f64> = (0..n).map(|i| self.weight(&self.mu, &self.beta, i, x)).collect();
            let (p0, q0): (f64, f64) = (p.iter().sum(), q.iter().sum());
            for i in 0..n {
                let r = p[i] / p0 - q[i] / q0;
                if r.abs() > best.value.abs() {
                    best = Witness::at(vec![x], r).with_index(i);
                }
            }
        }
        best
    }
}

/// `min(a,0) <= δ + min(b,0)` and `max(a,0) <= δ + max(b,0)`.
pub fn exponent_bounds_hold(a: f64, b: f64, delta: f64) -> bool {
    a.min(0.0) <= delta + b.min(0.0) && a.max(0.0) <= delta + b.max(0.0)
}

/// Whether the two power means coincide: same generator and weights up to
/// a constant factor, or the symmetric pair `a = δ`, `b = -δ`.
fn identical(a: f64, b: f64, delta: f64) -> bool {
    (a == b && delta == 0.0) || (a == delta && b == -delta && a != 0.0)
}

/// `g_{r,s}(t) = (t^r - t^s)/(r - s)`, and `t^r log t` when `r = s`.
///
/// Computed as `t^s · expm1((r-s) log t)/(r-s)` so nearby exponents do not
/// cancel. `None` unless `t > 0`.
pub fn divided_power_difference(r: f64, s: f64, t: f64) -> Option<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return None;
    }
    let ln = t.ln();
    let h = r - s;
    if h == 0.0 {
        return Some(t.powf(r) * ln);
    }
    Some(t.powf(s) * (h * ln).exp_m1() / h)
}

/// A pair `(t, 1)` where the power two-point inequality fails, for
/// `a > b + 2δ`. With `y = 1` the difference is `t^δ g_{b,0}(t) - g_{a,0}(t)`,
/// which behaves like `(b - a + 2δ)(t-1)²/2` near `t = 1`.
fn two_point_witness(a: f64, b: f64, delta: f64) -> Witness {
    let diff = |t: f64| {
        t.powf(delta) * divided_power_difference(b, 0.0, t).unwrap_or(f64::NAN)
            - divided_power_difference(a, 0.0, t).unwrap_or(f64::NAN)
    };
    let mut h = 0.5;
    while h > 1e-6 && !(diff(1.0 + h) < 0.0) {
        h /= 2.0;
    }
    Witness::at(vec![1.0 + h, 1.0], diff(1.0 + h))
}

/// Classifies a power-mean pair exactly.
///
/// Local comparability needs `μ = γλ` and `β = α + δ`; given those it is
/// refuted when `a > b + 2δ`, implied when `a < b + 2δ`, and left unknown
/// on the boundary unless the means coincide. Global comparability is
/// implied by the exponent bounds [`exponent_bounds_hold`].
pub fn classify_power(params: &PowerParams) -> Result<ComparisonReport, String> {
    params.validate()?;
    let cf = Certification::ClosedForm;
    let (a, b) = (params.a, params.b);
    let mut report = ComparisonReport::empty();

    let Some((gamma, delta)) = params.gamma_delta() else {
        report.first_order = Some(Verdict::fails(params.first_order_witness(), cf));
        let reason = "mu is not a multiple of lambda or beta - alpha is not constant";
        report.locally_smaller = Conclusion::refuted(Rule::PowerProportionality).with_note(reason);
        report.globally_smaller = Conclusion::refuted(Rule::PowerProportionality).with_note(reason);
        return Ok(report);
    };
    report.power = Some(PowerDerived { gamma, delta, a, b });
    report.first_order = Some(Verdict::holds(false, None, cf));

    // χ(x) = (b - a + 2δ)/x
    let e = b - a + 2.0 * delta;
    let chi_at_one = Witness::at(vec![1.0], e);
    report.ratio_monotone = Some(if e < 0.0 {
        Verdict::fails(chi_at_one, cf)
    } else {
        Verdict::holds(e > 0.0, Some(chi_at_one), cf)
    });
    let l0: f64 = params.lambda.iter().sum();
    let first_minor = e * params.lambda[0] * (l0 - params.lambda[0]) / (l0 * l0);
    let minor = Witness::at(vec![1.0], first_minor).with_index(1);
    report.hessian_definite = Some(if e < 0.0 {
        Verdict::fails(minor, cf)
    } else {
        Verdict::holds(e > 0.0, Some(minor), cf)
    });

    let bounds = exponent_bounds_hold(a, b, delta);
    let two_point = if bounds {
        Verdict::holds(false, None, cf)
    } else if e < 0.0 {
        // the two-point inequality forces χ >= 0 near the diagonal
        Verdict::fails(two_point_witness(a, b, delta), cf)
            .with_note("a > b + 2 delta; fails near the diagonal")
    } else {
        Verdict::inconclusive("exponent bounds do not hold; no closed form decides the inequality", cf)
    };
    report.two_point = Some(two_point.clone());
    report.power_two_point = Some(two_point);
    report.monotone_ratios = Some(if delta >= 0.0 && a <= b {
        Verdict::holds(delta > 0.0 && a < b, None, cf)
    } else {
        let index = if delta < 0.0 { 0 } else { 1 };
        let value = if delta < 0.0 { delta } else { b - a };
        Verdict::fails(Witness::at(vec![1.0], value).with_index(index), cf)
    });

    if identical(a, b, delta) {
        report.locally_smaller = Conclusion::implied(Rule::IdenticalMeans);
        report.globally_smaller = Conclusion::implied(Rule::IdenticalMeans);
        return Ok(report);
    }
    if e < 0.0 {
        report.locally_smaller = Conclusion::refuted(Rule::PowerExponentOrder);
        report.globally_smaller =
            Conclusion::refuted(Rule::PowerExponentOrder).with_note("global comparability implies local");
        return Ok(report);
    }
    report.locally_smaller = if e > 0.0 {
        Conclusion::implied(Rule::PowerExponentOrder)
    } else {
        Conclusion::unknown("a = b + 2 delta is neither necessary-violating nor sufficient")
    };
    report.globally_smaller = if bounds {
        Conclusion::implied(Rule::PowerExponentBounds)
    } else {
        Conclusion::unknown("exponent bounds do not hold")
    };
    if bounds && report.locally_smaller.rule.is_none() {
        report.locally_smaller = Conclusion::implied(Rule::GlobalImpliesLocal);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::{Outcome, Status};

    #[test]
    fn geometric_vs_arithmetic() {
        let r = classify_power(&PowerParams::with_shift(0.0, 1.0, 0.0, 2)).unwrap();
        assert_eq!(r.locally_smaller.outcome, Outcome::Implied);
        assert_eq!(r.globally_smaller, Conclusion::implied(Rule::PowerExponentBounds));
        assert_eq!(r.first_order.unwrap().certification, Certification::ClosedForm);
    }

    #[test]
    fn identical_and_refuted() {
        let r = classify_power(&PowerParams::with_shift(1.5, 1.5, 0.0, 3)).unwrap();
        assert_eq!(r.locally_smaller.rule, Some(Rule::IdenticalMeans));
        assert_eq!(r.globally_smaller.rule, Some(Rule::IdenticalMeans));
        let r = classify_power(&PowerParams::with_shift(2.0, 1.0, 0.0, 2)).unwrap();
        assert_eq!(r.locally_smaller, Conclusion::refuted(Rule::PowerExponentOrder));
        assert_eq!(r.ratio_monotone.unwrap().status, Status::Fails);
    }

    #[test]
    fn symmetric_pair_is_identical() {
        // x^a with weight 1 against x^{-a} with weight x^a
        let r = classify_power(&PowerParams::with_shift(1.0, -1.0, 1.0, 2)).unwrap();
        assert_eq!(r.locally_smaller.rule, Some(Rule::IdenticalMeans));
    }

    #[test]
    fn boundary_unknown() {
        let r = classify_power(&PowerParams::with_shift(2.0, 0.0, 1.0, 2)).unwrap();
        assert_eq!(r.locally_smaller.outcome, Outcome::Unknown);
    }

    #[test]
    fn non_proportional_weights_refute() {
        let mut p = PowerParams::with_shift(0.0, 1.0, 0.0, 2);
        p.mu = vec![1.0, 2.0];
        let r = classify_power(&p).unwrap();
        assert_eq!(r.locally_smaller, Conclusion::refuted(Rule::PowerProportionality).with_note(r.locally_smaller.note.clone()));
        let w = r.first_order.unwrap().witness.unwrap();
        assert!((w.value.abs() - (0.5 - 1.0 / 3.0)).abs() < 1e-15);
        let mut p = PowerParams::with_shift(0.0, 1.0, 0.0, 2);
        p.beta = vec![0.0, 1.0];
        assert_eq!(classify_power(&p).unwrap().locally_smaller.outcome, Outcome::Refuted);
    }

    #[test]
    fn rejects_bad_coefficients() {
        let mut p = PowerParams::with_shift(0.0, 1.0, 0.0, 2);
        p.lambda[1] = 0.0;
        assert!(classify_power(&p).is_err());
        p.lambda = vec![1.0];
        assert!(classify_power(&p).is_err());
    }

    #[test]
    fn divided_difference_values() {
        assert!((divided_power_difference(2.0, 0.0, 2.0).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(divided_power_difference(3.0, 3.0, 1.0), Some(0.0));
        assert!(divided_power_difference(1.0, 0.0, -1.0).is_none());
        let t: f64 = 3.0;
        let near = divided_power_difference(1.0 + 1e-12, 1.0, t).unwrap();
        assert!((near - t * t.ln()).abs() < 1e-9);
        assert!((divided_power_difference(1.0, 0.0, t).unwrap() - (t - 1.0)).abs() < 1e-15);
    }
}
