//! First- and second-order conditions at the diagonal.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{ensure_compatible, CheckConfig, CompareError, Verdict, Witness};
use crate::kernel::{KernelError, MeanSpec};
use crate::sum::compensated_sum;

/// Equality tolerance used when a caller does not supply a [`CheckConfig`].
const DEFAULT_EQUALITY_TOL: f64 = 1e-9;
/// Relative agreement required between the two minor computations.
const MINOR_AGREEMENT: f64 = 1e-10;

/// `p_i(x)/p_0(x) - q_i(x)/q_0(x)` for every `i`.
pub fn first_order_residuals(m1: &MeanSpec, m2: &MeanSpec, x: f64) -> Result<Vec<f64>, CompareError> {
    ensure_compatible(m1, m2)?;
    let a = m1.diag_first_partials(x)?;
    let b = m2.diag_first_partials(x)?;
    Ok(a.iter().zip(&b).map(|(u, v)| u - v).collect())
}

/// Checks `p_i/p_0 = q_i/q_0` on the sample grid.
pub fn check_first_order(m1: &MeanSpec, m2: &MeanSpec, cfg: &CheckConfig) -> Result<Verdict, CompareError> {
    ensure_compatible(m1, m2)?;
    let window = cfg.window_for(m1.domain())?;
    let points = window.sample(cfg.samples);
    let mut worst = Witness::at(vec![points[0]], 0.0).with_index(0);
    for &x in &points {
        for (i, r) in first_order_residuals(m1, m2, x)?.into_iter().enumerate() {
            if r.abs() > worst.value.abs() {
                worst = Witness::at(vec![x], r).with_index(i);
            }
        }
    }
    let cert = super::Certification::Sampled {
        points: points.len(),
        tolerance: cfg.equality_tol,
    };
    if worst.value.abs() <= cfg.equality_tol {
        Ok(Verdict::holds(false, Some(worst), cert))
    } else {
        Ok(Verdict::fails(worst, cert))
    }
}

/// The terms of `χ = 2 r_0'/r_0 + g''/g' - f''/f'` with `r_0 = q_0/p_0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Discriminant {
    pub weight_term: f64,
    pub g_term: f64,
    pub f_term: f64,
}

impl Discriminant {
    pub fn value(&self) -> f64 {
        self.weight_term + self.g_term - self.f_term
    }

    /// Magnitude against which a tolerance on `χ` is measured.
    pub fn scale(&self) -> f64 {
        1.0 + self.weight_term.abs() + self.g_term.abs() + self.f_term.abs()
    }
}

/// `q_0'/q_0 - p_0'/p_0`, the logarithmic derivative of `q_0/p_0`.
pub(crate) fn weight_ratio_log_derivative(
    m1: &MeanSpec,
    m2: &MeanSpec,
    x: f64,
) -> Result<(f64, f64), KernelError> {
    let p = m1.weights();
    let q = m2.weights();
    let lp = p.total_derivative(x)? / p.total(x)?;
    let lq = q.total_derivative(x)? / q.total(x)?;
    Ok((lq - lp, 1.0 + lq.abs() + lp.abs()))
}

pub(crate) fn discriminant_terms(m1: &MeanSpec, m2: &MeanSpec, x: f64) -> Result<Discriminant, KernelError> {
    let (log_ratio, _) = weight_ratio_log_derivative(m1, m2, x)?;
    Ok(Discriminant {
        weight_term: 2.0 * log_ratio,
        g_term: m2.generator().curvature_ratio(x)?,
        f_term: m1.generator().curvature_ratio(x)?,
    })
}

/// `χ(x)`, the logarithmic derivative of `q_0²|g'| / (p_0²|f'|)`.
pub fn comparison_discriminant(m1: &MeanSpec, m2: &MeanSpec, x: f64) -> Result<f64, CompareError> {
    ensure_compatible(m1, m2)?;
    Ok(discriminant_terms(m1, m2, x)?.value())
}

/// Checks that `q_0²|g'| / (p_0²|f'|)` is increasing through the sign of
/// its logarithmic derivative `χ` on the sample grid.
///
/// `Holds` requires `χ >= -slack·scale` everywhere; it is marked strict when
/// `χ > slack·scale` everywhere.
pub fn check_ratio_monotone(m1: &MeanSpec, m2: &MeanSpec, cfg: &CheckConfig) -> Result<Verdict, CompareError> {
    ensure_compatible(m1, m2)?;
    let window = cfg.window_for(m1.domain())?;
    let points = window.sample(cfg.samples);
    let mut worst: Option<(f64, f64, f64)> = None; // (normalized, x, chi)
    for &x in &points {
        let d = discriminant_terms(m1, m2, x)?;
        let chi = d.value();
        let normalized = chi / d.scale();
        if worst.is_none_or(|w| normalized < w.0) {
            worst = Some((normalized, x, chi));
        }
    }
    let (normalized, x, chi) = worst.expect("nonempty sample");
    let witness = Witness::at(vec![x], chi);
    let cert = cfg.sampled(points.len());
    if normalized < -cfg.slack {
        Ok(Verdict::fails(witness, cert))
    } else {
        Ok(Verdict::holds(normalized > cfg.slack, Some(witness), cert))
    }
}

/// Leading principal minors of the diagonal Hessian of `A_{g,q} - A_{f,p}`,
/// computed by the closed form and by direct determinants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorDets {
    pub chi: f64,
    pub closed_form: Vec<f64>,
    pub direct: Vec<f64>,
}

/// Minors for weight values `p_1..p_n` (at one point) and discriminant `χ`.
///
/// The matrix has entries `p_i(δ_ij p_0 - p_j)/p_0² · χ`; its `k`-th leading
/// minor is `χ^k · p_1⋯p_k (p_0 - (p_1+⋯+p_k)) / p_0^(k+1)`. Both are
/// computed, and disagreement beyond `1e-10` relative is an error.
pub fn leading_minors(weights: &[f64], chi: f64, kmax: usize) -> Result<MinorDets, CompareError> {
    let n = weights.len();
    if kmax == 0 || kmax >= n {
        return Err(CompareError::InvalidMinorOrder {
            kmax,
            max: n.saturating_sub(1),
        });
    }
    let p0 = compensated_sum(weights.iter().copied());
    let p0_sq = p0 * p0;
    let matrix = DMatrix::from_fn(kmax, kmax, |i, j| {
        let delta = if i == j { p0 } else { 0.0 };
        weights[i] * (delta - weights[j]) / p0_sq * chi
    });
    let mut closed_form = Vec::with_capacity(kmax);
    let mut direct = Vec::with_capacity(kmax);
    let mut product = 1.0;
    for k in 1..=kmax {
        product *= weights[k - 1];
        // p_0 - (p_1 + ... + p_k) summed directly from the remaining weights
        let rest = compensated_sum(weights[k..].iter().copied());
        let closed = chi.powi(k as i32) * product * rest / p0.powi(k as i32 + 1);
        let det = matrix.view((0, 0), (k, k)).clone_owned().determinant();
        let scale = closed.abs().max(det.abs());
        if (closed - det).abs() > MINOR_AGREEMENT * scale {
            return Err(CompareError::MinorMismatch {
                k,
                closed_form: closed,
                direct: det,
            });
        }
        closed_form.push(closed);
        direct.push(det);
    }
    Ok(MinorDets {
        chi,
        closed_form,
        direct,
    })
}

/// Minors of the diagonal Hessian of `A_{g,q} - A_{f,p}` at `x`, for
/// `k = 1..=kmax` with `1 <= kmax <= n-1`.
///
/// Refuses points where `p_i/p_0 = q_i/q_0` fails, since the closed form
/// relies on `q_i = (q_0/p_0) p_i`.
pub fn hessian_minor_dets(m1: &MeanSpec, m2: &MeanSpec, x: f64, kmax: usize) -> Result<MinorDets, CompareError> {
    ensure_compatible(m1, m2)?;
    if kmax == 0 || kmax >= m1.n() {
        return Err(CompareError::InvalidMinorOrder {
            kmax,
            max: m1.n() - 1,
        });
    }
    check_first_order_at(m1, m2, x, DEFAULT_EQUALITY_TOL)?;
    let chi = discriminant_terms(m1, m2, x)?.value();
    leading_minors(&m1.weights().values(x)?, chi, kmax)
}

fn check_first_order_at(m1: &MeanSpec, m2: &MeanSpec, x: f64, tol: f64) -> Result<(), CompareError> {
    for (index, residual) in first_order_residuals(m1, m2, x)?.into_iter().enumerate() {
        if residual.abs() > tol {
            return Err(CompareError::FirstOrderViolated { x, index, residual });
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Sign {
    Negative,
    Negligible,
    Positive,
}

/// Positive (semi)definiteness of the diagonal Hessian of
/// `A_{g,q} - A_{f,p}` by leading minors on the sample grid.
///
/// A minor counts as zero when `|det / (p_1⋯p_k(p_0-…)/p_0^(k+1))|^(1/k)`,
/// i.e. the implied `|χ|`, is within `slack·scale`. Any negative leading
/// minor rules out semidefiniteness; all positive gives a strict `Holds`.
/// Inconclusive when the first-order condition fails somewhere.
pub fn check_hessian_definite(m1: &MeanSpec, m2: &MeanSpec, cfg: &CheckConfig) -> Result<Verdict, CompareError> {
    ensure_compatible(m1, m2)?;
    let window = cfg.window_for(m1.domain())?;
    let points = window.sample(cfg.samples);
    let kmax = m1.n() - 1;
    let cert = cfg.sampled(points.len());
    let mut all_positive = true;
    let mut closest: Option<(f64, Witness)> = None;
    for &x in &points {
        if let Err(CompareError::FirstOrderViolated { x, index, residual }) =
            check_first_order_at(m1, m2, x, cfg.equality_tol)
        {
            return Ok(Verdict::inconclusive(
                format!(
                    "first-order condition fails at x = {x} (index {index}, residual {residual:e})"
                ),
                cert,
            ));
        }
        let terms = discriminant_terms(m1, m2, x)?;
        let p = m1.weights().values(x)?;
        let minors = leading_minors(&p, terms.value(), kmax)?;
        let p0 = compensated_sum(p.iter().copied());
        let threshold = cfg.slack * terms.scale();
        let mut product = 1.0;
        for (k0, &det) in minors.closed_form.iter().enumerate() {
            let k = k0 + 1;
            product *= p[k0];
            let factor = product * compensated_sum(p[k..].iter().copied()) / p0.powi(k as i32 + 1);
            let implied_chi = (det / factor).abs().powf(1.0 / k as f64);
            let sign = if implied_chi <= threshold {
                Sign::Negligible
            } else if det < 0.0 {
                Sign::Negative
            } else {
                Sign::Positive
            };
            let witness = Witness::at(vec![x], det).with_index(k);
            if sign == Sign::Negative {
                return Ok(Verdict::fails(witness, cert));
            }
            if sign == Sign::Negligible {
                all_positive = false;
            }
            let margin = if det < 0.0 { -implied_chi } else { implied_chi };
            if closest.as_ref().is_none_or(|c| margin < c.0) {
                closest = Some((margin, witness));
            }
        }
    }
    Ok(Verdict::holds(all_positive, closest.map(|c| c.1), cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::Status;
    use crate::expr::parse_expr;
    use crate::interval::Interval;
    use crate::kernel::{GeneratorSpec, WeightFamily};

    fn spec(f: &str, weights: &[&str]) -> MeanSpec {
        let domain = Interval::positive();
        MeanSpec::new(
            GeneratorSpec::new(parse_expr(f).unwrap(), domain).unwrap(),
            WeightFamily::new(
                weights.iter().map(|w| parse_expr(w).unwrap()).collect(),
                domain,
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn cfg() -> CheckConfig {
        CheckConfig {
            samples: 512,
            grid: 64,
            ..Default::default()
        }
    }

    #[test]
    fn first_order_identical_and_proportional() {
        let m = spec("x", &["x", "1"]);
        assert!(check_first_order(&m, &m, &cfg()).unwrap().is_holds());
        let p = spec("x", &["x", "x"]);
        let q = spec("log(x)", &["2*x", "2*x"]);
        assert!(check_first_order(&p, &q, &cfg()).unwrap().is_holds());
    }

    #[test]
    fn first_order_mismatch() {
        let p = spec("x", &["1", "x"]);
        let q = spec("x", &["1", "x^2"]);
        let r = first_order_residuals(&p, &q, 2.0).unwrap();
        assert!((r[0] - (1.0 / 3.0 - 1.0 / 5.0)).abs() < 1e-15);
        let v = check_first_order(&p, &q, &cfg()).unwrap();
        assert_eq!(v.status, Status::Fails);
        let w = v.witness.unwrap();
        let again = first_order_residuals(&p, &q, w.point[0]).unwrap();
        assert_eq!(again[w.index.unwrap()], w.value);
    }

    #[test]
    fn ratio_monotone_examples() {
        let f = spec("x", &["1", "1"]);
        let g = spec("x^2", &["1", "1"]);
        let v = check_ratio_monotone(&f, &g, &cfg()).unwrap();
        assert!(v.is_holds() && v.strict);
        assert!((comparison_discriminant(&f, &g, 2.0).unwrap() - 0.5).abs() < 1e-15);

        let v = check_ratio_monotone(&f, &f, &cfg()).unwrap();
        assert!(v.is_holds() && !v.strict);

        let v = check_ratio_monotone(&g, &f, &cfg()).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert!(v.witness.unwrap().value < 0.0);
    }

    #[test]
    fn minors_vanish_for_equal_means() {
        let m = spec("x^2", &["1", "x", "x^2"]);
        let d = hessian_minor_dets(&m, &m, 1.5, 2).unwrap();
        assert!(d.closed_form.iter().all(|&v| v == 0.0));
        assert!(d.direct.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn first_minor_formula() {
        let p = [0.5, 1.5, 2.0];
        let chi = 0.7;
        let d = leading_minors(&p, chi, 2).unwrap();
        let p0: f64 = 4.0;
        assert!((d.closed_form[0] - chi * p[0] * (p0 - p[0]) / (p0 * p0)).abs() < 1e-16);
    }

    #[test]
    fn minor_order_validated() {
        assert!(leading_minors(&[1.0, 2.0], 1.0, 2).is_err());
        assert!(leading_minors(&[1.0, 2.0], 1.0, 0).is_err());
        let m = spec("x", &["1", "1"]);
        assert!(hessian_minor_dets(&m, &m, 1.0, 2).is_err());
    }

    #[test]
    fn minors_refused_without_first_order() {
        let p = spec("x", &["1", "x"]);
        let q = spec("x", &["1", "x^2"]);
        assert!(matches!(
            hessian_minor_dets(&p, &q, 2.0, 1),
            Err(CompareError::FirstOrderViolated { .. })
        ));
        assert_eq!(
            check_hessian_definite(&p, &q, &cfg()).unwrap().status,
            Status::Inconclusive
        );
    }

    #[test]
    fn hessian_definiteness() {
        let am = spec("x", &["1", "1", "1"]);
        let qm = spec("x^2", &["1", "1", "1"]);
        let v = check_hessian_definite(&am, &qm, &cfg()).unwrap();
        assert!(v.is_holds() && v.strict);
        let v = check_hessian_definite(&qm, &am, &cfg()).unwrap();
        assert_eq!(v.status, Status::Fails);
        assert_eq!(v.witness.unwrap().index, Some(1));
        let v = check_hessian_definite(&am, &am, &cfg()).unwrap();
        assert!(v.is_holds() && !v.strict);
    }
}
