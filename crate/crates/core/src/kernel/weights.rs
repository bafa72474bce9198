use serde::{Deserialize, Serialize};

use super::{CertifyConfig, KernelError};
use crate::expr::Expr;
use crate::interval::{Interval, Window};
use crate::sum::{compensated_sum, CompensatedSum};

/// Coefficients of a power weight family `p_i(x) = lambda_i * x^alpha_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerWeights {
    pub lambda: Vec<f64>,
    pub alpha: Vec<f64>,
}

/// Positive weight functions `p_1, ..., p_n` on a common interval.
///
/// `p_0 = p_1 + ... + p_n` is evaluated with compensated summation.
#[derive(Debug, Clone)]
pub struct WeightFamily {
    weights: Vec<Expr>,
    derivatives: Vec<Expr>,
    domain: Interval,
    power: Option<PowerWeights>,
}

impl WeightFamily {
    pub fn new(weights: Vec<Expr>, domain: Interval) -> Result<Self, KernelError> {
        Self::with_config(weights, domain, &CertifyConfig::default())
    }

    pub fn with_config(
        weights: Vec<Expr>,
        domain: Interval,
        cfg: &CertifyConfig,
    ) -> Result<Self, KernelError> {
        if weights.len() < 2 {
            return Err(KernelError::TooFewWeights(weights.len()));
        }
        let window = Window::for_interval(&domain, &cfg.window);
        for x in window.sample(cfg.samples) {
            for (index, w) in weights.iter().enumerate() {
                let value = w.eval(x).map_err(|source| KernelError::Eval {
                    what: "weight",
                    x,
                    source,
                })?;
                if value <= 0.0 {
                    return Err(KernelError::NonPositiveWeight { index, x, value });
                }
            }
        }
        let derivatives = weights.iter().map(Expr::differentiate).collect();
        Ok(WeightFamily {
            weights,
            derivatives,
            domain,
            power: None,
        })
    }

    /// `n` copies of the constant weight 1.
    pub fn unit(n: usize, domain: Interval) -> Result<Self, KernelError> {
        Self::new(vec![Expr::Const(1.0); n], domain)
    }

    /// `p_i(x) = lambda_i * x^alpha_i` on a positive interval.
    pub fn power(lambda: &[f64], alpha: &[f64], domain: Interval) -> Result<Self, KernelError> {
        Self::power_with_config(lambda, alpha, domain, &CertifyConfig::default())
    }

    pub fn power_with_config(
        lambda: &[f64],
        alpha: &[f64],
        domain: Interval,
        cfg: &CertifyConfig,
    ) -> Result<Self, KernelError> {
        if lambda.len() != alpha.len() {
            return Err(KernelError::InvalidPowerParams(format!(
                "{} coefficients but {} exponents",
                lambda.len(),
                alpha.len()
            )));
        }
        if let Some(l) = lambda.iter().find(|l| !(**l > 0.0) || !l.is_finite()) {
            return Err(KernelError::InvalidPowerParams(format!(
                "weight coefficient {l} is not a positive finite number"
            )));
        }
        if let Some(a) = alpha.iter().find(|a| !a.is_finite()) {
            return Err(KernelError::InvalidPowerParams(format!(
                "weight exponent {a} is not finite"
            )));
        }
        if !domain.is_positive() {
            return Err(KernelError::InvalidPowerParams(format!(
                "power weights need a positive domain, got {domain}"
            )));
        }
        let exprs = lambda
            .iter()
            .zip(alpha)
            .map(|(&l, &a)| Expr::power_weight(l, a))
            .collect();
        let mut family = Self::with_config(exprs, domain, cfg)?;
        family.power = Some(PowerWeights {
            lambda: lambda.to_vec(),
            alpha: alpha.to_vec(),
        });
        Ok(family)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn exprs(&self) -> &[Expr] {
        &self.weights
    }

    pub fn power_params(&self) -> Option<&PowerWeights> {
        self.power.as_ref()
    }

    /// `p_0` as an expression.
    pub fn total_expr(&self) -> Expr {
        Expr::sum(self.weights.iter().cloned())
    }

    fn check_index(&self, i: usize) -> Result<(), KernelError> {
        if i < self.n() {
            Ok(())
        } else {
            Err(KernelError::IndexOutOfRange { index: i, n: self.n() })
        }
    }

    pub fn value(&self, i: usize, x: f64) -> Result<f64, KernelError> {
        self.check_index(i)?;
        self.weights[i].eval(x).map_err(|source| KernelError::Eval {
            what: "weight",
            x,
            source,
        })
    }

    pub fn derivative(&self, i: usize, x: f64) -> Result<f64, KernelError> {
        self.check_index(i)?;
        self.derivatives[i].eval(x).map_err(|source| KernelError::Eval {
            what: "weight derivative",
            x,
            source,
        })
    }

    pub fn values(&self, x: f64) -> Result<Vec<f64>, KernelError> {
        (0..self.n()).map(|i| self.value(i, x)).collect()
    }

    pub fn derivatives(&self, x: f64) -> Result<Vec<f64>, KernelError> {
        (0..self.n()).map(|i| self.derivative(i, x)).collect()
    }

    /// `p_0(x)`.
    pub fn total(&self, x: f64) -> Result<f64, KernelError> {
        let mut acc = CompensatedSum::new();
        for i in 0..self.n() {
            acc.add(self.value(i, x)?);
        }
        Ok(acc.value())
    }

    /// `p_0'(x)`.
    pub fn total_derivative(&self, x: f64) -> Result<f64, KernelError> {
        Ok(compensated_sum(self.derivatives(x)?))
    }

    /// True when both families have identical expressions and domain.
    pub fn same_as(&self, other: &WeightFamily) -> bool {
        self.weights == other.weights && self.domain == other.domain
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn total_and_derivatives() {
        let p = WeightFamily::new(
            vec![parse_expr("x").unwrap(), parse_expr("x^2").unwrap()],
            Interval::positive(),
        )
        .unwrap();
        assert_eq!(p.total(2.0).unwrap(), 6.0);
        assert_eq!(p.total_derivative(2.0).unwrap(), 5.0);
        assert_eq!(p.total_expr().eval(2.0).unwrap(), 6.0);
        assert!(p.value(2, 1.0).is_err());
    }

    #[test]
    fn rejects_nonpositive() {
        let err = WeightFamily::new(
            vec![parse_expr("1").unwrap(), parse_expr("x - 1").unwrap()],
            Interval::positive(),
        )
        .unwrap_err();
        assert!(matches!(err, KernelError::NonPositiveWeight { index: 1, .. }));
        assert!(matches!(
            WeightFamily::unit(1, Interval::positive()),
            Err(KernelError::TooFewWeights(1))
        ));
    }

    #[test]
    fn power_family() {
        let p = WeightFamily::power(&[1.0, 2.0], &[0.0, 1.0], Interval::positive()).unwrap();
        assert_eq!(p.values(3.0).unwrap(), vec![1.0, 6.0]);
        assert!(WeightFamily::power(&[1.0, -2.0], &[0.0, 1.0], Interval::positive()).is_err());
        assert!(WeightFamily::power(&[1.0], &[0.0, 1.0], Interval::positive()).is_err());
    }
}
