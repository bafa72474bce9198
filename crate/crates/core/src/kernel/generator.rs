use serde::{Deserialize, Serialize};

use super::{CertifyConfig, KernelError};
use crate::expr::Expr;
use crate::interval::{Interval, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Increasing => 1.0,
            Direction::Decreasing => -1.0,
        }
    }
}

/// A strictly monotone generator `f` on an open interval together with its
/// first two symbolic derivatives.
///
/// Monotonicity is certified on samples when the generator is built: `f'` must be
/// finite, nonzero, and of one sign at every sample point.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    expr: Expr,
    first: Expr,
    second: Expr,
    domain: Interval,
    direction: Direction,
    samples: usize,
    power_exponent: Option<f64>,
}

impl GeneratorSpec {
    pub fn new(expr: Expr, domain: Interval) -> Result<Self, KernelError> {
        Self::with_config(expr, domain, &CertifyConfig::default())
    }

    pub fn with_config(
        expr: Expr,
        domain: Interval,
        cfg: &CertifyConfig,
    ) -> Result<Self, KernelError> {
        let first = expr.differentiate();
        let second = first.differentiate();
        let window = Window::for_interval(&domain, &cfg.window);
        let mut direction = None;
        for x in window.sample(cfg.samples) {
            expr.eval(x).map_err(|source| KernelError::Eval {
                what: "generator",
                x,
                source,
            })?;
            let d = first.eval(x).map_err(|source| KernelError::Eval {
                what: "generator derivative",
                x,
                source,
            })?;
            let here = if d > 0.0 {
                Direction::Increasing
            } else if d < 0.0 {
                Direction::Decreasing
            } else {
                return Err(KernelError::NotStrictlyMonotone { x, derivative: d });
            };
            match direction {
                None => direction = Some(here),
                Some(dir) if dir != here => {
                    return Err(KernelError::NotStrictlyMonotone { x, derivative: d })
                }
                Some(_) => {}
            }
        }
        Ok(GeneratorSpec {
            expr,
            first,
            second,
            domain,
            direction: direction.expect("at least two samples"),
            samples: cfg.samples.max(2),
            power_exponent: None,
        })
    }

    /// `x^a` (`a != 0`) or `log x` (`a == 0`) on a positive interval.
    pub fn power(a: f64, domain: Interval) -> Result<Self, KernelError> {
        Self::power_with_config(a, domain, &CertifyConfig::default())
    }

    pub fn power_with_config(
        a: f64,
        domain: Interval,
        cfg: &CertifyConfig,
    ) -> Result<Self, KernelError> {
        if !a.is_finite() {
            return Err(KernelError::InvalidPowerParams(format!(
                "generator exponent {a} is not finite"
            )));
        }
        if !domain.is_positive() {
            return Err(KernelError::InvalidPowerParams(format!(
                "power generators need a positive domain, got {domain}"
            )));
        }
        let mut g = Self::with_config(Expr::power_generator(a), domain, cfg)?;
        g.power_exponent = Some(a);
        Ok(g)
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn first_derivative_expr(&self) -> &Expr {
        &self.first
    }

    pub fn second_derivative_expr(&self) -> &Expr {
        &self.second
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Number of points the monotonicity certificate was checked on.
    pub fn certified_samples(&self) -> usize {
        self.samples
    }

    /// Exponent when built with [`GeneratorSpec::power`].
    pub fn power_exponent(&self) -> Option<f64> {
        self.power_exponent
    }

    pub fn value(&self, x: f64) -> Result<f64, KernelError> {
        self.expr.eval(x).map_err(|source| KernelError::Eval {
            what: "generator",
            x,
            source,
        })
    }

    pub fn derivative(&self, x: f64) -> Result<f64, KernelError> {
        self.first.eval(x).map_err(|source| KernelError::Eval {
            what: "generator derivative",
            x,
            source,
        })
    }

    pub fn second_derivative(&self, x: f64) -> Result<f64, KernelError> {
        self.second.eval(x).map_err(|source| KernelError::Eval {
            what: "generator second derivative",
            x,
            source,
        })
    }

    /// `f''(x) / f'(x)`.
    pub fn curvature_ratio(&self, x: f64) -> Result<f64, KernelError> {
        let d1 = self.derivative(x)?;
        if d1 == 0.0 {
            return Err(KernelError::NotStrictlyMonotone { x, derivative: d1 });
        }
        Ok(self.second_derivative(x)? / d1)
    }

    /// True when both specs have the same expression and domain.
    pub fn same_as(&self, other: &GeneratorSpec) -> bool {
        self.expr == other.expr && self.domain == other.domain
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn certifies_direction() {
        let f = GeneratorSpec::new(parse_expr("x^2").unwrap(), Interval::positive()).unwrap();
        assert_eq!(f.direction(), Direction::Increasing);
        let f = GeneratorSpec::new(parse_expr("x^-1").unwrap(), Interval::positive()).unwrap();
        assert_eq!(f.direction(), Direction::Decreasing);
        let f = GeneratorSpec::new(parse_expr("-exp(x)").unwrap(), Interval::new(-50.0, 50.0).unwrap()).unwrap();
        assert_eq!(f.direction(), Direction::Decreasing);
    }

    #[test]
    fn rejects_non_monotone() {
        let err = GeneratorSpec::new(parse_expr("x^2").unwrap(), Interval::real_line()).unwrap_err();
        assert!(matches!(err, KernelError::NotStrictlyMonotone { .. }));
        let err = GeneratorSpec::new(parse_expr("3").unwrap(), Interval::positive()).unwrap_err();
        assert!(matches!(err, KernelError::NotStrictlyMonotone { .. }));
    }

    #[test]
    fn rejects_undefined_on_domain() {
        let err = GeneratorSpec::new(parse_expr("log(x)").unwrap(), Interval::real_line()).unwrap_err();
        assert!(matches!(err, KernelError::Eval { .. }));
    }

    #[test]
    fn power_presets() {
        let f = GeneratorSpec::power(0.0, Interval::positive()).unwrap();
        assert_eq!(f.value(1.0).unwrap(), 0.0);
        assert_eq!(f.curvature_ratio(2.0).unwrap(), -0.5);
        let f = GeneratorSpec::power(3.0, Interval::positive()).unwrap();
        assert_eq!(f.power_exponent(), Some(3.0));
        assert!((f.curvature_ratio(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(GeneratorSpec::power(1.0, Interval::real_line()).is_err());
    }
}
