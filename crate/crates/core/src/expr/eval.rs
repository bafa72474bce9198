use thiserror::Error;

use super::{Expr, Func};

/// Evaluation failures. Evaluation never returns NaN or an infinity.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("log of nonpositive argument {0}")]
    LogDomain(f64),
    #[error("power {base}^{exponent} is undefined")]
    PowDomain { base: f64, exponent: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("overflow in `{op}`")]
    Overflow { op: &'static str },
    #[error("nonfinite input {0}")]
    NonFiniteInput(f64),
}

fn finite(v: f64, op: &'static str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Overflow { op })
    }
}

pub(crate) fn power(base: f64, exponent: f64) -> Result<f64, EvalError> {
    let integral = exponent.fract() == 0.0 && exponent.abs() < 9.0e15;
    if base == 0.0 {
        return if exponent > 0.0 {
            Ok(0.0)
        } else if exponent == 0.0 {
            Ok(1.0)
        } else {
            Err(EvalError::PowDomain { base, exponent })
        };
    }
    if base < 0.0 && !integral {
        return Err(EvalError::PowDomain { base, exponent });
    }
    let v = if integral && exponent.abs() <= i32::MAX as f64 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    };
    finite(v, "^")
}

impl Expr {
    /// Evaluates the expression at `x`.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        if !x.is_finite() {
            return Err(EvalError::NonFiniteInput(x));
        }
        self.eval_at(x)
    }

    fn eval_at(&self, x: f64) -> Result<f64, EvalError> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var => Ok(x),
            Expr::Neg(e) => Ok(-e.eval_at(x)?),
            Expr::Add(a, b) => finite(a.eval_at(x)? + b.eval_at(x)?, "+"),
            Expr::Sub(a, b) => finite(a.eval_at(x)? - b.eval_at(x)?, "-"),
            Expr::Mul(a, b) => finite(a.eval_at(x)? * b.eval_at(x)?, "*"),
            Expr::Div(a, b) => {
                let num = a.eval_at(x)?;
                let den = b.eval_at(x)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                finite(num / den, "/")
            }
            Expr::Pow(a, b) => power(a.eval_at(x)?, b.eval_at(x)?),
            Expr::Apply(Func::Exp, e) => finite(e.eval_at(x)?.exp(), "exp"),
            Expr::Apply(Func::Log, e) => {
                let v = e.eval_at(x)?;
                if v <= 0.0 {
                    Err(EvalError::LogDomain(v))
                } else {
                    Ok(v.ln())
                }
            }
        }
    }

    /// Value of a tree that does not mention `x`.
    pub fn constant_value(&self) -> Option<f64> {
        if self.is_constant() {
            self.eval_at(0.0).ok()
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse_expr;

    use super::*;

    fn ev(s: &str, x: f64) -> Result<f64, EvalError> {
        parse_expr(s).unwrap().eval(x)
    }

    #[test]
    fn basic_values() {
        assert_eq!(ev("x^2", 3.0).unwrap(), 9.0);
        assert_eq!(ev("log(x)", 1.0).unwrap(), 0.0);
        assert_eq!(ev("x + x^3", 2.0).unwrap(), 10.0);
        assert_eq!(ev("exp(0)", 5.0).unwrap(), 1.0);
        assert_eq!(ev("x^-1", 4.0).unwrap(), 0.25);
        assert_eq!(ev("(x - 3)^2", 1.0).unwrap(), 4.0);
        assert_eq!(ev("x^3", -2.0).unwrap(), -8.0);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(ev("log(x)", 0.0), Err(EvalError::LogDomain(0.0)));
        assert_eq!(ev("log(x)", -1.0), Err(EvalError::LogDomain(-1.0)));
        assert!(matches!(ev("x^-2", 0.0), Err(EvalError::PowDomain { .. })));
        assert!(matches!(ev("x^0.5", -1.0), Err(EvalError::PowDomain { .. })));
        assert_eq!(ev("1/(x-1)", 1.0), Err(EvalError::DivisionByZero));
        assert_eq!(ev("x^0.5", 0.0).unwrap(), 0.0);
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(ev("exp(x)", 1000.0), Err(EvalError::Overflow { op: "exp" }));
        assert!(matches!(ev("x^400", 1e10), Err(EvalError::Overflow { .. })));
        assert_eq!(ev("x * x", 1e200), Err(EvalError::Overflow { op: "*" }));
        assert!(matches!(ev("x", f64::NAN), Err(EvalError::NonFiniteInput(_))));
    }

    #[test]
    fn constant_subtrees() {
        assert_eq!(parse_expr("2 + 3").unwrap().constant_value(), Some(5.0));
        assert_eq!(parse_expr("log(0)").unwrap().constant_value(), None);
        assert_eq!(parse_expr("x").unwrap().constant_value(), None);
    }
}
