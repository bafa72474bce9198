//! A small expression language for scalar functions of one variable `x`.
//!
//! Expressions are parsed from text (see [`parse_expr`]), evaluated at a
//! point, and differentiated symbolically. The grammar is:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?
//! primary := NUMBER | 'x' | ('exp' | 'log') '(' expr ')' | '(' expr ')'
//! NUMBER  := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
//! ```
//!
//! `+ - * /` are left-associative, `^` is right-associative and binds
//! tighter than unary minus, so `-x^2` is `-(x^2)` and `2^3^2` is `2^9`.
//! A unary minus applied to a constant is folded into the literal.
//!
//! Non-integer powers require a positive base at evaluation time. Integer
//! exponents accept any base except `0` raised to a negative power.

mod diff;
mod eval;
mod parse;

use std::fmt;

pub use eval::EvalError;
pub use parse::{parse_expr, ParseError, ParseErrorKind};

/// Built-in unary functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }
}

/// Expression tree over the single variable `x`.
///
/// Trees are immutable values; every operation returns a new tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    /// Composition of a built-in function with an inner expression.
    Apply(Func, Box<Expr>),
}

// Tree builders, deliberately not the operator traits.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn x() -> Expr {
        Expr::Var
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Neg(Box::new(e))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(base: Expr, exponent: Expr) -> Expr {
        Expr::Pow(Box::new(base), Box::new(exponent))
    }

    pub fn exp(e: Expr) -> Expr {
        Expr::Apply(Func::Exp, Box::new(e))
    }

    pub fn log(e: Expr) -> Expr {
        Expr::Apply(Func::Log, Box::new(e))
    }

    /// `x^a` for `a != 0`, `log(x)` for `a == 0`.
    pub fn power_generator(a: f64) -> Expr {
        if a == 0.0 {
            Expr::log(Expr::Var)
        } else {
            Expr::pow(Expr::Var, Expr::Const(a))
        }
    }

    /// `lambda * x^alpha`, collapsing to `lambda` when `alpha == 0`.
    pub fn power_weight(lambda: f64, alpha: f64) -> Expr {
        if alpha == 0.0 {
            Expr::Const(lambda)
        } else {
            Expr::mul(
                Expr::Const(lambda),
                Expr::pow(Expr::Var, Expr::Const(alpha)),
            )
        }
    }

    /// Sum of the given expressions, left-nested.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        let mut iter = terms.into_iter();
        match iter.next() {
            None => Expr::Const(0.0),
            Some(first) => iter.fold(first, Expr::add),
        }
    }

    /// True if `x` does not occur in the tree.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(e) | Expr::Apply(_, e) => e.is_constant(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Neg(e) | Expr::Apply(_, e) => 1 + e.size(),
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if c.is_sign_negative() => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Var | Expr::Apply(..) => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, min_prec: u8) -> fmt::Result {
    if child.precedence() < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expr {
    /// Writes the expression in the DSL grammar with the minimum number of
    /// parentheses needed to reproduce the same tree when parsed back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => f.write_str("x"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                // `-2` would re-parse as a literal, not a negation.
                if matches!(**e, Expr::Const(_)) {
                    write!(f, "({e})")
                } else {
                    write_child(f, e, 3)
                }
            }
            Expr::Add(a, b) => binary(f, a, " + ", b, 1),
            Expr::Sub(a, b) => binary(f, a, " - ", b, 1),
            Expr::Mul(a, b) => binary(f, a, " * ", b, 2),
            Expr::Div(a, b) => binary(f, a, " / ", b, 2),
            Expr::Pow(a, b) => {
                write_child(f, a, 5)?;
                f.write_str("^")?;
                write_child(f, b, 3)
            }
            Expr::Apply(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

fn binary(f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, prec: u8) -> fmt::Result {
    write_child(f, a, prec)?;
    f.write_str(op)?;
    write_child(f, b, prec + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_minimal_parentheses() {
        let e = parse_expr("log(x) + 3*x^0.5").unwrap();
        assert_eq!(e.to_string(), "log(x) + 3 * x^0.5");
        let e = parse_expr("(x - 1) - (x - 2)").unwrap();
        assert_eq!(e.to_string(), "x - 1 - (x - 2)");
        let e = parse_expr("(-2)^x").unwrap();
        assert_eq!(e.to_string(), "(-2)^x");
        let e = parse_expr("-x^2").unwrap();
        assert_eq!(e.to_string(), "-x^2");
    }

    #[test]
    fn power_presets() {
        assert_eq!(Expr::power_generator(0.0), Expr::log(Expr::x()));
        assert_eq!(
            Expr::power_generator(2.0),
            Expr::pow(Expr::x(), Expr::constant(2.0))
        );
        assert_eq!(Expr::power_weight(3.0, 0.0), Expr::constant(3.0));
    }

    #[test]
    fn constant_detection() {
        assert!(parse_expr("2^3 + log(4)").unwrap().is_constant());
        assert!(!parse_expr("2^x").unwrap().is_constant());
    }
}
