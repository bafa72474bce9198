use super::{Expr, Func};

// Folding constructors. They only evaluate constant-constant nodes and drop
// additive zeros and multiplicative ones/zeros; no other rewriting happens.

fn as_const(e: &Expr) -> Option<f64> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        a => Expr::neg(a),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::add(a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::sub(a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::Const(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => Expr::mul(a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) if y != 0.0 => Expr::Const(x / y),
        (Some(0.0), _) => Expr::Const(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::div(a, b),
    }
}

fn pow_const(base: Expr, exponent: f64) -> Expr {
    if exponent == 1.0 {
        base
    } else if exponent == 0.0 {
        Expr::Const(1.0)
    } else {
        Expr::pow(base, Expr::Const(exponent))
    }
}

impl Expr {
    /// Symbolic derivative with respect to `x`.
    ///
    /// The result is again an [`Expr`], so the operation can be applied
    /// repeatedly.
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var => Expr::Const(1.0),
            Expr::Neg(u) => neg(u.differentiate()),
            Expr::Add(u, v) => add(u.differentiate(), v.differentiate()),
            Expr::Sub(u, v) => sub(u.differentiate(), v.differentiate()),
            Expr::Mul(u, v) => add(
                mul(u.differentiate(), (**v).clone()),
                mul((**u).clone(), v.differentiate()),
            ),
            Expr::Div(u, v) => div(
                sub(
                    mul(u.differentiate(), (**v).clone()),
                    mul((**u).clone(), v.differentiate()),
                ),
                mul((**v).clone(), (**v).clone()),
            ),
            Expr::Pow(u, v) => match v.constant_value() {
                // d(u^c) = c u^(c-1) u'
                Some(c) => mul(
                    mul(Expr::Const(c), pow_const((**u).clone(), c - 1.0)),
                    u.differentiate(),
                ),
                // d(u^v) = u^v (v' log u + v u' / u)
                None => mul(
                    self.clone(),
                    add(
                        mul(v.differentiate(), Expr::log((**u).clone())),
                        div(mul((**v).clone(), u.differentiate()), (**u).clone()),
                    ),
                ),
            },
            Expr::Apply(Func::Exp, u) => mul(self.clone(), u.differentiate()),
            Expr::Apply(Func::Log, u) => div(u.differentiate(), (**u).clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse_expr;

    use super::*;

    fn d(s: &str) -> Expr {
        parse_expr(s).unwrap().differentiate()
    }

    fn central_difference(e: &Expr, x: f64) -> f64 {
        let h = 1e-5 * x.abs().max(1.0);
        (e.eval(x + h).unwrap() - e.eval(x - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn first_derivatives() {
        assert_eq!(d("x^2").eval(3.0).unwrap(), 6.0);
        assert_eq!(d("log(x)").eval(2.0).unwrap(), 0.5);
        assert_eq!(d("x^2"), Expr::mul(Expr::Const(2.0), Expr::Var));
        assert_eq!(d("7"), Expr::Const(0.0));
    }

    #[test]
    fn second_derivative_of_x_plus_exp() {
        let e = parse_expr("x + exp(x)").unwrap();
        let d2 = e.differentiate().differentiate();
        assert_eq!(d2.eval(0.0).unwrap(), 1.0);
        // finite-difference oracle on the first derivative
        let d1 = e.differentiate();
        let fd = central_difference(&d1, 0.0);
        assert!((fd - 1.0).abs() < 1e-8);
    }

    #[test]
    fn variable_exponent_rule() {
        let e = parse_expr("x^x").unwrap();
        let de = e.differentiate();
        for &x in &[0.5f64, 1.0, 2.3] {
            let expected = x.powf(x) * (x.ln() + 1.0);
            assert!((de.eval(x).unwrap() - expected).abs() < 1e-12 * expected.abs().max(1.0));
        }
    }

    #[test]
    fn quotient_and_composition() {
        let e = parse_expr("exp(x^2) / (1 + log(x))").unwrap();
        let de = e.differentiate();
        for &x in &[0.7, 1.5, 3.0] {
            let fd = central_difference(&e, x);
            let sym = de.eval(x).unwrap();
            assert!((fd - sym).abs() <= 1e-6 * (1.0 + sym.abs()), "{x}: {fd} vs {sym}");
        }
    }

    #[test]
    fn constant_exponent_subtree_uses_power_rule() {
        let de = d("x^(1 + 1)");
        assert_eq!(de.eval(3.0).unwrap(), 6.0);
        // the power rule keeps the derivative defined at negative x
        assert_eq!(de.eval(-3.0).unwrap(), -6.0);
    }
}
