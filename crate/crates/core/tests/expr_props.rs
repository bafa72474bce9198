use meancmp::expr::{parse_expr, EvalError, Expr, ParseErrorKind};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        3 => Just(Expr::x()),
        1 => (1u32..40).prop_map(|k| Expr::constant(k as f64 / 8.0)),
    ]
}

/// Random trees of bounded depth. Exponents are small constants or `x`
/// itself, so that evaluation on positive points is usually defined.
fn tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::div(a, b)),
            inner.clone().prop_map(Expr::neg),
            (inner.clone(), -6i32..7).prop_map(|(a, k)| Expr::pow(a, Expr::constant(k as f64 / 2.0))),
            inner.clone().prop_map(|a| Expr::pow(a, Expr::x())),
            inner.clone().prop_map(|a| Expr::exp(Expr::div(a, Expr::constant(4.0)))),
            inner.prop_map(Expr::log),
        ]
    })
}

/// Central difference with one Richardson step.
fn richardson(f: impl Fn(f64) -> Option<f64>, x: f64, h: f64) -> Option<f64> {
    let d = |h: f64| Some((f(x + h)? - f(x - h)?) / (2.0 * h));
    let (a, b) = (d(h)?, d(h / 2.0)?);
    Some((4.0 * b - a) / 3.0)
}

fn finite(e: &Expr, x: f64) -> Option<f64> {
    e.eval(x).ok().filter(|v| v.abs() < 1e8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printing_and_parsing_reach_a_fixed_point(e in tree()) {
        let once = parse_expr(&e.to_string()).unwrap();
        let twice = parse_expr(&once.to_string()).unwrap();
        prop_assert_eq!(&once, &twice);
        // printing never changes the value
        for x in [0.7, 1.3, 2.9] {
            match (e.eval(x), once.eval(x)) {
                (Ok(a), Ok(b)) => prop_assert!(a == b || (a - b).abs() <= 1e-12 * a.abs()),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{e}: {a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn symbolic_derivatives_match_finite_differences(e in tree(), x in 0.5f64..3.0) {
        let d1 = e.differentiate();
        let d2 = d1.differentiate();
        let h = 1e-3 * (1.0 + x);
        let f0 = finite(&e, x);
        prop_assume!(f0.is_some());
        let (Some(s1), Some(s2)) = (finite(&d1, x), finite(&d2, x)) else {
            return Err(TestCaseError::reject("derivative undefined or huge"));
        };
        let fd1 = richardson(|t| finite(&e, t), x, h);
        let fd1_half = richardson(|t| finite(&e, t), x, h / 2.0);
        let fd2 = richardson(|t| finite(&d1, t), x, h);
        let fd2_half = richardson(|t| finite(&d1, t), x, h / 2.0);
        let (Some(fd1), Some(fd1_half), Some(fd2), Some(fd2_half)) = (fd1, fd1_half, fd2, fd2_half) else {
            return Err(TestCaseError::reject("stencil leaves the domain"));
        };
        // the difference oracle is only trusted where it is self-consistent
        prop_assume!((fd1 - fd1_half).abs() <= 1e-8 * (1.0 + fd1.abs()));
        prop_assume!((fd2 - fd2_half).abs() <= 1e-8 * (1.0 + fd2.abs()));
        prop_assert!((s1 - fd1).abs() <= 1e-6 * (1.0 + s1.abs()), "{e} at {x}: {s1} vs {fd1}");
        prop_assert!((s2 - fd2).abs() <= 1e-6 * (1.0 + s2.abs()), "{e} at {x}: {s2} vs {fd2}");
    }

    #[test]
    fn evaluation_is_finite_or_typed_error(e in tree(), x in -3.0f64..3.0) {
        for tree in [&e, &e.differentiate()] {
            if let Ok(v) = tree.eval(x) {
                prop_assert!(v.is_finite());
            }
        }
    }
}

#[test]
fn grammar_examples_parse() {
    assert_eq!(parse_expr("x").unwrap(), Expr::x());
    assert_eq!(parse_expr("x^2").unwrap(), Expr::pow(Expr::x(), Expr::constant(2.0)));
    let e = parse_expr("log(x) + 3*x^0.5").unwrap();
    assert_eq!(
        e,
        Expr::add(
            Expr::log(Expr::x()),
            Expr::mul(Expr::constant(3.0), Expr::pow(Expr::x(), Expr::constant(0.5)))
        )
    );
    assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
}

#[test]
fn evaluation_examples() {
    assert_eq!(parse_expr("x^2").unwrap().eval(3.0).unwrap(), 9.0);
    assert_eq!(parse_expr("log(x)").unwrap().eval(1.0).unwrap(), 0.0);
    assert_eq!(parse_expr("x + x^3").unwrap().eval(2.0).unwrap(), 10.0);
    let d = |s: &str, x: f64| parse_expr(s).unwrap().differentiate().eval(x).unwrap();
    assert_eq!(d("x^2", 3.0), 6.0);
    assert_eq!(d("log(x)", 2.0), 0.5);
    let dd = parse_expr("x + exp(x)").unwrap().differentiate().differentiate();
    assert_eq!(dd.eval(0.0).unwrap(), 1.0);
}

#[test]
fn domain_errors_are_typed() {
    let e = |s: &str, x: f64| parse_expr(s).unwrap().eval(x);
    assert!(matches!(e("log(x)", 0.0), Err(EvalError::LogDomain(_))));
    assert!(matches!(e("log(x)", -1.0), Err(EvalError::LogDomain(_))));
    assert!(matches!(e("x^-1", 0.0), Err(EvalError::PowDomain { .. })));
    assert!(matches!(e("x^0.5", -4.0), Err(EvalError::PowDomain { .. })));
    assert!(matches!(e("1/x", 0.0), Err(EvalError::DivisionByZero)));
    assert!(matches!(e("exp(x)", 1000.0), Err(EvalError::Overflow { .. })));
    assert_eq!(e("x^3", -2.0).unwrap(), -8.0);
}

#[test]
fn parse_errors_report_position() {
    let err = parse_expr("x + sin(x)").unwrap_err();
    assert_eq!(err.position, 4);
    assert!(matches!(err.kind, ParseErrorKind::UnknownIdentifier(_)));
    let err = parse_expr("(x").unwrap_err();
    assert_eq!(err.position, 2);
    match err.kind {
        ParseErrorKind::Unexpected { expected, .. } => assert!(expected.contains(&"`)`")),
        other => panic!("unexpected {other:?}"),
    }
}
