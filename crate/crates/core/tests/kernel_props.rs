use meancmp::kernel::KernelError;
use meancmp::{invert_generator, parse_expr, GeneratorSpec, Interval, MeanSpec, WeightFamily};
use proptest::prelude::*;

const GENERATORS: &[&str] = &[
    "x", "x^2", "x^3", "log(x)", "x^-1", "x^0.5", "exp(x)", "exp(-x)", "-x^-2", "x + log(x)",
    "x^2 + x",
];
const WEIGHTS: &[&str] = &["1", "2", "x", "x^2", "1 + x", "x^0.5", "exp(-x/5)", "1/(1 + x)"];

fn domain() -> Interval {
    Interval::new(0.1, 10.0).unwrap()
}

fn spec(f: usize, ws: &[usize]) -> MeanSpec {
    let g = GeneratorSpec::new(parse_expr(GENERATORS[f]).unwrap(), domain()).unwrap();
    let p = ws.iter().map(|&w| parse_expr(WEIGHTS[w]).unwrap()).collect();
    MeanSpec::new(g, WeightFamily::new(p, domain()).unwrap()).unwrap()
}

fn mean_and_point() -> impl Strategy<Value = (MeanSpec, Vec<f64>)> {
    (2usize..=5)
        .prop_flat_map(|n| {
            (
                0..GENERATORS.len(),
                prop::collection::vec(0..WEIGHTS.len(), n),
                prop::collection::vec(0.1f64..10.0, n),
            )
        })
        .prop_map(|(f, ws, xs)| (spec(f, &ws), xs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn mean_is_strict((m, xs) in mean_and_point()) {
        let v = m.eval(&xs).unwrap();
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo < hi {
            prop_assert!(lo < v && v < hi, "{v} not in ({lo}, {hi})");
        } else {
            prop_assert!((v - lo).abs() <= 1e-12 * lo);
        }
    }

    #[test]
    fn mean_is_reflexive((m, xs) in mean_and_point()) {
        let x = xs[0];
        let v = m.eval(&vec![x; m.n()]).unwrap();
        prop_assert!((v - x).abs() <= 1e-12 * x, "{v} vs {x}");
    }

    #[test]
    fn constant_weight_means_are_monotone(f in 0..GENERATORS.len(), ws in prop::collection::vec(0usize..2, 2..=5), xs in prop::collection::vec(0.1f64..9.0, 5), k in 0usize..5, bump in 0.01f64..1.0) {
        // only holds for constant weights; variable weights can break it
        let m = spec(f, &ws);
        let xs = &xs[..m.n()];
        let k = k % m.n();
        let mut ys = xs.to_vec();
        ys[k] += bump;
        prop_assert!(m.eval(&ys).unwrap() > m.eval(xs).unwrap());
    }

    #[test]
    fn diagonal_derivatives_are_consistent((m, xs) in mean_and_point()) {
        let x = xs[0].clamp(0.2, 9.0);
        let first = m.diag_first_partials(x).unwrap();
        let total: f64 = first.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(first.iter().all(|&d| d > 0.0));
        let h = m.diag_second_partials(x).unwrap();
        // A(x + t, ..., x + t) = x + t, so row i sums to d/dx (p_i/p_0)
        let step = 1e-5;
        let up = m.diag_first_partials(x + step).unwrap();
        let down = m.diag_first_partials(x - step).unwrap();
        let mut all = 0.0;
        let mut scale = 1.0f64;
        for i in 0..m.n() {
            let row: f64 = h.row(i).iter().sum();
            let slope = (up[i] - down[i]) / (2.0 * step);
            prop_assert!((row - slope).abs() <= 1e-6 * (1.0 + slope.abs()), "row {i}: {row} vs {slope}");
            all += row;
            for j in 0..m.n() {
                scale = scale.max(h[(i, j)].abs());
                prop_assert!((h[(i, j)] - h[(j, i)]).abs() <= 1e-12 * (1.0 + h[(i, j)].abs()));
            }
        }
        prop_assert!(all.abs() <= 1e-10 * scale * m.n() as f64);
    }

    #[test]
    fn inversion_round_trips(f in 0..GENERATORS.len(), x in 0.1f64..10.0) {
        let g = GeneratorSpec::new(parse_expr(GENERATORS[f]).unwrap(), domain()).unwrap();
        let back = invert_generator(&g, g.value(x).unwrap()).unwrap();
        prop_assert!((back - x).abs() <= 1e-10 * x, "{} at {x}: {back}", GENERATORS[f]);
    }

    #[test]
    fn power_means_are_homogeneous(a in -3.0f64..3.0, x in 0.1f64..10.0, y in 0.1f64..10.0, t in 0.1f64..10.0) {
        let d = Interval::positive();
        let m = MeanSpec::new(GeneratorSpec::power(a, d).unwrap(), WeightFamily::unit(2, d).unwrap()).unwrap();
        let lhs = m.eval(&[t * x, t * y]).unwrap();
        let rhs = t * m.eval(&[x, y]).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
    }

    #[test]
    fn unit_weights_are_symmetric(f in 0..GENERATORS.len(), x in 0.1f64..10.0, y in 0.1f64..10.0, z in 0.1f64..10.0) {
        let m = spec(f, &[0, 0, 0]);
        let a = m.eval(&[x, y, z]).unwrap();
        let b = m.eval(&[z, x, y]).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}

#[test]
fn classical_means() {
    let d = Interval::positive();
    let unit = WeightFamily::unit(2, d).unwrap();
    let mean = |a: f64, xs: &[f64]| {
        MeanSpec::new(GeneratorSpec::power(a, d).unwrap(), unit.clone())
            .unwrap()
            .eval(xs)
            .unwrap()
    };
    assert!((mean(1.0, &[1.0, 3.0]) - 2.0).abs() < 1e-14);
    assert!((mean(0.0, &[1.0, 4.0]) - 2.0).abs() < 1e-14);
    assert!((mean(-1.0, &[1.0, 3.0]) - 1.5).abs() < 1e-14);
    assert!((mean(2.0, &[1.0, 2.0]) - 2.5f64.sqrt()).abs() < 1e-14);
}

#[test]
fn weighted_cubic_mean() {
    // f = x + x^3, p = (1, x); p_0 = 1 + 2 at (1, 2), so the mean solves y + y^3 = (2 + 2*10)/3
    let d = Interval::new(0.0, 100.0).unwrap();
    let m = MeanSpec::new(
        GeneratorSpec::new(parse_expr("x + x^3").unwrap(), d).unwrap(),
        WeightFamily::new(vec![parse_expr("1").unwrap(), parse_expr("x").unwrap()], d).unwrap(),
    )
    .unwrap();
    let v = m.eval(&[1.0, 2.0]).unwrap();
    assert!((v + v.powi(3) - 22.0 / 3.0).abs() < 1e-12);
    assert!((v - 1.7717390893420368).abs() < 1e-12);
}

#[test]
fn invalid_specs_are_rejected() {
    let d = domain();
    let err = GeneratorSpec::new(parse_expr("(x - 3)^2").unwrap(), d).unwrap_err();
    assert!(matches!(err, KernelError::NotStrictlyMonotone { .. }));
    let err = WeightFamily::new(vec![parse_expr("1").unwrap(), parse_expr("x - 5").unwrap()], d).unwrap_err();
    assert!(matches!(err, KernelError::NonPositiveWeight { index: 1, .. }));
    let m = spec(0, &[0, 0]);
    assert!(matches!(m.eval(&[1.0]), Err(KernelError::WrongArity { expected: 2, got: 1 })));
    assert!(matches!(m.eval(&[1.0, 20.0]), Err(KernelError::OutOfDomain { .. })));
}
