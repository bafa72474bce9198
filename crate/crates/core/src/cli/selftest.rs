//! Built-in invariant suites for `meancmp selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::compare::{
    check_ratio_monotone, check_shared_weights, check_two_point, classify_power, leading_minors,
    CheckConfig, Outcome, PowerParams,
};
use crate::expr::parse_expr;
use crate::interval::Interval;
use crate::kernel::{GeneratorSpec, MeanSpec, WeightFamily};

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Generators used by the built-in battery; all strictly monotone on the
/// battery domain.
pub const BATTERY_GENERATORS: &[&str] = &[
    "x", "x^2", "x^3", "log(x)", "x^-1", "x^0.5", "exp(x)", "exp(-x)", "-x^-2", "x + log(x)",
];

/// Weight families used by the built-in battery (n = 2).
pub const BATTERY_WEIGHTS: &[[&str; 2]] = &[["1", "1"], ["1", "x"], ["x", "x^2"], ["2", "1 + x"]];

/// Domain of the built-in battery.
pub fn battery_domain() -> Interval {
    Interval::new(0.1, 10.0).expect("valid interval")
}

/// Every ordered pair of battery generators with every battery weight family
/// on both sides.
pub fn battery_pairs() -> Vec<(MeanSpec, MeanSpec)> {
    let d = battery_domain();
    let gens: Vec<GeneratorSpec> = BATTERY_GENERATORS
        .iter()
        .map(|s| GeneratorSpec::new(parse_expr(s).expect("battery expression"), d).expect("battery generator"))
        .collect();
    let weights: Vec<WeightFamily> = BATTERY_WEIGHTS
        .iter()
        .map(|ws| {
            WeightFamily::new(ws.iter().map(|w| parse_expr(w).expect("battery weight")).collect(), d)
                .expect("battery weights")
        })
        .collect();
    let mut pairs = Vec::new();
    for f in &gens {
        for g in &gens {
            for p in &weights {
                for q in &weights {
                    pairs.push((
                        MeanSpec::new(f.clone(), p.clone()).expect("compatible"),
                        MeanSpec::new(g.clone(), q.clone()).expect("compatible"),
                    ));
                }
            }
        }
    }
    pairs
}

fn quick_config() -> CheckConfig {
    CheckConfig {
        samples: 512,
        grid: 48,
        ..Default::default()
    }
}

fn derivative_suite() -> SuiteResult {
    let mut failures = Vec::new();
    let exprs = [
        "x^2", "log(x)", "x + exp(x)", "exp(x^0.5) / (1 + x)", "x^x", "log(1 + x^2) * x^-1", "2^x - x^3",
    ];
    let points = [0.3, 0.9, 1.7, 2.5];
    let mut checked = 0;
    for src in exprs {
        let e = parse_expr(src).expect("suite expression");
        let d1 = e.differentiate();
        let d2 = d1.differentiate();
        for &x in &points {
            let h = 1e-5;
            let fd1 = (e.eval(x + h).unwrap() - e.eval(x - h).unwrap()) / (2.0 * h);
            let fd2 = (d1.eval(x + h).unwrap() - d1.eval(x - h).unwrap()) / (2.0 * h);
            for (order, sym, fd) in [(1, d1.eval(x).unwrap(), fd1), (2, d2.eval(x).unwrap(), fd2)] {
                checked += 1;
                if (sym - fd).abs() > 1e-6 * (1.0 + sym.abs()) {
                    failures.push(format!("{src}: derivative {order} at {x}: {sym} vs {fd}"));
                }
            }
        }
    }
    SuiteResult {
        name: "symbolic derivatives vs finite differences",
        checked,
        failures,
    }
}

fn diagonal_suite() -> SuiteResult {
    let mut failures = Vec::new();
    let d = battery_domain();
    let specs = [
        ("x^2", vec!["1", "1", "1"]),
        ("exp(x) + x", vec!["x", "1 + x^2", "2"]),
        ("log(x)", vec!["1", "x"]),
        ("x^-1", vec!["x^0.5", "1", "x", "3"]),
    ];
    let mut checked = 0;
    for (f, ws) in specs {
        let m = MeanSpec::new(
            GeneratorSpec::new(parse_expr(f).unwrap(), d).unwrap(),
            WeightFamily::new(ws.iter().map(|w| parse_expr(w).unwrap()).collect(), d).unwrap(),
        )
        .unwrap();
        let n = m.n();
        for x in [0.7, 1.9, 4.2] {
            let first = m.diag_first_partials(x).unwrap();
            let hess = m.diag_second_partials(x).unwrap();
            let h1 = 1e-5;
            let h2 = 1e-3;
            for i in 0..n {
                let shift = |v: &mut Vec<f64>, k: usize, s: f64| v[k] += s;
                let mut plus = vec![x; n];
                let mut minus = vec![x; n];
                shift(&mut plus, i, h1);
                shift(&mut minus, i, -h1);
                let fd = (m.eval(&plus).unwrap() - m.eval(&minus).unwrap()) / (2.0 * h1);
                checked += 1;
                if (fd - first[i]).abs() > 1e-5 {
                    failures.push(format!("{f}: first partial {i} at {x}: {} vs {fd}", first[i]));
                }
                for j in 0..n {
                    let at = |si: f64, sj: f64| {
                        let mut v = vec![x; n];
                        v[i] += si;
                        v[j] += sj;
                        m.eval(&v).unwrap()
                    };
                    let fd = (at(h2, h2) - at(h2, -h2) - at(-h2, h2) + at(-h2, -h2)) / (4.0 * h2 * h2);
                    checked += 1;
                    if (fd - hess[(i, j)]).abs() > 1e-4 {
                        failures.push(format!("{f}: second partial ({i},{j}) at {x}: {} vs {fd}", hess[(i, j)]));
                    }
                }
            }
        }
    }
    SuiteResult {
        name: "diagonal partial derivatives vs finite differences",
        checked,
        failures,
    }
}

fn minor_suite() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d696e6f72);
    let mut failures = Vec::new();
    let draws = 200;
    for _ in 0..draws {
        let n = rng.random_range(2..=6);
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..5.0)).collect();
        let chi = rng.random_range(-3.0..3.0);
        if let Err(e) = leading_minors(&weights, chi, n - 1) {
            failures.push(format!("weights {weights:?}, chi {chi}: {e}"));
        }
    }
    SuiteResult {
        name: "leading-minor closed form vs direct determinant",
        checked: draws,
        failures,
    }
}

fn two_point_suite() -> SuiteResult {
    let cfg = quick_config();
    let mut failures = Vec::new();
    let pairs = battery_pairs();
    // every 7th pair keeps the run short while covering all generators
    let mut checked = 0;
    for (m1, m2) in pairs.iter().step_by(7) {
        checked += 1;
        let tp = check_two_point(m1, m2, &cfg);
        let rm = check_ratio_monotone(m1, m2, &cfg);
        match (tp, rm) {
            (Ok(tp), Ok(rm)) if tp.is_holds() && !rm.is_holds() => failures.push(format!(
                "{} / {}: two-point holds but ratio not increasing",
                m1.generator().expr(),
                m2.generator().expr()
            )),
            (Err(e), _) | (_, Err(e)) => failures.push(e.to_string()),
            _ => {}
        }
    }
    SuiteResult {
        name: "two-point condition implies increasing ratio",
        checked,
        failures,
    }
}

fn shared_weights_suite() -> SuiteResult {
    let cfg = quick_config();
    let d = battery_domain();
    let p = WeightFamily::new(vec![parse_expr("1").unwrap(), parse_expr("x").unwrap()], d).unwrap();
    let mut failures = Vec::new();
    let mut checked = 0;
    for f in BATTERY_GENERATORS {
        for g in BATTERY_GENERATORS {
            checked += 1;
            let fs = GeneratorSpec::new(parse_expr(f).unwrap(), d).unwrap();
            let gs = GeneratorSpec::new(parse_expr(g).unwrap(), d).unwrap();
            if let Err(e) = check_shared_weights(&fs, &gs, &p, &cfg) {
                failures.push(format!("{f} / {g}: {e}"));
            }
        }
    }
    SuiteResult {
        name: "shared-weights conditions agree",
        checked,
        failures,
    }
}

fn power_suite() -> SuiteResult {
    let cases = [
        (0.0, 1.0, 0.0, Outcome::Implied, Outcome::Implied),
        (2.0, 1.0, 0.0, Outcome::Refuted, Outcome::Refuted),
        (1.0, 1.0, 0.0, Outcome::Implied, Outcome::Implied),
        (2.0, 0.0, 1.0, Outcome::Unknown, Outcome::Unknown),
        (1.0, -1.0, 1.0, Outcome::Implied, Outcome::Implied),
    ];
    let mut failures = Vec::new();
    for (a, b, delta, local, global) in cases {
        match classify_power(&PowerParams::with_shift(a, b, delta, 2)) {
            Ok(r) if r.locally_smaller.outcome == local && r.globally_smaller.outcome == global => {}
            Ok(r) => failures.push(format!(
                "a={a}, b={b}, delta={delta}: local {}, global {}",
                r.locally_smaller, r.globally_smaller
            )),
            Err(e) => failures.push(e),
        }
    }
    SuiteResult {
        name: "power-family classifier",
        checked: cases.len(),
        failures,
    }
}

/// Runs all suites in a fixed order.
pub fn run_selftest() -> Vec<SuiteResult> {
    vec![
        derivative_suite(),
        diagonal_suite(),
        minor_suite(),
        two_point_suite(),
        shared_weights_suite(),
        power_suite(),
    ]
}
