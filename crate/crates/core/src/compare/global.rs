//! Global sufficient conditions and the shared-weights / shared-generator
//! equivalences.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::local::{check_first_order, discriminant_terms, weight_ratio_log_derivative};
use super::{ensure_compatible, CheckConfig, CompareError, Status, Verdict, Witness};
use crate::interval::{Interval, Window};
use crate::kernel::{invert_generator, GeneratorSpec, KernelError, MeanSpec, WeightFamily};
use crate::search::simplex::{nelder_mead, SimplexOptions};

/// One side of a two-point inequality: `w(x)(v(x) - v(y)) / (w(y) v'(y))`.
#[derive(Clone, Copy)]
enum Side<'a> {
    Weighted(&'a WeightFamily, &'a GeneratorSpec),
    Plain(&'a GeneratorSpec),
    Power(f64, &'a GeneratorSpec),
}

impl Side<'_> {
    fn weight(&self, x: f64) -> Result<f64, KernelError> {
        match *self {
            Side::Weighted(w, _) => w.total(x),
            Side::Plain(_) => Ok(1.0),
            Side::Power(delta, _) => Ok(x.powf(delta)),
        }
    }

    fn generator(&self) -> &GeneratorSpec {
        match *self {
            Side::Weighted(_, g) | Side::Plain(g) | Side::Power(_, g) => g,
        }
    }

    fn term(&self, x: f64, y: f64) -> Result<f64, KernelError> {
        let v = self.generator();
        let ratio = self.weight(x)? / self.weight(y)?;
        Ok(ratio * (v.value(x)? - v.value(y)?) / v.derivative(y)?)
    }
}

/// `RHS - LHS` scaled by `1 + |LHS| + |RHS|`, so the slack is relative.
fn margin(left: Side, right: Side, x: f64, y: f64) -> Result<(f64, f64), KernelError> {
    let l = left.term(x, y)?;
    let r = right.term(x, y)?;
    let d = r - l;
    Ok((d / (1.0 + l.abs() + r.abs()), d))
}

struct Probe {
    margin: f64,
    diff: f64,
    x: f64,
    y: f64,
}

/// Checks `left(x, y) <= right(x, y)` over pairs in the window.
///
/// Pairs come from a `grid × grid` lattice, from neighbouring points of the
/// fine one-variable sample (where the difference is of order `(x-y)²`), and
/// from Nelder–Mead descents on the margin started at the worst pairs.
fn two_point_grid(left: Side, right: Side, window: &Window, cfg: &CheckConfig) -> Result<Verdict, CompareError> {
    let coarse = window.sample(cfg.grid);
    let fine = window.sample(cfg.samples);

    let rows: Vec<Result<Vec<Probe>, KernelError>> = coarse
        .par_iter()
        .map(|&x| {
            coarse
                .iter()
                .filter(|&&y| y != x)
                .map(|&y| margin(left, right, x, y).map(|(m, d)| Probe { margin: m, diff: d, x, y }))
                .collect()
        })
        .collect();
    let mut probes = Vec::new();
    for row in rows {
        probes.extend(row?);
    }
    for pair in fine.windows(2) {
        for (x, y) in [(pair[0], pair[1]), (pair[1], pair[0])] {
            let (m, d) = margin(left, right, x, y)?;
            probes.push(Probe { margin: m, diff: d, x, y });
        }
    }
    let checked = probes.len();
    probes.sort_by(|a, b| a.margin.total_cmp(&b.margin));

    let (lo, hi) = window.coord_bounds();
    let step = window.coord_width() / cfg.grid.max(2) as f64;
    let opts = SimplexOptions {
        max_iter: cfg.refine_iters,
        ..Default::default()
    };
    let objective = |u: &[f64]| {
        let (x, y) = (window.from_coord(u[0]), window.from_coord(u[1]));
        margin(left, right, x, y).map_or(f64::NAN, |(m, _)| m)
    };
    let refined: Vec<Probe> = probes
        .iter()
        .take(cfg.refine_starts)
        .filter(|p| p.margin < 0.0)
        .collect::<Vec<_>>()
        .par_iter()
        .filter_map(|p| {
            let start = [window.to_coord(p.x), window.to_coord(p.y)];
            let r = nelder_mead(objective, &start, &[step, step], &[(lo, hi), (lo, hi)], &opts);
            let (x, y) = (window.from_coord(r.x[0]), window.from_coord(r.x[1]));
            margin(left, right, x, y)
                .ok()
                .map(|(m, d)| Probe { margin: m, diff: d, x, y })
        })
        .collect();

    let worst = probes
        .iter()
        .chain(&refined)
        .min_by(|a, b| a.margin.total_cmp(&b.margin))
        .expect("at least one pair");
    let witness = Witness::at(vec![worst.x, worst.y], worst.diff);
    let cert = cfg.sampled(checked + refined.len());
    if worst.margin < -cfg.slack {
        Ok(Verdict::fails(witness, cert))
    } else {
        Ok(Verdict::holds(false, Some(witness), cert))
    }
}

/// Two-point condition
/// `p_0(x)(f(x)-f(y)) / (p_0(y)f'(y)) <= q_0(x)(g(x)-g(y)) / (q_0(y)g'(y))`
/// on sampled pairs. Together with first-order equality it is sufficient
/// for global comparability.
pub fn check_two_point(m1: &MeanSpec, m2: &MeanSpec, cfg: &CheckConfig) -> Result<Verdict, CompareError> {
    ensure_compatible(m1, m2)?;
    let window = cfg.window_for(m1.domain())?;
    two_point_grid(
        Side::Weighted(m1.weights(), m1.generator()),
        Side::Weighted(m2.weights(), m2.generator()),
        &window,
        cfg,
    )
}

/// Power-weight two-point condition
/// `(f(x)-f(y))/f'(y) <= x^δ(g(x)-g(y)) / (y^δ g'(y))` on sampled pairs.
pub fn check_power_two_point(
    f: &GeneratorSpec,
    g: &GeneratorSpec,
    delta: f64,
    cfg: &CheckConfig,
) -> Result<Verdict, CompareError> {
    ensure_same_domain(f.domain(), g.domain())?;
    if !f.domain().is_positive() {
        return Err(CompareError::NotPositiveDomain(format!(
            "the power two-point condition needs a positive domain, got {}",
            f.domain()
        )));
    }
    let window = cfg.window_for(f.domain())?;
    two_point_grid(Side::Plain(f), Side::Power(delta, g), &window, cfg)
}

fn ensure_same_domain(a: &Interval, b: &Interval) -> Result<(), CompareError> {
    if a != b {
        return Err(CompareError::Incompatible(format!("domains {a} vs {b}")));
    }
    Ok(())
}

/// Monotonicity of `q_0/p_0` and `|g'|/|f'|`, both tested through the sign
/// of their logarithmic derivatives. The witness index is 0 for the weight
/// ratio and 1 for the derivative ratio.
pub fn check_monotone_ratios(m1: &MeanSpec, m2: &MeanSpec, cfg: &CheckConfig) -> Result<Verdict, CompareError> {
    ensure_compatible(m1, m2)?;
    let window = cfg.window_for(m1.domain())?;
    let points = window.sample(cfg.samples);
    let mut worst: Option<(f64, Witness)> = None;
    let mut strict = true;
    for &x in &points {
        let (w, w_scale) = weight_ratio_log_derivative(m1, m2, x)?;
        let t = discriminant_terms(m1, m2, x)?;
        let gen = t.g_term - t.f_term;
        let gen_scale = 1.0 + t.g_term.abs() + t.f_term.abs();
        for (index, value, scale) in [(0, w, w_scale), (1, gen, gen_scale)] {
            let normalized = value / scale;
            strict &= normalized > cfg.slack;
            if worst.as_ref().is_none_or(|c| normalized < c.0) {
                worst = Some((normalized, Witness::at(vec![x], value).with_index(index)));
            }
        }
    }
    let (normalized, witness) = worst.expect("nonempty sample");
    let cert = cfg.sampled(points.len());
    if normalized < -cfg.slack {
        Ok(Verdict::fails(witness, cert))
    } else {
        Ok(Verdict::holds(strict, Some(witness), cert))
    }
}

/// The four conditions on `f`, `g` that are equivalent to comparability
/// when both means share one weight family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharedWeightsBattery {
    /// `|g'/f'|` increasing, by difference quotients.
    pub ratio_increasing: Verdict,
    /// `f''/f' <= g''/g'` pointwise.
    pub curvature_order: Verdict,
    /// `g∘f⁻¹` convex (concave for decreasing `g`), from
    /// `(g∘f⁻¹)'' = g'/f'² · (g''/g' - f''/f')` at `f⁻¹(u)`.
    pub composite_convexity: Verdict,
    /// `(f(x)-f(y))/f'(y) <= (g(x)-g(y))/g'(y)` on sampled pairs.
    pub two_point: Verdict,
}

impl SharedWeightsBattery {
    pub fn verdicts(&self) -> [&Verdict; 4] {
        [
            &self.ratio_increasing,
            &self.curvature_order,
            &self.composite_convexity,
            &self.two_point,
        ]
    }

    /// Common status of the four conditions, if they agree.
    pub fn unanimous(&self) -> Option<Status> {
        let first = self.ratio_increasing.status;
        self.verdicts()
            .iter()
            .all(|v| v.status == first)
            .then_some(first)
    }
}

/// Evaluates the four shared-weights conditions independently.
///
/// They are equivalent in exact arithmetic, so any disagreement is returned
/// as [`CompareError::Disagreement`].
pub fn check_shared_weights(
    f: &GeneratorSpec,
    g: &GeneratorSpec,
    p: &WeightFamily,
    cfg: &CheckConfig,
) -> Result<SharedWeightsBattery, CompareError> {
    ensure_same_domain(f.domain(), g.domain())?;
    ensure_same_domain(f.domain(), p.domain())?;
    let window = cfg.window_for(f.domain())?;
    let points = window.sample(cfg.samples);
    let cert = cfg.sampled(points.len());

    let ratio = |x: f64| -> Result<f64, KernelError> { Ok((g.derivative(x)? / f.derivative(x)?).abs()) };
    let mut worst: Option<(f64, Witness)> = None;
    let mut strict = true;
    let mut prev = (points[0], ratio(points[0])?);
    for &x in &points[1..] {
        let r = ratio(x)?;
        let normalized = (r - prev.1) / (r.abs() + prev.1.abs());
        strict &= normalized > cfg.slack;
        if worst.as_ref().is_none_or(|c| normalized < c.0) {
            worst = Some((normalized, Witness::at(vec![prev.0, x], r - prev.1)));
        }
        prev = (x, r);
    }
    let ratio_increasing = sign_verdict(worst, strict, cfg.slack, cert);

    let mut worst = None;
    let mut strict = true;
    for &x in &points {
        let (a, b) = (f.curvature_ratio(x)?, g.curvature_ratio(x)?);
        let normalized = (b - a) / (1.0 + a.abs() + b.abs());
        strict &= normalized > cfg.slack;
        if worst.as_ref().is_none_or(|c: &(f64, Witness)| normalized < c.0) {
            worst = Some((normalized, Witness::at(vec![x], b - a)));
        }
    }
    let curvature_order = sign_verdict(worst, strict, cfg.slack, cert);

    let sign = g.direction().sign();
    let mut worst = None;
    let mut strict = true;
    for &x in &points {
        let u = f.value(x)?;
        let xh = invert_generator(f, u)?;
        let (f1, g1) = (f.derivative(xh)?, g.derivative(xh)?);
        let (a, b) = (f.curvature_ratio(xh)?, g.curvature_ratio(xh)?);
        let second = g1 / (f1 * f1) * (b - a);
        let scale = g1.abs() / (f1 * f1) * (1.0 + a.abs() + b.abs());
        let normalized = sign * second / scale;
        strict &= normalized > cfg.slack;
        if worst.as_ref().is_none_or(|c: &(f64, Witness)| normalized < c.0) {
            worst = Some((normalized, Witness::at(vec![u], second)));
        }
    }
    let composite_convexity = sign_verdict(worst, strict, cfg.slack, cert);

    let two_point = two_point_grid(Side::Plain(f), Side::Plain(g), &window, cfg)?;

    let battery = SharedWeightsBattery {
        ratio_increasing,
        curvature_order,
        composite_convexity,
        two_point,
    };
    match battery.unanimous() {
        Some(_) => Ok(battery),
        None => Err(CompareError::Disagreement(Box::new(battery))),
    }
}

fn sign_verdict(
    worst: Option<(f64, Witness)>,
    strict: bool,
    slack: f64,
    cert: super::Certification,
) -> Verdict {
    let (normalized, witness) = worst.expect("nonempty sample");
    if normalized < -slack {
        Verdict::fails(witness, cert)
    } else {
        Verdict::holds(strict, Some(witness), cert)
    }
}

/// Shared generator: holds iff `p_i/p_0 = q_i/q_0` and `q_0/p_0` is
/// increasing on the samples; equivalent to both local and global
/// comparability.
pub fn check_shared_generator(
    f: &GeneratorSpec,
    p: &WeightFamily,
    q: &WeightFamily,
    cfg: &CheckConfig,
) -> Result<Verdict, CompareError> {
    let m1 = MeanSpec::new(f.clone(), p.clone())?;
    let m2 = MeanSpec::new(f.clone(), q.clone())?;
    let first = check_first_order(&m1, &m2, cfg)?;
    if first.is_fails() {
        return Ok(first.with_note("first-order condition fails"));
    }
    let window = cfg.window_for(f.domain())?;
    let points = window.sample(cfg.samples);
    let mut worst = None;
    let mut strict = true;
    for &x in &points {
        let (value, scale) = weight_ratio_log_derivative(&m1, &m2, x)?;
        let normalized = value / scale;
        strict &= normalized > cfg.slack;
        if worst.as_ref().is_none_or(|c: &(f64, Witness)| normalized < c.0) {
            worst = Some((normalized, Witness::at(vec![x], value)));
        }
    }
    let verdict = sign_verdict(worst, strict, cfg.slack, cfg.sampled(points.len()));
    Ok(if verdict.is_fails() {
        verdict.with_note("q_0/p_0 decreases")
    } else {
        verdict
    })
}
