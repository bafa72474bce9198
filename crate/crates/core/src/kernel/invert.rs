use super::{GeneratorSpec, KernelError};

const MAX_EXPANSIONS: usize = 2200;
const MAX_REFINEMENTS: usize = 200;

/// Finds `x` in the generator's domain with `f(x) = y`.
///
/// A bracket is located by expanding geometrically from a starting point
/// toward the side where `y` lies: doubling steps toward an infinite end,
/// halving the remaining distance toward a finite one. The root is then
/// refined by [`solve_in_bracket`].
pub fn invert_generator(g: &GeneratorSpec, y: f64) -> Result<f64, KernelError> {
    let domain = g.domain();
    let start = starting_point(domain.lower(), domain.upper());
    let f_start = g.value(start)?;
    if f_start == y {
        return Ok(start);
    }
    let sign = g.direction().sign();
    // move right when f must grow along the direction of increase
    let go_right = (y > f_start) == (sign > 0.0);

    let (mut near, mut f_near) = (start, f_start);
    let mut step = start.abs().max(1.0);
    for _ in 0..MAX_EXPANSIONS {
        let candidate = if go_right {
            if domain.upper().is_finite() {
                near + 0.5 * (domain.upper() - near)
            } else {
                near + step
            }
        } else if domain.lower().is_finite() {
            near - 0.5 * (near - domain.lower())
        } else {
            near - step
        };
        step *= 2.0;
        let exhausted = candidate == near || !candidate.is_finite() || !domain.contains(candidate);
        if exhausted {
            break;
        }
        let f_candidate = match g.value(candidate) {
            Ok(v) => v,
            Err(KernelError::Eval { source, .. }) => {
                let (lo, hi) = ordered(start, near);
                return Err(KernelError::BracketNotFound {
                    y,
                    lo,
                    hi,
                    cause: source,
                });
            }
            Err(e) => return Err(e),
        };
        // h(x) = sign * (f(x) - y) is increasing; it is negative at `near`
        // when moving right and positive when moving left
        let h = sign * (f_candidate - y);
        let crossed = if go_right { h >= 0.0 } else { h <= 0.0 };
        if crossed {
            let (lo, hi, f_lo, f_hi) = if go_right {
                (near, candidate, f_near, f_candidate)
            } else {
                (candidate, near, f_candidate, f_near)
            };
            return solve_in_bracket(g, y, lo, hi, f_lo, f_hi);
        }
        near = candidate;
        f_near = f_candidate;
    }
    let (lo, hi) = ordered(start, near);
    let (f_lo, f_hi) = (g.value(lo)?, g.value(hi)?);
    Err(KernelError::OutsideImage {
        y,
        lo,
        hi,
        f_lo,
        f_hi,
    })
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn starting_point(lower: f64, upper: f64) -> f64 {
    let inside = |x: f64| lower < x && x < upper;
    if inside(1.0) {
        1.0
    } else if inside(0.0) {
        0.0
    } else if lower.is_finite() && upper.is_finite() {
        lower + 0.5 * (upper - lower)
    } else if lower.is_finite() {
        lower + lower.abs().max(1.0)
    } else {
        upper - upper.abs().max(1.0)
    }
}

/// Solves `f(x) = y` on `[lo, hi]` where `f(lo)` and `f(hi)` bracket `y`.
///
/// Safeguarded Newton iteration: a Newton step from the current iterate is
/// taken when it stays inside the bracket and at least halves the previous
/// step, otherwise the bracket is bisected. Iteration continues until the
/// bracket collapses to adjacent floats or the Newton correction drops to
/// rounding level, and returns the best iterate seen. If `y` falls outside
/// `[f(lo), f(hi)]` by rounding, the nearer endpoint is returned.
pub(crate) fn solve_in_bracket(
    g: &GeneratorSpec,
    y: f64,
    mut lo: f64,
    mut hi: f64,
    f_lo: f64,
    f_hi: f64,
) -> Result<f64, KernelError> {
    let sign = g.direction().sign();
    let h_lo = sign * (f_lo - y);
    let h_hi = sign * (f_hi - y);
    if h_lo >= 0.0 {
        return Ok(lo);
    }
    if h_hi <= 0.0 {
        return Ok(hi);
    }

    let mut x = if f_hi != f_lo {
        (lo + (y - f_lo) / (f_hi - f_lo) * (hi - lo)).clamp(lo, hi)
    } else {
        0.5 * (lo + hi)
    };
    if !(x > lo && x < hi) {
        x = 0.5 * (lo + hi);
    }
    let mut best = (f64::INFINITY, x);
    let mut last_step = hi - lo;
    for _ in 0..MAX_REFINEMENTS {
        let r = g.value(x)? - y;
        if r.abs() < best.0 {
            best = (r.abs(), x);
        }
        if r == 0.0 {
            return Ok(x);
        }
        if sign * r < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let d = g.derivative(x)?;
        let newton = x - r / d;
        let step = (newton - x).abs();
        let next = if d != 0.0 && newton > lo && newton < hi && step <= 0.5 * last_step {
            if step <= 2.0 * f64::EPSILON * x.abs() {
                // converged at rounding level; one more look at the neighbor
                let r2 = g.value(newton)? - y;
                if r2.abs() < best.0 {
                    best = (r2.abs(), newton);
                }
                break;
            }
            last_step = step;
            newton
        } else {
            last_step = hi - lo;
            mid
        };
        x = next;
    }
    Ok(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::interval::Interval;

    fn gen(s: &str, lo: f64, hi: f64) -> GeneratorSpec {
        GeneratorSpec::new(parse_expr(s).unwrap(), Interval::new(lo, hi).unwrap()).unwrap()
    }

    /// plain bisection, kept separate from the hybrid solver
    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn square_root() {
        let f = gen("x^2", 0.0, f64::INFINITY);
        assert!((invert_generator(&f, 4.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn log_inverse() {
        let f = gen("log(x)", 0.0, f64::INFINITY);
        assert!((invert_generator(&f, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((invert_generator(&f, -20.0).unwrap() - (-20.0f64).exp()).abs() < 1e-20);
        assert!((invert_generator(&f, 30.0).unwrap() / 30f64.exp() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cubic_on_bounded_interval() {
        let f = gen("x + x^3", 0.0, 2.0);
        let x = invert_generator(&f, 2.5).unwrap();
        let oracle = bisect(|t| t + t * t * t - 2.5, 0.0, 2.0);
        assert!((x - oracle).abs() < 1e-12);
        assert!((x - 1.1147471097).abs() < 1e-9);
        assert!((x + x.powi(3) - 2.5).abs() <= 1e-12 * 3.5);
    }

    #[test]
    fn decreasing_generator() {
        let f = gen("x^-1", 0.0, f64::INFINITY);
        let x = invert_generator(&f, 0.125).unwrap();
        assert!((x - 8.0).abs() < 1e-13);
        let f = gen("-exp(x)", -50.0, 50.0);
        let x = invert_generator(&f, -5.0).unwrap();
        assert!((x - 5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn outside_image() {
        let f = gen("x + x^3", 0.0, 2.0);
        let err = invert_generator(&f, 11.0).unwrap_err();
        match err {
            KernelError::OutsideImage { lo, hi, .. } => {
                assert!(lo >= 0.0 && hi < 2.0 && hi > 1.99);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(invert_generator(&f, -1.0).is_err());
        let f = gen("exp(x)", -50.0, 50.0);
        assert!(invert_generator(&f, -1.0).is_err());
    }

    #[test]
    fn residual_tolerance_over_range() {
        let f = gen("x^3 + exp(x)", 0.0, 10.0);
        for k in 1..50 {
            let y = 1.0 + k as f64 * 450.0;
            let x = invert_generator(&f, y).unwrap();
            let r = f.value(x).unwrap() - y;
            assert!(r.abs() <= 1e-12 * (1.0 + y.abs()), "y={y} r={r}");
        }
    }
}
