//! Open intervals and finite working windows used for sampling.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum IntervalError {
    #[error("interval endpoints must satisfy lower < upper, got ({0}, {1})")]
    Empty(f64, f64),
    #[error("interval endpoint is NaN")]
    NaN,
    #[error("window [{lo}, {hi}] is not inside the interval ({lower}, {upper})")]
    WindowOutside {
        lo: f64,
        hi: f64,
        lower: f64,
        upper: f64,
    },
}

/// A nonempty open interval `(lower, upper)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self, IntervalError> {
        if lower.is_nan() || upper.is_nan() {
            return Err(IntervalError::NaN);
        }
        if !(lower < upper) || lower == f64::INFINITY || upper == f64::NEG_INFINITY {
            return Err(IntervalError::Empty(lower, upper));
        }
        Ok(Interval { lower, upper })
    }

    /// The positive half-line `(0, inf)`.
    pub fn positive() -> Self {
        Interval {
            lower: 0.0,
            upper: f64::INFINITY,
        }
    }

    pub fn real_line() -> Self {
        Interval {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }

    /// True when the interval lies in the positive half-line.
    pub fn is_positive(&self) -> bool {
        self.lower >= 0.0
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

/// How unbounded or open ends are truncated to a finite sampling range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WindowConfig {
    /// Upper truncation for intervals unbounded above with a nonnegative
    /// lower end.
    pub positive_upper: f64,
    /// Half-width used for ends at infinity otherwise.
    pub span: f64,
    /// Relative inset from finite endpoints (`max(1, |end|) * margin`).
    pub margin: f64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig {
            positive_upper: 1e6,
            span: 1e6,
            margin: 1e-6,
        }
    }
}

/// Closed, finite sampling range `[lo, hi]` inside an interval.
///
/// Windows with `lo > 0` are sampled log-uniformly, others uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lo: f64,
    hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(IntervalError::NaN);
        }
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::Empty(lo, hi));
        }
        Ok(Window { lo, hi })
    }

    /// Window inside `interval`, checked for containment.
    pub fn inside(interval: &Interval, lo: f64, hi: f64) -> Result<Self, IntervalError> {
        let w = Window::new(lo, hi)?;
        if !interval.contains(lo) || !interval.contains(hi) {
            return Err(IntervalError::WindowOutside {
                lo,
                hi,
                lower: interval.lower,
                upper: interval.upper,
            });
        }
        Ok(w)
    }

    /// Default truncation of `interval`; `(0, inf)` maps to `[1e-6, 1e6]`.
    pub fn for_interval(interval: &Interval, cfg: &WindowConfig) -> Self {
        let inset = |end: f64| cfg.margin * end.abs().max(1.0);
        let lo = if interval.lower.is_finite() {
            interval.lower + inset(interval.lower)
        } else {
            -cfg.span
        };
        let hi = if interval.upper.is_finite() {
            interval.upper - inset(interval.upper)
        } else if interval.lower >= 0.0 {
            cfg.positive_upper.max(lo * cfg.positive_upper)
        } else {
            cfg.span.max(lo + cfg.span)
        };
        let lo = if interval.lower.is_finite() || hi > -cfg.span {
            lo
        } else {
            hi - cfg.span
        };
        if lo < hi {
            Window { lo, hi }
        } else {
            // interval narrower than the insets: fall back to its midpoint range
            let mid = 0.5 * (interval.lower + interval.upper);
            let half = 0.25 * (interval.upper - interval.lower);
            Window {
                lo: mid - half,
                hi: mid + half,
            }
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn log_scale(&self) -> bool {
        self.lo > 0.0
    }

    /// Maps a point to search coordinates (log when log-scaled).
    pub fn to_coord(&self, x: f64) -> f64 {
        if self.log_scale() {
            x.ln()
        } else {
            x
        }
    }

    pub fn from_coord(&self, u: f64) -> f64 {
        let x = if self.log_scale() { u.exp() } else { u };
        x.clamp(self.lo, self.hi)
    }

    pub fn coord_bounds(&self) -> (f64, f64) {
        (self.to_coord(self.lo), self.to_coord(self.hi))
    }

    /// Width in search coordinates.
    pub fn coord_width(&self) -> f64 {
        let (a, b) = self.coord_bounds();
        b - a
    }

    /// `count` points from `lo` to `hi` inclusive, evenly spaced in search
    /// coordinates. `count` is clamped to at least 2.
    pub fn sample(&self, count: usize) -> Vec<f64> {
        let count = count.max(2);
        let (a, b) = self.coord_bounds();
        let last = (count - 1) as f64;
        let mut pts: Vec<f64> = (0..count)
            .map(|k| self.from_coord(a + (b - a) * (k as f64) / last))
            .collect();
        pts[0] = self.lo;
        pts[count - 1] = self.hi;
        pts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(f64::INFINITY, f64::INFINITY).is_err());
    }

    #[test]
    fn open_membership() {
        let i = Interval::new(0.0, 2.0).unwrap();
        assert!(!i.contains(0.0));
        assert!(!i.contains(2.0));
        assert!(i.contains(1e-300));
        assert!(Interval::positive().contains(1e300));
    }

    #[test]
    fn default_window_for_positive_half_line() {
        let w = Window::for_interval(&Interval::positive(), &WindowConfig::default());
        assert!((w.lo() - 1e-6).abs() < 1e-20);
        assert_eq!(w.hi(), 1e6);
        assert!(w.log_scale());
    }

    #[test]
    fn windows_stay_inside() {
        let cfg = WindowConfig::default();
        for (a, b) in [
            (0.0, 2.0),
            (-1.0, 1.0),
            (f64::NEG_INFINITY, 0.0),
            (f64::NEG_INFINITY, f64::INFINITY),
            (5.0, f64::INFINITY),
            (-5.0, f64::INFINITY),
            (1.0, 1.0 + 1e-9),
        ] {
            let i = Interval::new(a, b).unwrap();
            let w = Window::for_interval(&i, &cfg);
            assert!(i.contains(w.lo()) && i.contains(w.hi()), "{i}: {w:?}");
            assert!(w.lo() < w.hi());
        }
    }

    #[test]
    fn log_sampling_hits_endpoints() {
        let w = Window::new(0.5, 4.0).unwrap();
        let s = w.sample(4);
        assert_eq!(s[0], 0.5);
        assert_eq!(s[3], 4.0);
        assert!((s[1] - 1.0).abs() < 1e-12);
        assert!((s[2] - 2.0).abs() < 1e-12);
        let w = Window::new(-1.0, 1.0).unwrap();
        assert_eq!(w.sample(3), vec![-1.0, 0.0, 1.0]);
    }
}
