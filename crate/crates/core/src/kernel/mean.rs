use super::invert::solve_in_bracket;
use super::{GeneratorSpec, KernelError, WeightFamily};
use crate::interval::Interval;
use crate::sum::CompensatedSum;

/// The n-variable mean `A_{f,p}(x) = f^{-1}(sum p_i(x_i) f(x_i) / sum p_i(x_i))`.
#[derive(Debug, Clone)]
pub struct MeanSpec {
    generator: GeneratorSpec,
    weights: WeightFamily,
}

impl MeanSpec {
    pub fn new(generator: GeneratorSpec, weights: WeightFamily) -> Result<Self, KernelError> {
        if generator.domain() != weights.domain() {
            return Err(KernelError::DomainMismatch {
                generator: generator.domain().to_string(),
                weights: weights.domain().to_string(),
            });
        }
        if weights.n() < 2 {
            return Err(KernelError::TooFewWeights(weights.n()));
        }
        Ok(MeanSpec { generator, weights })
    }

    pub fn generator(&self) -> &GeneratorSpec {
        &self.generator
    }

    pub fn weights(&self) -> &WeightFamily {
        &self.weights
    }

    pub fn domain(&self) -> &Interval {
        self.generator.domain()
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    /// Evaluates the mean at `xs`.
    ///
    /// The inverse is solved inside `[min xs, max xs]`, which brackets the
    /// weighted average of the generator values, so the result always lies
    /// between the smallest and largest argument.
    pub fn eval(&self, xs: &[f64]) -> Result<f64, KernelError> {
        if xs.len() != self.n() {
            return Err(KernelError::WrongArity {
                expected: self.n(),
                got: xs.len(),
            });
        }
        let domain = self.domain();
        if let Some(&x) = xs.iter().find(|&&x| !domain.contains(x)) {
            return Err(KernelError::OutOfDomain {
                x,
                domain: domain.to_string(),
            });
        }
        let (mut lo, mut hi) = (xs[0], xs[0]);
        for &x in &xs[1..] {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        if lo == hi {
            return Ok(lo);
        }
        let mut numerator = CompensatedSum::new();
        let mut denominator = CompensatedSum::new();
        for (i, &x) in xs.iter().enumerate() {
            let w = self.weights.value(i, x)?;
            numerator.add(w * self.generator.value(x)?);
            denominator.add(w);
        }
        let y = numerator.value() / denominator.value();
        let f_lo = self.generator.value(lo)?;
        let f_hi = self.generator.value(hi)?;
        solve_in_bracket(&self.generator, y, lo, hi, f_lo, f_hi)
    }
}
