//! Partial derivatives of a mean at diagonal points `(x, ..., x)`.

use nalgebra::DMatrix;

use super::{KernelError, MeanSpec};

impl MeanSpec {
    /// `∂_i A(x, ..., x) = p_i(x) / p_0(x)`.
    pub fn diag_first_partial(&self, i: usize, x: f64) -> Result<f64, KernelError> {
        let p_i = self.weights().value(i, x)?;
        Ok(p_i / self.weights().total(x)?)
    }

    /// All first partials on the diagonal; they sum to one.
    pub fn diag_first_partials(&self, x: f64) -> Result<Vec<f64>, KernelError> {
        let p = self.weights().values(x)?;
        let p0 = self.weights().total(x)?;
        Ok(p.into_iter().map(|p_i| p_i / p0).collect())
    }

    /// Hessian of the mean at `(x, ..., x)`:
    ///
    /// ```text
    /// ∂_i²   = 2 p_i'(p_0 - p_i)/p_0² + p_i(p_0 - p_i)/p_0² · f''/f'
    /// ∂_i∂_j = -(p_i p_j)'/p_0² - p_i p_j/p_0² · f''/f'        (i ≠ j)
    /// ```
    pub fn diag_second_partials(&self, x: f64) -> Result<DMatrix<f64>, KernelError> {
        let n = self.n();
        let p = self.weights().values(x)?;
        let dp = self.weights().derivatives(x)?;
        let p0 = self.weights().total(x)?;
        let p0_sq = p0 * p0;
        let curvature = self.generator().curvature_ratio(x)?;
        Ok(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                let rest = p0 - p[i];
                2.0 * dp[i] * rest / p0_sq + p[i] * rest / p0_sq * curvature
            } else {
                let product_derivative = dp[i] * p[j] + p[i] * dp[j];
                -product_derivative / p0_sq - p[i] * p[j] / p0_sq * curvature
            }
        }))
    }
}
