//! Numerical substrate: special functions, adaptive quadrature over finite
//! and semi-infinite intervals, and interference Laplace transforms with
//! derivatives in the transform variable.
//!
//! Everything here is deterministic and free of shared mutable state, so
//! concurrent callers need no coordination.

mod fd;
mod kfunction;
mod quad;
mod special;

pub use fd::{richardson_derivative, richardson_second_derivative};
pub use kfunction::{
    coverage_series, k_function, k_function_derivative, product_laplace_derivative, KFunctionSpec,
    Measure, MAX_DERIVATIVE_ORDER,
};
pub use quad::integrate;
pub use special::{erf, erfc, erfcx};

/// Tolerances and limits for adaptive quadrature.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSettings {
    /// Relative tolerance on the integral estimate.
    pub rel_tol: f64,
    /// Absolute tolerance on the integral estimate.
    pub abs_tol: f64,
    /// Maximum number of interval bisections before giving up.
    pub max_subdivisions: usize,
    /// Panels whose contribution falls below `tail_cutoff` times the running
    /// estimate are accepted without further refinement. Keeps far tails of
    /// semi-infinite integrals from eating the subdivision budget.
    pub tail_cutoff: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_subdivisions: 200,
            tail_cutoff: 1e-14,
        }
    }
}

impl QuadratureSettings {
    /// Looser tolerances for the inner layers of nested integrals, where the
    /// outer quadrature already averages out small errors.
    pub fn relaxed(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: 1e-13,
            max_subdivisions: 120,
            tail_cutoff: 1e-14,
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(crate::Error::Validation("rel_tol must be > 0".into()));
        }
        if !(self.abs_tol > 0.0) {
            return Err(crate::Error::Validation("abs_tol must be > 0".into()));
        }
        if self.max_subdivisions < 1 {
            return Err(crate::Error::Validation(
                "max_subdivisions must be >= 1".into(),
            ));
        }
        Ok(())
    }
}
