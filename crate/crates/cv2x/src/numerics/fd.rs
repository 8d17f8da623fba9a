//! Richardson-extrapolated central finite differences.
//!
//! Cross-check path for the analytic Laplace-transform derivatives; kept
//! deliberately independent of the differentiate-under-the-integral route.

use crate::Result;

/// First derivative at `x` from central differences at steps h, h/2, h/4,
/// extrapolated twice (leading error O(h⁶)).
pub fn richardson_derivative<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut central = |h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let d1 = central(h)?;
    let d2 = central(h / 2.0)?;
    let d3 = central(h / 4.0)?;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    Ok((16.0 * r2 - r1) / 15.0)
}

/// Second derivative at `x` by the same scheme on the three-point stencil.
pub fn richardson_second_derivative<F>(mut f: F, x: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let fx = f(x)?;
    let mut stencil = |h: f64| -> Result<f64> { Ok((f(x + h)? - 2.0 * fx + f(x - h)?) / (h * h)) };
    let d1 = stencil(h)?;
    let d2 = stencil(h / 2.0)?;
    let d3 = stencil(h / 4.0)?;
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    Ok((16.0 * r2 - r1) / 15.0)
}
