//! Exponential-integral template for interference Laplace transforms.
//!
//! Every interference field in the model has a Laplace transform of the form
//!
//! ```text
//! ζ(j) = exp(-2a ∫_b^c [1 - (1 + j·d(x))^{-m}] f(x) dx),  d(x) = P·G·x^{-α}/m,
//! ```
//!
//! where `f(x) = 1` for fields living on a line through the measurement
//! point and `f(x) = x` for planar fields (the prefactor `a` then carries
//! the π of the planar intensity; the constant 2 is applied in both cases).
//! Derivatives in `j` are obtained by differentiating under the integral
//! sign and recombining through the complete Bell polynomials of
//! ζ = exp(-g).

use super::{integrate, QuadratureSettings};
use crate::{Error, Result};

/// Highest derivative order supported by the Bell recursion, enough for
/// Nakagami shapes up to m = 4.
pub const MAX_DERIVATIVE_ORDER: u32 = 3;

/// Measure weight of the integral: line (`1`) or planar annulus (`x`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    One,
    Radial,
}

/// Parameters of one interference Laplace transform.
#[derive(Clone, Copy, Debug)]
pub struct KFunctionSpec {
    /// Density-like prefactor `a` (1/km for line fields; includes π and is
    /// 1/km² for planar fields).
    pub prefactor: f64,
    /// Lower integration limit `b` in km (the exclusion radius).
    pub lower: f64,
    /// Upper integration limit `c` in km; `f64::INFINITY` is allowed.
    pub upper: f64,
    /// Transmit power × antenna gain of the interferer class, linear.
    pub power_gain: f64,
    /// Pathloss exponent α of the interferer link.
    pub alpha: f64,
    /// Nakagami shape m of the interferer fading; divides the kernel and is
    /// the outer exponent.
    pub fading_shape: u32,
    /// Line or planar measure.
    pub measure: Measure,
}

impl KFunctionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.prefactor >= 0.0) {
            return Err(Error::Validation("k-function prefactor must be >= 0".into()));
        }
        if !(self.lower >= 0.0) {
            return Err(Error::Validation("k-function lower limit must be >= 0".into()));
        }
        if self.fading_shape < 1 {
            return Err(Error::Validation("k-function fading shape must be >= 1".into()));
        }
        if !(self.power_gain > 0.0) {
            return Err(Error::Validation("k-function power-gain must be > 0".into()));
        }
        Ok(())
    }

    /// True when the integration range carries no interferers.
    fn is_empty(&self) -> bool {
        self.prefactor == 0.0 || self.lower >= self.upper
    }

    /// 1/d(x) = m x^α / (P·G); working with the reciprocal keeps the
    /// integrands finite at x → 0 where d(x) overflows.
    #[inline]
    fn inv_kernel(&self, x: f64) -> f64 {
        self.fading_shape as f64 * x.powf(self.alpha) / self.power_gain
    }

    #[inline]
    fn weight(&self, x: f64) -> f64 {
        match self.measure {
            Measure::One => 1.0,
            Measure::Radial => x,
        }
    }

    /// The exponent g(j) ≥ 0 with ζ(j) = exp(-g(j)).
    pub fn log_laplace(&self, j: f64, settings: &QuadratureSettings) -> Result<f64> {
        if j == 0.0 || self.is_empty() {
            return Ok(0.0);
        }
        let m = self.fading_shape as i32;
        let integral = integrate(
            |x: f64| {
                let iv = self.inv_kernel(x);
                // (1 + j d)^{-m} = (iv/(iv+j))^m, well-behaved as iv → 0.
                let base = (iv / (iv + j)).powi(m);
                (1.0 - base) * self.weight(x)
            },
            self.lower,
            self.upper,
            settings,
        )?;
        Ok(2.0 * self.prefactor * integral)
    }

    /// n-th derivative of g with respect to j, n ≥ 1:
    /// g⁽ⁿ⁾(j) = 2a (-1)^{n-1} m(m+1)…(m+n-1) ∫ dⁿ (1+jd)^{-m-n} f dx.
    pub fn log_laplace_derivative(
        &self,
        j: f64,
        n: u32,
        settings: &QuadratureSettings,
    ) -> Result<f64> {
        if n == 0 {
            return self.log_laplace(j, settings);
        }
        if n > MAX_DERIVATIVE_ORDER {
            return Err(Error::UnsupportedOrder {
                order: n,
                reason: format!("Bell recursion implemented up to order {MAX_DERIVATIVE_ORDER}"),
            });
        }
        if self.is_empty() {
            return Ok(0.0);
        }
        let m = self.fading_shape as i32;
        let mut rising = 1.0;
        for i in 0..n {
            rising *= (self.fading_shape + i) as f64;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let integral = integrate(
            |x: f64| {
                let iv = self.inv_kernel(x);
                let r = 1.0 / (iv + j);
                // dⁿ (1+jd)^{-m-n} = (iv·r)^m · rⁿ
                (iv * r).powi(m) * r.powi(n as i32) * self.weight(x)
            },
            self.lower,
            self.upper,
            settings,
        )?;
        Ok(2.0 * self.prefactor * sign * rising * integral)
    }
}

/// ζ(j) for a single spec; exactly 1 at j = 0 and non-increasing in j.
pub fn k_function(spec: &KFunctionSpec, j: f64, settings: &QuadratureSettings) -> Result<f64> {
    if j < 0.0 {
        return Err(Error::OutOfRange {
            what: "transform variable j",
            value: j,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok((-spec.log_laplace(j, settings)?).exp())
}

/// Complete Bell polynomials B_0..B_k of (y_1, …, y_k) via the binomial
/// recursion B_n = Σ_i C(n-1, i) B_{n-1-i} y_{i+1}.
fn bell_table(y: &[f64]) -> Vec<f64> {
    let k = y.len();
    let mut b = vec![1.0];
    for n in 1..=k {
        let mut binom = 1.0; // C(n-1, i), updated incrementally
        let mut s = 0.0;
        for i in 0..n {
            s += binom * b[n - 1 - i] * y[i];
            binom *= (n - 1 - i) as f64 / (i + 1) as f64;
        }
        b.push(s);
    }
    b
}

/// Derivatives ζ⁽⁰⁾..ζ⁽ᵏ⁾ of ζ = exp(-g) for the product of the given specs
/// (the g's add across independent fields).
fn product_derivative_table(
    specs: &[KFunctionSpec],
    j: f64,
    order: u32,
    settings: &QuadratureSettings,
) -> Result<Vec<f64>> {
    if order > MAX_DERIVATIVE_ORDER {
        return Err(Error::UnsupportedOrder {
            order,
            reason: format!("Bell recursion implemented up to order {MAX_DERIVATIVE_ORDER}"),
        });
    }
    let mut g0 = 0.0;
    let mut y = vec![0.0; order as usize];
    for spec in specs {
        g0 += spec.log_laplace(j, settings)?;
        for (n, slot) in y.iter_mut().enumerate() {
            *slot -= spec.log_laplace_derivative(j, n as u32 + 1, settings)?;
        }
    }
    let z = (-g0).exp();
    Ok(bell_table(&y).into_iter().map(|b| z * b).collect())
}

/// k-th derivative of ζ(j) for a single spec.
///
/// The incomplete-gamma coverage series only ever needs orders below the
/// fading shape, so `k >= fading_shape` is rejected here; use
/// [`product_laplace_derivative`] when mixing fields of different shapes.
pub fn k_function_derivative(
    spec: &KFunctionSpec,
    j: f64,
    k: u32,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if k >= spec.fading_shape {
        return Err(Error::UnsupportedOrder {
            order: k,
            reason: format!(
                "coverage series needs orders below the fading shape m = {}",
                spec.fading_shape
            ),
        });
    }
    product_laplace_derivative(std::slice::from_ref(spec), j, k, settings)
}

/// k-th derivative of the product of the component transforms.
pub fn product_laplace_derivative(
    specs: &[KFunctionSpec],
    j: f64,
    k: u32,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if j < 0.0 {
        return Err(Error::OutOfRange {
            what: "transform variable j",
            value: j,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let table = product_derivative_table(specs, j, k, settings)?;
    Ok(table[k as usize])
}

/// Conditional coverage term of the Nakagami gamma series,
///
/// ```text
/// Pr[H > j·I/m | geometry] = Σ_{k=0}^{m-1} ((-j)^k / k!) ζ⁽ᵏ⁾(j),
/// ```
///
/// evaluated at j = m·β·x^α with `serving_shape` = m of the serving link and
/// ζ the product transform of the interference components. Clamped to [0, 1]
/// against quadrature round-off.
pub fn coverage_series(
    specs: &[KFunctionSpec],
    j: f64,
    serving_shape: u32,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if serving_shape < 1 {
        return Err(Error::Validation("serving fading shape must be >= 1".into()));
    }
    if j == 0.0 {
        return Ok(1.0);
    }
    let order = serving_shape - 1;
    let table = product_derivative_table(specs, j, order, settings)?;
    let mut sum = 0.0;
    let mut coeff = 1.0; // (-j)^k / k!
    for (k, zk) in table.iter().enumerate() {
        sum += coeff * zk;
        coeff *= -j / (k as f64 + 1.0);
    }
    Ok(sum.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{richardson_derivative, richardson_second_derivative};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Gamma, Poisson};

    fn settings() -> QuadratureSettings {
        QuadratureSettings::default()
    }

    fn sample_spec(rng: &mut ChaCha8Rng) -> KFunctionSpec {
        let measure = if rng.random_bool(0.5) {
            Measure::One
        } else {
            Measure::Radial
        };
        // Planar fields live inside the finite simulation window; only line
        // fields get the semi-infinite extent (their tails decay a power
        // faster and the transform handles them comfortably).
        let upper = if measure == Measure::One && rng.random_bool(0.5) {
            f64::INFINITY
        } else {
            3.0
        };
        KFunctionSpec {
            prefactor: rng.random_range(0.1..5.0),
            lower: if measure == Measure::Radial && rng.random_bool(0.5) {
                0.0
            } else {
                rng.random_range(0.02..0.8)
            },
            upper,
            power_gain: rng.random_range(0.05..20.0),
            alpha: rng.random_range(2.5..4.5),
            fading_shape: rng.random_range(1..=4),
            measure,
        }
    }

    #[test]
    fn unity_at_zero_for_any_spec() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let spec = sample_spec(&mut rng);
            assert_eq!(k_function(&spec, 0.0, &settings()).unwrap(), 1.0);
        }
    }

    #[test]
    fn unity_for_empty_field() {
        let spec = KFunctionSpec {
            prefactor: 0.0,
            lower: 0.1,
            upper: f64::INFINITY,
            power_gain: 1.0,
            alpha: 4.0,
            fading_shape: 2,
            measure: Measure::One,
        };
        for j in [0.0, 0.5, 3.0, 100.0] {
            assert_eq!(k_function(&spec, j, &settings()).unwrap(), 1.0);
        }
        assert_eq!(
            k_function_derivative(&spec, 1.0, 1, &settings()).unwrap(),
            0.0
        );
    }

    #[test]
    fn non_increasing_in_transform_variable() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let spec = sample_spec(&mut rng);
            let mut prev = 1.0;
            for i in 1..=20 {
                let j = 0.25 * i as f64;
                let v = k_function(&spec, j, &settings()).unwrap();
                assert!(v <= prev + 1e-12, "increased at j={j}: {v} > {prev}");
                assert!(v > 0.0 && v <= 1.0);
                prev = v;
            }
        }
    }

    #[test]
    fn derivative_order_zero_equals_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = sample_spec(&mut rng);
        let a = k_function(&spec, 0.7, &settings()).unwrap();
        let b = k_function_derivative(&spec, 0.7, 0, &settings()).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn order_at_or_above_shape_rejected_for_single_spec() {
        let spec = KFunctionSpec {
            prefactor: 1.0,
            lower: 0.1,
            upper: f64::INFINITY,
            power_gain: 1.0,
            alpha: 4.0,
            fading_shape: 2,
            measure: Measure::One,
        };
        assert!(matches!(
            k_function_derivative(&spec, 1.0, 2, &settings()),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn order_above_bell_limit_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = sample_spec(&mut rng);
        assert!(matches!(
            product_laplace_derivative(&[spec], 1.0, 4, &settings()),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn first_derivative_matches_richardson() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let tight = QuadratureSettings {
            rel_tol: 1e-10,
            max_subdivisions: 400,
            ..QuadratureSettings::default()
        };
        for _ in 0..15 {
            let mut spec = sample_spec(&mut rng);
            spec.fading_shape = spec.fading_shape.max(2);
            let j = rng.random_range(0.2..3.0);
            let analytic = k_function_derivative(&spec, j, 1, &tight).unwrap();
            let fd = richardson_derivative(|v| k_function(&spec, v, &tight), j, j * 1e-2).unwrap();
            let denom = analytic.abs().max(1e-12);
            assert!(
                ((analytic - fd) / denom).abs() < 1e-5,
                "spec={spec:?} j={j}: analytic={analytic} fd={fd}"
            );
        }
    }

    #[test]
    fn second_derivative_matches_richardson() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let tight = QuadratureSettings {
            rel_tol: 1e-10,
            max_subdivisions: 400,
            ..QuadratureSettings::default()
        };
        for _ in 0..10 {
            let mut spec = sample_spec(&mut rng);
            spec.fading_shape = 3 + (spec.fading_shape % 2);
            let j = rng.random_range(0.3..2.0);
            let analytic = k_function_derivative(&spec, j, 2, &tight).unwrap();
            let fd =
                richardson_second_derivative(|v| k_function(&spec, v, &tight), j, j * 5e-2)
                    .unwrap();
            let denom = analytic.abs().max(1e-10);
            assert!(
                ((analytic - fd) / denom).abs() < 1e-5,
                "spec={spec:?} j={j}: analytic={analytic} fd={fd}"
            );
        }
    }

    #[test]
    fn product_of_single_spec_equals_single_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut spec = sample_spec(&mut rng);
        spec.fading_shape = 3;
        for k in 0..3 {
            let a = k_function_derivative(&spec, 0.9, k, &settings()).unwrap();
            let b = product_laplace_derivative(&[spec], 0.9, k, &settings()).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn product_of_two_identical_specs_squares_the_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let spec = sample_spec(&mut rng);
        let single = k_function(&spec, 1.3, &settings()).unwrap();
        let product = product_laplace_derivative(&[spec, spec], 1.3, 0, &settings()).unwrap();
        assert!((product - single * single).abs() < 1e-10);
    }

    /// Monte Carlo oracle: E[exp(-j I)] over sampled interference fields,
    /// with I = Σ P·G·H_i·x_i^{-α}, H ~ Gamma(m, 1/m), points from the PPP
    /// the measure describes.
    fn laplace_mc_oracle(spec: &KFunctionSpec, j: f64, fields: usize, seed: u64) -> f64 {
        assert!(spec.upper.is_finite());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = Gamma::new(spec.fading_shape as f64, 1.0 / spec.fading_shape as f64).unwrap();
        let mean_count = match spec.measure {
            // Line field: intensity `a` on both sides of the measurement point.
            Measure::One => 2.0 * spec.prefactor * (spec.upper - spec.lower),
            // Planar field: intensity a/π over the annulus.
            Measure::Radial => spec.prefactor * (spec.upper.powi(2) - spec.lower.powi(2)),
        };
        let poisson = Poisson::new(mean_count).unwrap();
        let mut acc = 0.0;
        for _ in 0..fields {
            let n = poisson.sample(&mut rng) as usize;
            let mut interference = 0.0;
            for _ in 0..n {
                let x = match spec.measure {
                    Measure::One => rng.random_range(spec.lower..spec.upper),
                    Measure::Radial => {
                        let u: f64 = rng.random();
                        (spec.lower.powi(2) + u * (spec.upper.powi(2) - spec.lower.powi(2))).sqrt()
                    }
                };
                let h: f64 = gamma.sample(&mut rng);
                interference += spec.power_gain * h * x.powf(-spec.alpha);
            }
            acc += (-j * interference).exp();
        }
        acc / fields as f64
    }

    #[test]
    fn line_field_matches_monte_carlo_laplace_oracle() {
        // Typical-road vehicle interference with LOS-style parameters,
        // truncated at the simulation radius.
        let spec = KFunctionSpec {
            prefactor: 15.0,
            lower: 0.05,
            upper: 3.0,
            power_gain: 0.1,
            alpha: 2.0,
            fading_shape: 2,
            measure: Measure::One,
        };
        let analytic = k_function(&spec, 1.0, &settings()).unwrap();
        let mc = laplace_mc_oracle(&spec, 1.0, 100_000, 2024);
        assert!(analytic > 0.0 && analytic < 1.0);
        assert!(
            (analytic - mc).abs() < 5e-3,
            "analytic={analytic} mc={mc}"
        );
    }

    #[test]
    fn planar_field_matches_monte_carlo_laplace_oracle() {
        // Other-road field: prefactor carries π times the planar intensity.
        let intensity = 3.0;
        let spec = KFunctionSpec {
            prefactor: std::f64::consts::PI * intensity,
            lower: 0.0,
            upper: 3.0,
            power_gain: 0.001,
            alpha: 2.0,
            fading_shape: 1,
            measure: Measure::Radial,
        };
        let analytic = k_function(&spec, 1.0, &settings()).unwrap();
        let mc = laplace_mc_oracle(&spec, 1.0, 100_000, 4096);
        assert!(analytic > 0.0 && analytic < 1.0);
        assert!(
            (analytic - mc).abs() < 5e-3,
            "analytic={analytic} mc={mc}"
        );
    }
}
