//! Joint association probabilities of the four UL/DL cases.
//!
//! With nearest-candidate distances X_S (typical-road SBS, CDF
//! 1 - e^{-2λ_S x}) and X_M (MBS, CDF 1 - e^{-πλ_M x²}) in the displaced
//! domain, every case probability reduces to integrals of the form
//!
//! ```text
//! I(K) = ∫₀^∞ 2λ_S e^{-2λ_S x} exp(-π λ_M K^{2/α_M} x^{2α_S/α_M}) dx,
//! ```
//!
//! with K the association constant of the binding inequality:
//! P(Case 1) = 1 - I(B), P(Case 2) = I(B) - I(A), P(Case 4) = I(A), and
//! P(Case 3) = 0 because A > B leaves no feasible region. The three values
//! sum to one identically. When α_S = α_M the integrals collapse to the
//! scaled-complementary-error-function closed form.

use super::AssociationCase;
use crate::channel::{NetworkConfig, TransformedIntensities};
use crate::numerics::{erfcx, integrate, QuadratureSettings};
use crate::{Error, Result};

use std::f64::consts::PI;

/// The two association constants, linear: `a_ms` compares DL received
/// powers (P_M G_M / P_S G_{S,0}), `b_ms` compares UL received powers
/// (G_{V,1} / G_{V,0}). The taxonomy requires a_ms > b_ms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssociationConstants {
    pub a_ms: f64,
    pub b_ms: f64,
}

impl AssociationConstants {
    pub fn from_config(cfg: &NetworkConfig) -> Self {
        Self {
            a_ms: cfg.a_ms(),
            b_ms: cfg.b_ms(),
        }
    }
}

/// Exclusion coefficient c(K) = π λ_M K^{2/α_M}.
fn exclusion_coeff(k: f64, lambda_m: f64, alpha_m: f64) -> f64 {
    PI * lambda_m * k.powf(2.0 / alpha_m)
}

/// Kernel of all three probabilities: ∫ f_S(x) · window(x) dx with the
/// window built from exp(-c x^p) factors, p = 2 α_S / α_M.
fn fs_expectation(
    lambda_s: f64,
    window: impl Fn(f64) -> f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    integrate(
        |x: f64| 2.0 * lambda_s * (-2.0 * lambda_s * x).exp() * window(x),
        0.0,
        f64::INFINITY,
        settings,
    )
}

fn degenerate(intens: &TransformedIntensities) -> Result<Option<(f64, f64, f64)>> {
    if intens.sbs_on_road == 0.0 && intens.mbs == 0.0 {
        return Err(Error::Validation(
            "association undefined: both candidate densities are zero".into(),
        ));
    }
    if intens.sbs_on_road == 0.0 {
        // No SBS anywhere: both links ride the MBS tier.
        return Ok(Some((1.0, 0.0, 0.0)));
    }
    if intens.mbs == 0.0 {
        return Ok(Some((0.0, 0.0, 1.0)));
    }
    Ok(None)
}

/// All three case probabilities by the general quadrature path (any α).
///
/// P(Case 1) is integrated in complement form
/// ∫ f_S (1 - e^{-c_B x^p}) dx and P(Case 2) as a single difference
/// integral, so no path suffers cancellation when a probability is small.
pub fn assoc_probs_integral(
    intens: &TransformedIntensities,
    consts: &AssociationConstants,
    alpha_m: f64,
    alpha_s: f64,
    settings: &QuadratureSettings,
) -> Result<(f64, f64, f64)> {
    if let Some(d) = degenerate(intens)? {
        return Ok(d);
    }
    let lambda_s = intens.sbs_on_road;
    let p = 2.0 * alpha_s / alpha_m;
    let c_a = exclusion_coeff(consts.a_ms, intens.mbs, alpha_m);
    let c_b = exclusion_coeff(consts.b_ms, intens.mbs, alpha_m);
    let p1 = fs_expectation(lambda_s, |x| 1.0 - (-c_b * x.powf(p)).exp(), settings)?;
    let p2 = fs_expectation(
        lambda_s,
        |x| {
            let e = x.powf(p);
            (-c_b * e).exp() - (-c_a * e).exp()
        },
        settings,
    )?;
    let p4 = fs_expectation(lambda_s, |x| (-c_a * x.powf(p)).exp(), settings)?;
    Ok((p1.clamp(0.0, 1.0), p2.clamp(0.0, 1.0), p4.clamp(0.0, 1.0)))
}

/// I(K) in closed form for α_S = α_M = α:
/// I = λ_S √(π/c) · erfcx(λ_S/√c) with c = π λ_M K^{2/α}.
fn closed_form_i(k: f64, lambda_s: f64, lambda_m: f64, alpha: f64) -> f64 {
    let c = exclusion_coeff(k, lambda_m, alpha);
    lambda_s * (PI / c).sqrt() * erfcx(lambda_s / c.sqrt())
}

/// All three case probabilities by the equal-α erfc closed forms.
pub fn assoc_probs_closed(
    intens: &TransformedIntensities,
    consts: &AssociationConstants,
    alpha: f64,
) -> Result<(f64, f64, f64)> {
    if let Some(d) = degenerate(intens)? {
        return Ok(d);
    }
    let ia = closed_form_i(consts.a_ms, intens.sbs_on_road, intens.mbs, alpha);
    let ib = closed_form_i(consts.b_ms, intens.sbs_on_road, intens.mbs, alpha);
    Ok((
        (1.0 - ib).clamp(0.0, 1.0),
        (ib - ia).clamp(0.0, 1.0),
        ia.clamp(0.0, 1.0),
    ))
}

fn select(case: AssociationCase, probs: (f64, f64, f64)) -> Result<f64> {
    match case {
        AssociationCase::Case1 => Ok(probs.0),
        AssociationCase::Case2 => Ok(probs.1),
        AssociationCase::Case3 => Ok(0.0),
        AssociationCase::Case4 | AssociationCase::CoupledS => Ok(probs.2),
        AssociationCase::CoupledM => Ok(probs.0 + probs.1),
    }
}

/// Joint association probability of one case, general quadrature path.
pub fn assoc_prob_integral(
    case: AssociationCase,
    intens: &TransformedIntensities,
    consts: &AssociationConstants,
    alpha_m: f64,
    alpha_s: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if case == AssociationCase::Case3 {
        return Ok(0.0);
    }
    select(
        case,
        assoc_probs_integral(intens, consts, alpha_m, alpha_s, settings)?,
    )
}

/// Joint association probability of one case, equal-α closed form.
pub fn assoc_prob_closed(
    case: AssociationCase,
    intens: &TransformedIntensities,
    consts: &AssociationConstants,
    alpha_m: f64,
    alpha_s: f64,
) -> Result<f64> {
    if (alpha_m - alpha_s).abs() > 1e-12 {
        return Err(Error::Validation(format!(
            "closed-form association requires alpha_s == alpha_m (got {alpha_s} vs {alpha_m})"
        )));
    }
    if case == AssociationCase::Case3 {
        return Ok(0.0);
    }
    select(case, assoc_probs_closed(intens, consts, alpha_m)?)
}

/// Joint association probability; uses the closed form when the exponents
/// are equal and the quadrature path otherwise.
pub fn assoc_prob(
    case: AssociationCase,
    intens: &TransformedIntensities,
    consts: &AssociationConstants,
    alpha_m: f64,
    alpha_s: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    if (alpha_m - alpha_s).abs() <= 1e-12 {
        assoc_prob_closed(case, intens, consts, alpha_m, alpha_s)
    } else {
        assoc_prob_integral(case, intens, consts, alpha_m, alpha_s, settings)
    }
}

/// Conservation audit: returns (P1, P2, P4) and fails unless they sum to 1
/// within 1e-6.
pub fn assoc_prob_sum_check(
    intens: &TransformedIntensities,
    consts: &AssociationConstants,
    alpha_m: f64,
    alpha_s: f64,
    settings: &QuadratureSettings,
) -> Result<(f64, f64, f64)> {
    let probs = if (alpha_m - alpha_s).abs() <= 1e-12 {
        assoc_probs_closed(intens, consts, alpha_m)?
    } else {
        assoc_probs_integral(intens, consts, alpha_m, alpha_s, settings)?
    };
    let sum = probs.0 + probs.1 + probs.2;
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::ConservationViolation(sum));
    }
    Ok(probs)
}
