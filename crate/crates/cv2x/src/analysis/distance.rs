//! Conditional serving-distance densities.
//!
//! Conditioning on a joint association case turns the unconditional
//! nearest-candidate densities f_S(x) = 2λ_S e^{-2λ_S x} and
//! f_M(x) = 2πλ_M x e^{-πλ_M x²} into products with the void probability of
//! the losing tier inside its association-exclusion radius, divided by the
//! case probability:
//!
//! * MBS-serving laws carry exp(-k_K x^{α_M/α_S}) with
//!   k_K = 2 λ_S (1/K)^{1/α_S};
//! * SBS-serving laws carry exp(-c_K x^{2α_S/α_M}) with
//!   c_K = π λ_M K^{2/α_M};
//!
//! K ∈ {A, B} per the inequality that binds in the case.

use super::{AssociationCase, AssociationConstants};
use crate::channel::TransformedIntensities;
use crate::{BsKind, Error, Result};

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug)]
enum LawForm {
    /// exp(-k x^q) · f_M(x) / norm
    MbsSingle { k: f64 },
    /// [exp(-k_lo x^q) - exp(-k_hi x^q)] · f_M(x) / norm
    MbsWindow { k_lo: f64, k_hi: f64 },
    /// exp(-c x^p) · f_S(x) / norm
    SbsSingle { c: f64 },
    /// [exp(-c_lo x^p) - exp(-c_hi x^p)] · f_S(x) / norm
    SbsWindow { c_lo: f64, c_hi: f64 },
}

/// A conditional serving-distance density, evaluable pointwise.
#[derive(Clone, Copy, Debug)]
pub struct DistanceLaw {
    form: LawForm,
    /// Transformed intensity of the serving tier's nearest-distance law.
    lambda: f64,
    /// Exponent of the exclusion term (q = α_M/α_S or p = 2α_S/α_M).
    expo: f64,
    /// Case probability the density is normalized by.
    norm: f64,
}

impl DistanceLaw {
    /// Density value at distance x (km), zero for x ≤ 0.
    pub fn pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let e = x.powf(self.expo);
        let (window, base) = match self.form {
            LawForm::MbsSingle { k } => ((-k * e).exp(), self.f_m(x)),
            LawForm::MbsWindow { k_lo, k_hi } => {
                ((-k_lo * e).exp() - (-k_hi * e).exp(), self.f_m(x))
            }
            LawForm::SbsSingle { c } => ((-c * e).exp(), self.f_s(x)),
            LawForm::SbsWindow { c_lo, c_hi } => {
                ((-c_lo * e).exp() - (-c_hi * e).exp(), self.f_s(x))
            }
        };
        window * base / self.norm
    }

    fn f_m(&self, x: f64) -> f64 {
        2.0 * PI * self.lambda * x * (-PI * self.lambda * x * x).exp()
    }

    fn f_s(&self, x: f64) -> f64 {
        2.0 * self.lambda * (-2.0 * self.lambda * x).exp()
    }
}

/// Builds the conditional law for a supported (case, serving) pair, given
/// the case probabilities (P1, P2, P4).
pub fn distance_law(
    case: AssociationCase,
    serving: BsKind,
    intens: &TransformedIntensities,
    consts: &AssociationConstants,
    alpha_m: f64,
    alpha_s: f64,
    probs: (f64, f64, f64),
) -> Result<DistanceLaw> {
    let (p1, p2, p4) = probs;
    let q = alpha_m / alpha_s;
    let p = 2.0 * alpha_s / alpha_m;
    let k_of = |k: f64| 2.0 * intens.sbs_on_road * k.recip().powf(1.0 / alpha_s);
    let c_of = |k: f64| PI * intens.mbs * k.powf(2.0 / alpha_m);

    let law = match (case, serving) {
        (AssociationCase::Case1, BsKind::Mbs) => DistanceLaw {
            form: LawForm::MbsSingle {
                k: k_of(consts.b_ms),
            },
            lambda: intens.mbs,
            expo: q,
            norm: p1,
        },
        (AssociationCase::Case2, BsKind::Mbs) => DistanceLaw {
            form: LawForm::MbsWindow {
                k_lo: k_of(consts.a_ms),
                k_hi: k_of(consts.b_ms),
            },
            lambda: intens.mbs,
            expo: q,
            norm: p2,
        },
        (AssociationCase::Case2, BsKind::Sbs) => DistanceLaw {
            form: LawForm::SbsWindow {
                c_lo: c_of(consts.b_ms),
                c_hi: c_of(consts.a_ms),
            },
            lambda: intens.sbs_on_road,
            expo: p,
            norm: p2,
        },
        (AssociationCase::Case4, BsKind::Sbs) | (AssociationCase::CoupledS, BsKind::Sbs) => {
            DistanceLaw {
                form: LawForm::SbsSingle {
                    c: c_of(consts.a_ms),
                },
                lambda: intens.sbs_on_road,
                expo: p,
                norm: p4,
            }
        }
        (AssociationCase::CoupledM, BsKind::Mbs) => DistanceLaw {
            form: LawForm::MbsSingle {
                k: k_of(consts.a_ms),
            },
            lambda: intens.mbs,
            expo: q,
            norm: p1 + p2,
        },
        (case, serving) => {
            return Err(Error::UnsupportedPair(format!(
                "({}, {})",
                case.label(),
                serving.label()
            )))
        }
    };
    if !(law.norm > 0.0) {
        return Err(Error::Validation(format!(
            "conditional distance law for ({}, {}) undefined: case probability is zero",
            case.label(),
            serving.label()
        )));
    }
    Ok(law)
}

/// Pointwise conditional serving-distance density (convenience wrapper).
#[allow(clippy::too_many_arguments)]
pub fn distance_pdf(
    case: AssociationCase,
    serving: BsKind,
    x: f64,
    intens: &TransformedIntensities,
    consts: &AssociationConstants,
    alpha_m: f64,
    alpha_s: f64,
    probs: (f64, f64, f64),
) -> Result<f64> {
    Ok(distance_law(case, serving, intens, consts, alpha_m, alpha_s, probs)?.pdf(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::assoc_prob_sum_check;
    use crate::channel::{transform_intensities, NetworkConfig, Scenario};
    use crate::numerics::{integrate, QuadratureSettings};

    fn context(
        scenario: Scenario,
        ratio: f64,
    ) -> (
        TransformedIntensities,
        AssociationConstants,
        f64,
        f64,
        (f64, f64, f64),
    ) {
        let mut cfg = NetworkConfig::defaults(scenario);
        cfg.lambda_m = 5.0;
        cfg.lambda_s = ratio * cfg.lambda_m;
        let intens = transform_intensities(&cfg);
        let consts = AssociationConstants::from_config(&cfg);
        let probs = assoc_prob_sum_check(
            &intens,
            &consts,
            cfg.alpha_m,
            cfg.alpha_s,
            &QuadratureSettings::default(),
        )
        .unwrap();
        (intens, consts, cfg.alpha_m, cfg.alpha_s, probs)
    }

    #[test]
    fn all_supported_pairs_normalize() {
        for scenario in [Scenario::Los, Scenario::Nlos] {
            for ratio in [0.5, 2.0, 6.0] {
                let (intens, consts, am, as_, probs) = context(scenario, ratio);
                for (case, serving) in [
                    (AssociationCase::Case1, BsKind::Mbs),
                    (AssociationCase::Case2, BsKind::Mbs),
                    (AssociationCase::Case2, BsKind::Sbs),
                    (AssociationCase::Case4, BsKind::Sbs),
                    (AssociationCase::CoupledM, BsKind::Mbs),
                ] {
                    let law =
                        distance_law(case, serving, &intens, &consts, am, as_, probs).unwrap();
                    let mass = integrate(
                        |x| law.pdf(x),
                        0.0,
                        f64::INFINITY,
                        &QuadratureSettings::default(),
                    )
                    .unwrap();
                    assert!(
                        (mass - 1.0).abs() < 1e-4,
                        "{scenario:?} ratio {ratio} {} {}: mass {mass}",
                        case.label(),
                        serving.label()
                    );
                }
            }
        }
    }

    #[test]
    fn densities_are_nonnegative() {
        let (intens, consts, am, as_, probs) = context(Scenario::Los, 2.0);
        for (case, serving) in [
            (AssociationCase::Case2, BsKind::Mbs),
            (AssociationCase::Case2, BsKind::Sbs),
        ] {
            let law = distance_law(case, serving, &intens, &consts, am, as_, probs).unwrap();
            for i in 0..2000 {
                let x = 0.002 * i as f64;
                assert!(law.pdf(x) >= 0.0, "negative density at {x}");
            }
        }
        assert_eq!(
            distance_law(AssociationCase::Case2, BsKind::Sbs, &intens, &consts, am, as_, probs)
                .unwrap()
                .pdf(0.0),
            0.0
        );
    }

    #[test]
    fn unsupported_pairs_rejected() {
        let (intens, consts, am, as_, probs) = context(Scenario::Nlos, 1.0);
        for (case, serving) in [
            (AssociationCase::Case3, BsKind::Mbs),
            (AssociationCase::Case3, BsKind::Sbs),
            (AssociationCase::Case1, BsKind::Sbs),
            (AssociationCase::Case4, BsKind::Mbs),
            (AssociationCase::CoupledM, BsKind::Sbs),
        ] {
            assert!(matches!(
                distance_law(case, serving, &intens, &consts, am, as_, probs),
                Err(Error::UnsupportedPair(_))
            ));
        }
    }

    #[test]
    fn case4_reduces_to_raw_nearest_law_without_mbs() {
        // λ_M → 0: the exclusion factor vanishes and the conditional law is
        // the unconditioned nearest-SBS density 2λ_S e^{-2λ_S x}.
        let (mut intens, consts, am, as_, _) = context(Scenario::Nlos, 2.0);
        intens.mbs = 1e-12;
        let probs = (0.0, 0.0, 1.0);
        let law = distance_law(
            AssociationCase::Case4,
            BsKind::Sbs,
            &intens,
            &consts,
            am,
            as_,
            probs,
        )
        .unwrap();
        let lam = intens.sbs_on_road;
        for x in [0.01, 0.05, 0.2, 0.5] {
            let expected = 2.0 * lam * (-2.0 * lam * x).exp();
            assert!(
                ((law.pdf(x) - expected) / expected).abs() < 1e-6,
                "x={x}: {} vs {expected}",
                law.pdf(x)
            );
        }
    }
}
