//! Interference Laplace-transform kernels for each (case, direction).
//!
//! For a serving distance x (displaced domain), each interference component
//! becomes one [`KFunctionSpec`]:
//!
//! * DL at the vehicle — MBS field beyond x (planar, π λ_M), typical-road
//!   SBSs beyond the association-exclusion radius (line, λ_S), other-road
//!   SBSs from 0 (planar, π λ_Sa, side-lobe gain);
//! * UL at the serving BS — typical-road vehicles beyond the serving
//!   distance (line, λ_V), other-road vehicles from 0 (planar, π λ_Va);
//!   gains, exponents and fading shapes follow the serving tier.
//!
//! Upper limits are truncated at the region radius so the transforms
//! describe the same finite window the simulator samples; at the LOS
//! exponent α_S = 2 the planar integrals would otherwise diverge
//! logarithmically.

use super::{AnalysisOptions, AssociationCase, AssociationConstants};
use crate::channel::{NetworkConfig, TransformedIntensities};
use crate::numerics::{KFunctionSpec, Measure};
use crate::{BsKind, Direction, Error, Result};

use std::f64::consts::PI;

/// Constants of the serving link entering the coverage series: the fading
/// shape of the gamma series, the P·G product that scales the threshold,
/// and the pathloss exponent of the serving distance.
#[derive(Clone, Copy, Debug)]
pub struct ServingLink {
    pub fading_shape: u32,
    pub power_gain: f64,
    pub alpha: f64,
}

impl ServingLink {
    /// Transform-variable value j = m β x^α for threshold factor β.
    pub fn transform_var(&self, beta: f64, x: f64) -> f64 {
        self.fading_shape as f64 * beta * x.powf(self.alpha)
    }

    /// β for spectral efficiency at integration variable t (nats).
    pub fn beta_se(&self, t: f64) -> f64 {
        (t.exp() - 1.0) / self.power_gain
    }

    /// β for coverage probability at linear SIR threshold t.
    pub fn beta_cp(&self, threshold: f64) -> f64 {
        threshold / self.power_gain
    }
}

/// Serving-link constants per (serving tier, direction).
pub fn serving_link(cfg: &NetworkConfig, serving: BsKind, direction: Direction) -> ServingLink {
    match (serving, direction) {
        (BsKind::Mbs, Direction::Dl) => ServingLink {
            fading_shape: cfg.m_m,
            power_gain: cfg.p_m_w() * cfg.g_m(),
            alpha: cfg.alpha_m,
        },
        (BsKind::Sbs, Direction::Dl) => ServingLink {
            fading_shape: cfg.m_s0,
            power_gain: cfg.p_s_w() * cfg.g_s0(),
            alpha: cfg.alpha_s,
        },
        // UL at an MBS: side lobe over α_M; the vehicle-to-MBS fading shape.
        (BsKind::Mbs, Direction::Ul) => ServingLink {
            fading_shape: cfg.m_v1,
            power_gain: cfg.p_v_w() * cfg.g_v1(),
            alpha: cfg.alpha_m,
        },
        // UL at a typical-road SBS: main lobe over α_S.
        (BsKind::Sbs, Direction::Ul) => ServingLink {
            fading_shape: cfg.m_v0,
            power_gain: cfg.p_v_w() * cfg.g_v0(),
            alpha: cfg.alpha_s,
        },
    }
}

/// DL interference kernels at serving distance x for the given case.
/// Supported: Case1/Case2/CoupledM (serving MBS) and Case4/CoupledS
/// (serving SBS).
pub fn dl_kernels(
    case: AssociationCase,
    x: f64,
    cfg: &NetworkConfig,
    intens: &TransformedIntensities,
    consts: &AssociationConstants,
    opts: &AnalysisOptions,
) -> Result<Vec<KFunctionSpec>> {
    let r = cfg.region_radius_km;
    let mbs_field = |lower: f64| KFunctionSpec {
        prefactor: PI * intens.mbs,
        lower,
        upper: r,
        power_gain: cfg.p_m_w() * cfg.g_m(),
        alpha: cfg.alpha_m,
        fading_shape: cfg.m_m,
        measure: Measure::Radial,
    };
    let typical_sbs = |lower: f64, upper: f64| KFunctionSpec {
        prefactor: intens.sbs_on_road,
        lower,
        upper,
        power_gain: cfg.p_s_w() * cfg.g_s0(),
        alpha: cfg.alpha_s,
        fading_shape: cfg.m_s0,
        measure: Measure::One,
    };
    let other_sbs = KFunctionSpec {
        prefactor: PI * intens.sbs_planar,
        lower: 0.0,
        upper: r,
        power_gain: cfg.p_s_w() * cfg.g_s1(),
        alpha: cfg.alpha_s,
        fading_shape: cfg.m_s1,
        measure: Measure::Radial,
    };

    // Exclusion radii translated through the association inequalities.
    let sbs_radius = |k: f64| k.recip().powf(1.0 / cfg.alpha_s) * x.powf(cfg.alpha_m / cfg.alpha_s);
    let mbs_radius = consts.a_ms.powf(1.0 / cfg.alpha_m) * x.powf(cfg.alpha_s / cfg.alpha_m);

    let specs = match case {
        // Serving MBS at x; no typical-road SBS inside the radius where it
        // would have won the binding inequality.
        AssociationCase::Case1 => vec![
            mbs_field(x),
            typical_sbs(sbs_radius(consts.b_ms), r),
            other_sbs,
        ],
        AssociationCase::Case2 => {
            let lower = sbs_radius(consts.a_ms);
            let upper = if opts.paper_case2_upper {
                sbs_radius(consts.b_ms).min(r)
            } else {
                r
            };
            vec![mbs_field(x), typical_sbs(lower, upper), other_sbs]
        }
        AssociationCase::CoupledM => vec![
            mbs_field(x),
            typical_sbs(sbs_radius(consts.a_ms), r),
            other_sbs,
        ],
        // Serving SBS at x; no MBS inside the DL-winning radius, no other
        // typical-road SBS closer than the serving one.
        AssociationCase::Case4 | AssociationCase::CoupledS => vec![
            mbs_field(mbs_radius),
            typical_sbs(x, r),
            other_sbs,
        ],
        AssociationCase::Case3 => {
            return Err(Error::UnsupportedPair("(case3, dl)".into()));
        }
    };
    Ok(specs)
}

/// UL interference kernels at the serving BS for serving distance x. Only
/// the serving tier matters: all vehicles transmit on the shared UL band,
/// typical-road vehicles inside the serving distance are excluded
/// (scheduling exclusion of the serving cell), other-road vehicles are
/// unexcluded side-lobe interferers.
pub fn ul_kernels(
    serving: BsKind,
    x: f64,
    cfg: &NetworkConfig,
    intens: &TransformedIntensities,
) -> Vec<KFunctionSpec> {
    let r = cfg.region_radius_km;
    match serving {
        BsKind::Sbs => vec![
            KFunctionSpec {
                prefactor: intens.veh_on_road,
                lower: x,
                upper: r,
                power_gain: cfg.p_v_w() * cfg.g_v0(),
                alpha: cfg.alpha_s,
                fading_shape: cfg.m_v0,
                measure: Measure::One,
            },
            KFunctionSpec {
                prefactor: PI * intens.veh_planar,
                lower: 0.0,
                upper: r,
                power_gain: cfg.p_v_w() * cfg.g_v1(),
                alpha: cfg.alpha_s,
                fading_shape: cfg.m_v1,
                measure: Measure::Radial,
            },
        ],
        BsKind::Mbs => vec![
            KFunctionSpec {
                prefactor: intens.veh_on_road,
                lower: x,
                upper: r,
                power_gain: cfg.p_v_w() * cfg.g_v1(),
                alpha: cfg.alpha_m,
                fading_shape: cfg.m_v1,
                measure: Measure::One,
            },
            KFunctionSpec {
                prefactor: PI * intens.veh_planar,
                lower: 0.0,
                upper: r,
                power_gain: cfg.p_v_w() * cfg.g_v1(),
                alpha: cfg.alpha_m,
                fading_shape: cfg.m_v1,
                measure: Measure::Radial,
            },
        ],
    }
}
