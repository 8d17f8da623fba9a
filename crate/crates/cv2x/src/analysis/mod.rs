//! Numerical evaluation of the model's analytical results: joint UL/DL
//! association probabilities, conditional serving-distance densities,
//! per-case and system spectral efficiency, and coverage probabilities.
//!
//! All evaluation happens in the displaced domain: shadowing is absorbed
//! into the transformed intensities of [`crate::channel`], distances are
//! post-displacement, and fading is handled through the incomplete-gamma
//! coverage series over interference Laplace transforms.

mod association;
mod coverage;
mod distance;
mod interference;
mod se;

pub use association::{
    assoc_prob, assoc_prob_closed, assoc_prob_integral, assoc_prob_sum_check, AssociationConstants,
};
pub use coverage::coverage_prob_with;
pub use distance::{distance_law, distance_pdf, DistanceLaw};
pub use interference::{dl_kernels, ul_kernels, ServingLink};
pub use se::{se_link_with, system_average_se_with, SeValue};

use crate::channel::{transform_intensities, NetworkConfig, TransformedIntensities};
use crate::numerics::QuadratureSettings;
use crate::{BsKind, Direction, Error, Result};

/// Joint UL/DL association outcome of the typical vehicle. `Case3`
/// (UL = MBS with DL = SBS) is infeasible whenever the DL constant exceeds
/// the UL constant and carries probability zero. `CoupledM`/`CoupledS` name
/// the two cases of conventional coupled access for side-by-side
/// comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AssociationCase {
    /// UL = MBS, DL = MBS.
    Case1,
    /// UL = SBS, DL = MBS.
    Case2,
    /// UL = MBS, DL = SBS (infeasible).
    Case3,
    /// UL = SBS, DL = SBS.
    Case4,
    /// Coupled access attached to the MBS tier.
    CoupledM,
    /// Coupled access attached to the SBS tier (identical to Case 4).
    CoupledS,
}

impl AssociationCase {
    pub fn label(self) -> &'static str {
        match self {
            AssociationCase::Case1 => "case1",
            AssociationCase::Case2 => "case2",
            AssociationCase::Case3 => "case3",
            AssociationCase::Case4 => "case4",
            AssociationCase::CoupledM => "coupled_m",
            AssociationCase::CoupledS => "coupled_s",
        }
    }

    /// Index into per-case count arrays for the four decoupled outcomes.
    pub fn index(self) -> Option<usize> {
        match self {
            AssociationCase::Case1 => Some(0),
            AssociationCase::Case2 => Some(1),
            AssociationCase::Case3 => Some(2),
            AssociationCase::Case4 => Some(3),
            _ => None,
        }
    }
}

/// Coupled vs decoupled system operation for the averaged metrics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AccessMode {
    Decoupled,
    Coupled,
}

impl AccessMode {
    pub fn label(self) -> &'static str {
        match self {
            AccessMode::Decoupled => "decoupled",
            AccessMode::Coupled => "coupled",
        }
    }
}

/// Knobs of the analytical evaluation.
#[derive(Clone, Copy, Debug)]
pub struct AnalysisOptions {
    /// Keep the finite upper limit on the Case-2 DL typical-road SBS
    /// interference term as literally stated. The default extends the limit
    /// to the region edge: every SBS beyond the association-exclusion
    /// radius interferes, which is what the interference sum actually says
    /// and what the simulator measures.
    pub paper_case2_upper: bool,
    /// Innermost Laplace-transform quadratures.
    pub kernel_settings: QuadratureSettings,
    /// Threshold integral of the spectral-efficiency double integral.
    pub inner_settings: QuadratureSettings,
    /// Outer serving-distance integral.
    pub outer_settings: QuadratureSettings,
    /// Association probabilities and distance-law normalizations.
    pub assoc_settings: QuadratureSettings,
    /// Initial truncation of the SE threshold integral, in nats.
    pub se_t_block: f64,
    /// Absolute cap on the threshold integral; if the tail still
    /// contributes past this point the SE is reported with a divergence
    /// flag (no-interference regimes).
    pub se_t_hard_cap: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            paper_case2_upper: false,
            kernel_settings: QuadratureSettings::relaxed(1e-7),
            inner_settings: QuadratureSettings::relaxed(3e-6),
            outer_settings: QuadratureSettings::relaxed(3e-6),
            assoc_settings: QuadratureSettings::default(),
            se_t_block: 30.0,
            se_t_hard_cap: 200.0,
        }
    }
}

/// Precomputed evaluation context for one network configuration: validated
/// config, transformed intensities, association constants and the case
/// probabilities (conservation-checked on construction).
pub struct Analysis<'a> {
    pub cfg: &'a NetworkConfig,
    pub intensities: TransformedIntensities,
    pub constants: AssociationConstants,
    pub opts: AnalysisOptions,
    probs: (f64, f64, f64),
}

impl<'a> Analysis<'a> {
    pub fn new(cfg: &'a NetworkConfig) -> Result<Self> {
        Self::with_options(cfg, AnalysisOptions::default())
    }

    pub fn with_options(cfg: &'a NetworkConfig, opts: AnalysisOptions) -> Result<Self> {
        cfg.validate()?;
        if cfg.noise_power_w != 0.0 {
            return Err(Error::Validation(
                "analytical results are interference-limited (noise_power_w must be 0); \
                 the simulator accepts nonzero noise"
                    .into(),
            ));
        }
        let intensities = transform_intensities(cfg);
        let constants = AssociationConstants::from_config(cfg);
        let probs = assoc_prob_sum_check(
            &intensities,
            &constants,
            cfg.alpha_m,
            cfg.alpha_s,
            &opts.assoc_settings,
        )?;
        Ok(Self {
            cfg,
            intensities,
            constants,
            opts,
            probs,
        })
    }

    /// (P(Case 1), P(Case 2), P(Case 4)); P(Case 3) = 0.
    pub fn case_probs(&self) -> (f64, f64, f64) {
        self.probs
    }

    pub fn assoc_prob(&self, case: AssociationCase) -> f64 {
        match case {
            AssociationCase::Case1 => self.probs.0,
            AssociationCase::Case2 => self.probs.1,
            AssociationCase::Case3 => 0.0,
            AssociationCase::Case4 | AssociationCase::CoupledS => self.probs.2,
            AssociationCase::CoupledM => self.probs.0 + self.probs.1,
        }
    }

    /// Conditional serving-distance density for the supported
    /// (case, serving) pairs.
    pub fn distance_law(&self, case: AssociationCase, serving: BsKind) -> Result<DistanceLaw> {
        distance_law(
            case,
            serving,
            &self.intensities,
            &self.constants,
            self.cfg.alpha_m,
            self.cfg.alpha_s,
            self.probs,
        )
    }

    /// Spectral efficiency of one (case, direction) link, nats/s/Hz.
    pub fn se_link(&self, case: AssociationCase, direction: Direction) -> Result<SeValue> {
        se_link_with(self, case, direction)
    }

    /// Case-probability-weighted system SE, nats/s/Hz.
    pub fn system_average_se(&self, mode: AccessMode) -> Result<SeValue> {
        system_average_se_with(self, mode, None)
    }

    /// System SE restricted to one direction.
    pub fn system_average_se_direction(
        &self,
        mode: AccessMode,
        direction: Direction,
    ) -> Result<SeValue> {
        system_average_se_with(self, mode, Some(direction))
    }

    /// Coverage probability Pr(serving tier ∧ SIR > t) for a linear
    /// threshold t ≥ 0.
    pub fn coverage_prob(
        &self,
        serving: BsKind,
        direction: Direction,
        threshold: f64,
    ) -> Result<f64> {
        coverage_prob_with(self, serving, direction, threshold)
    }
}

/// Integrates `weight(x) · inner(x)` over x ∈ (0, ∞), short-circuiting on
/// inner errors and skipping points where the weight has underflowed to
/// zero (far tails of the serving-distance laws).
pub(crate) fn integrate_weighted<W, F>(
    weight: W,
    mut inner: F,
    settings: &QuadratureSettings,
) -> Result<f64>
where
    W: Fn(f64) -> f64,
    F: FnMut(f64) -> Result<f64>,
{
    let mut failure: Option<Error> = None;
    let value = crate::numerics::integrate(
        |x| {
            if failure.is_some() {
                return 0.0;
            }
            let w = weight(x);
            if w == 0.0 || !w.is_finite() {
                return 0.0;
            }
            match inner(x) {
                Ok(v) => w * v,
                Err(e) => {
                    failure = Some(e);
                    f64::NAN
                }
            }
        },
        0.0,
        f64::INFINITY,
        settings,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    value
}
