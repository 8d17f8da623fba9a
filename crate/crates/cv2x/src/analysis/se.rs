//! Spectral efficiency: E[ln(1 + SIR)] per (case, direction) and the
//! case-probability-weighted system average, in nats/s/Hz.
//!
//! Each link SE is the double integral
//!
//! ```text
//! τ = ∫₀^∞ f_{·|case}(x) ∫₀^∞ Pr[SIR > e^t - 1 | x] dt dx,
//! ```
//!
//! with the inner probability given by the incomplete-gamma coverage series
//! over the product of the case's interference transforms, evaluated at
//! j = m β(t) x^α with β(t) = (e^t - 1)/(P·G).

use super::interference::{dl_kernels, serving_link, ul_kernels};
use super::{integrate_weighted, AccessMode, Analysis, AssociationCase};
use crate::numerics::{coverage_series, integrate, KFunctionSpec};
use crate::{BsKind, Direction, Error, Result};

/// A spectral-efficiency value. `diverged` marks regimes where the
/// threshold integral still had significant mass at the hard cap (e.g. a
/// vanishing interferer field with zero noise, where E[ln(1+SIR)] is
/// infinite); the reported value is then the capped integral.
#[derive(Clone, Copy, Debug)]
pub struct SeValue {
    pub nats: f64,
    pub diverged: bool,
}

impl SeValue {
    fn zero() -> Self {
        SeValue {
            nats: 0.0,
            diverged: false,
        }
    }
}

/// Inner threshold integral S(x) = ∫ coverage(t) dt with block-wise
/// adaptive extension: blocks keep doubling past the initial truncation
/// while they still contribute more than the relative tolerance, up to the
/// hard cap.
fn se_threshold_integral(
    ctx: &Analysis,
    specs: &[KFunctionSpec],
    link: super::ServingLink,
    x: f64,
) -> Result<(f64, f64)> {
    let opts = &ctx.opts;
    let cover = |t: f64| -> Result<f64> {
        let j = link.transform_var(link.beta_se(t), x);
        coverage_series(specs, j, link.fading_shape, &opts.kernel_settings)
    };

    let mut total = 0.0;
    let mut lo = 0.0;
    let mut width = opts.se_t_block;
    let tail = loop {
        let hi = (lo + width).min(opts.se_t_hard_cap);
        let mut failure: Option<Error> = None;
        let block = integrate(
            |t| match cover(t) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    f64::NAN
                }
            },
            lo,
            hi,
            &opts.inner_settings,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let block = block?;
        total += block;
        lo = hi;
        if lo >= opts.se_t_hard_cap {
            // Ran into the hard cap; report the last block as the tail.
            break block;
        }
        if block <= opts.inner_settings.rel_tol * total.abs() {
            break 0.0;
        }
        width *= 2.0;
    };
    Ok((total, tail))
}

/// Resolves the (distance law, kernels, serving link) triple of one
/// (case, direction) and evaluates the double integral.
pub fn se_link_with(
    ctx: &Analysis,
    case: AssociationCase,
    direction: Direction,
) -> Result<SeValue> {
    let case = match case {
        AssociationCase::CoupledS => AssociationCase::Case4,
        AssociationCase::Case3 => {
            return Err(Error::UnsupportedPair("(case3, se)".into()));
        }
        c => c,
    };
    let serving = match (case, direction) {
        (AssociationCase::Case1 | AssociationCase::CoupledM, _) => match direction {
            Direction::Ul => BsKind::Mbs,
            Direction::Dl => BsKind::Mbs,
        },
        (AssociationCase::Case2, Direction::Ul) => BsKind::Sbs,
        (AssociationCase::Case2, Direction::Dl) => BsKind::Mbs,
        (AssociationCase::Case4, _) => BsKind::Sbs,
        _ => unreachable!(),
    };
    let law = ctx.distance_law(case, serving)?;
    let link = serving_link(ctx.cfg, serving, direction);

    let mut diverged = false;
    let nats = integrate_weighted(
        |x| law.pdf(x),
        |x| {
            let specs = match direction {
                Direction::Dl => {
                    dl_kernels(case, x, ctx.cfg, &ctx.intensities, &ctx.constants, &ctx.opts)?
                }
                Direction::Ul => ul_kernels(serving, x, ctx.cfg, &ctx.intensities),
            };
            let (value, tail) = se_threshold_integral(ctx, &specs, link, x)?;
            // Only flag divergence where the law actually carries mass.
            if tail > ctx.opts.inner_settings.rel_tol * value.abs()
                && law.pdf(x) * tail > 1e-12
            {
                diverged = true;
            }
            Ok(value)
        },
        &ctx.opts.outer_settings,
    )?;
    Ok(SeValue { nats, diverged })
}

/// System-average SE: Σ_case P(case) Σ_direction τ. `direction` restricts
/// the sum to one link direction. In coupled mode the MBS attachment
/// carries weight P(M) = 1 - P(Case 4) and the SBS attachment reuses the
/// Case-4 links.
pub fn system_average_se_with(
    ctx: &Analysis,
    mode: AccessMode,
    direction: Option<Direction>,
) -> Result<SeValue> {
    let (p1, p2, p4) = ctx.case_probs();
    let directions: &[Direction] = match direction {
        Some(Direction::Ul) => &[Direction::Ul],
        Some(Direction::Dl) => &[Direction::Dl],
        None => &[Direction::Ul, Direction::Dl],
    };
    let mut acc = SeValue::zero();
    let mut add = |weight: f64, case: AssociationCase, dir: Direction| -> Result<()> {
        if weight <= 0.0 {
            return Ok(());
        }
        let v = se_link_with(ctx, case, dir)?;
        acc.nats += weight * v.nats;
        acc.diverged |= v.diverged;
        Ok(())
    };
    match mode {
        AccessMode::Decoupled => {
            for &dir in directions {
                add(p1, AssociationCase::Case1, dir)?;
                add(p2, AssociationCase::Case2, dir)?;
                add(p4, AssociationCase::Case4, dir)?;
            }
        }
        AccessMode::Coupled => {
            for &dir in directions {
                add(p1 + p2, AssociationCase::CoupledM, dir)?;
                add(p4, AssociationCase::Case4, dir)?;
            }
        }
    }
    Ok(acc)
}
