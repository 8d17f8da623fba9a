//! Coverage probability Pr(serving tier ∧ SIR > t): case-weighted averages
//! of the conditional coverage series over the serving-distance laws.
//!
//! * DL at the MBS tier collects Cases 1 and 2 (both have DL = MBS);
//! * UL at the MBS tier is Case 1 alone;
//! * DL at the SBS tier is Case 4 alone;
//! * UL at the SBS tier collects Cases 2 and 4.

use super::interference::{dl_kernels, serving_link, ul_kernels};
use super::{integrate_weighted, Analysis, AssociationCase};
use crate::numerics::coverage_series;
use crate::{BsKind, Direction, Error, Result};

/// Conditional coverage E[Pr(SIR > t | x) | case] for one case.
fn conditional_coverage(
    ctx: &Analysis,
    case: AssociationCase,
    serving: BsKind,
    direction: Direction,
    threshold: f64,
) -> Result<f64> {
    let law = ctx.distance_law(case, serving)?;
    let link = serving_link(ctx.cfg, serving, direction);
    let beta = link.beta_cp(threshold);
    integrate_weighted(
        |x| law.pdf(x),
        |x| {
            let specs = match direction {
                Direction::Dl => {
                    dl_kernels(case, x, ctx.cfg, &ctx.intensities, &ctx.constants, &ctx.opts)?
                }
                Direction::Ul => ul_kernels(serving, x, ctx.cfg, &ctx.intensities),
            };
            coverage_series(
                &specs,
                link.transform_var(beta, x),
                link.fading_shape,
                &ctx.opts.kernel_settings,
            )
        },
        &ctx.opts.outer_settings,
    )
}

/// Coverage probability for a linear threshold t ≥ 0. At t → 0 the value
/// converges to the total probability mass of the cases served by the
/// requested tier.
pub fn coverage_prob_with(
    ctx: &Analysis,
    serving: BsKind,
    direction: Direction,
    threshold: f64,
) -> Result<f64> {
    if !(threshold >= 0.0) || !threshold.is_finite() {
        return Err(Error::OutOfRange {
            what: "SIR threshold (linear)",
            value: threshold,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let (p1, p2, p4) = ctx.case_probs();
    let mut total = 0.0;
    let mut add = |weight: f64, case: AssociationCase| -> Result<()> {
        if weight <= 0.0 {
            return Ok(());
        }
        total += weight * conditional_coverage(ctx, case, serving, direction, threshold)?;
        Ok(())
    };
    match (serving, direction) {
        (BsKind::Mbs, Direction::Dl) => {
            add(p1, AssociationCase::Case1)?;
            add(p2, AssociationCase::Case2)?;
        }
        (BsKind::Mbs, Direction::Ul) => {
            add(p1, AssociationCase::Case1)?;
        }
        (BsKind::Sbs, Direction::Dl) => {
            add(p4, AssociationCase::Case4)?;
        }
        (BsKind::Sbs, Direction::Ul) => {
            add(p2, AssociationCase::Case2)?;
            add(p4, AssociationCase::Case4)?;
        }
    }
    Ok(total.clamp(0.0, 1.0))
}
