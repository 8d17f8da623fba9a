//! Seeded Monte Carlo engine: samples network drops, associates the typical
//! vehicle by maximum long-term (shadowed, fading-free) received power in
//! each direction, computes UL/DL SIR with fresh fading, and aggregates
//! estimators with 95% confidence intervals.
//!
//! Drops are independent work units keyed by RNG stream id and run in
//! parallel; aggregation folds the per-drop records in drop order, so
//! results are bit-identical to a single-threaded run.

mod drop;

pub use drop::{associate, compute_sir, AssociationOutcome, DropSample, ServingBs};

use rayon::prelude::*;

use crate::analysis::AssociationCase;
use crate::channel::{speed_to_density, NetworkConfig};
use crate::geometry::RngStream;
use crate::{BsKind, Direction, Result};

/// Estimator over vehicles for the association statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    /// Palm estimator: only the typical vehicle at the origin (matches the
    /// analysis).
    TypicalOnly,
    /// Every sampled vehicle on every road (the exhaustive nested loop;
    /// boundary vehicles included).
    AllVehicles,
}

/// Simulator switches.
#[derive(Clone, Copy, Debug)]
pub struct SimOptions {
    /// Exclude typical-road interfering vehicles whose displaced distance
    /// to the serving BS is below the serving distance (the scheduling
    /// exclusion the UL transforms assume). OFF gives the raw unrestricted
    /// interferer sum.
    pub ul_exclusion: bool,
    pub estimator: Estimator,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            ul_exclusion: true,
            estimator: Estimator::TypicalOnly,
        }
    }
}

/// A point estimate with its 95% confidence half-width.
#[derive(Clone, Copy, Debug)]
pub struct EstimateWithCI {
    pub mean: f64,
    pub ci95_halfwidth: f64,
    pub n: usize,
}

impl EstimateWithCI {
    fn from_samples(values: impl Iterator<Item = f64>) -> Self {
        let mut n = 0usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for v in values {
            n += 1;
            sum += v;
            sumsq += v * v;
        }
        if n == 0 {
            return Self {
                mean: f64::NAN,
                ci95_halfwidth: f64::NAN,
                n: 0,
            };
        }
        let mean = sum / n as f64;
        let var = (sumsq / n as f64 - mean * mean).max(0.0);
        Self {
            mean,
            ci95_halfwidth: 1.96 * (var / n as f64).sqrt(),
            n,
        }
    }

    fn from_proportion(count: usize, total: usize) -> Self {
        let p = count as f64 / total as f64;
        Self {
            mean: p,
            ci95_halfwidth: 1.96 * (p * (1.0 - p) / total as f64).sqrt(),
            n: total,
        }
    }
}

/// Aggregated output of a Monte Carlo run. Per-drop records are retained so
/// any metric (case frequencies, SE, CP at arbitrary thresholds, serving
/// distances) can be estimated after the fact.
pub struct MonteCarloResult {
    pub samples: Vec<DropSample>,
    /// All-vehicle association counts per case (present when the
    /// `AllVehicles` estimator ran).
    pub census_counts: Option<[u64; 4]>,
    pub census_total: u64,
}

impl MonteCarloResult {
    pub fn drops(&self) -> usize {
        self.samples.len()
    }

    /// Joint association-case frequencies (Case 1, 2, 3, 4).
    pub fn case_freq(&self) -> [EstimateWithCI; 4] {
        if let Some(counts) = &self.census_counts {
            let total = self.census_total as usize;
            return counts.map(|c| EstimateWithCI::from_proportion(c as usize, total));
        }
        let mut counts = [0usize; 4];
        for s in &self.samples {
            counts[s.case.index().expect("decoupled case")] += 1;
        }
        counts.map(|c| EstimateWithCI::from_proportion(c, self.samples.len()))
    }

    fn sir_of(s: &DropSample, direction: Direction) -> f64 {
        match direction {
            Direction::Ul => s.ul_sir,
            Direction::Dl => s.dl_sir,
        }
    }

    /// Conditional mean ln(1+SIR) given the association case. Infinite-SIR
    /// sentinel drops are excluded; see [`Self::sentinel_rate`].
    pub fn se_link(&self, case: AssociationCase, direction: Direction) -> EstimateWithCI {
        EstimateWithCI::from_samples(
            self.samples
                .iter()
                .filter(|s| s.case == case)
                .map(|s| Self::sir_of(s, direction))
                .filter(|sir| sir.is_finite())
                .map(|sir| sir.ln_1p()),
        )
    }

    /// Unconditional per-drop system SE sample mean: Σ over the requested
    /// directions of ln(1+SIR), with coupled access re-using the DL
    /// attachment for UL.
    pub fn system_se(
        &self,
        mode: crate::analysis::AccessMode,
        direction: Option<Direction>,
    ) -> EstimateWithCI {
        use crate::analysis::AccessMode;
        EstimateWithCI::from_samples(self.samples.iter().filter_map(|s| {
            let ul = match mode {
                AccessMode::Decoupled => s.ul_sir,
                AccessMode::Coupled => s.coupled_ul_sir,
            };
            let v = match direction {
                Some(Direction::Ul) => ul.ln_1p(),
                Some(Direction::Dl) => s.dl_sir.ln_1p(),
                None => ul.ln_1p() + s.dl_sir.ln_1p(),
            };
            v.is_finite().then_some(v)
        }))
    }

    /// Pr(serving tier ∧ SIR > t), the joint coverage estimator.
    pub fn coverage_prob(
        &self,
        serving: BsKind,
        direction: Direction,
        threshold: f64,
    ) -> EstimateWithCI {
        let count = self
            .samples
            .iter()
            .filter(|s| {
                let kind = match direction {
                    Direction::Ul => s.ul_kind,
                    Direction::Dl => s.dl_kind,
                };
                kind == serving && Self::sir_of(s, direction) > threshold
            })
            .count();
        EstimateWithCI::from_proportion(count, self.samples.len())
    }

    /// Displaced serving distances of drops that landed in (case, serving).
    pub fn serving_distances(&self, case: AssociationCase, serving: BsKind) -> Vec<f64> {
        self.samples
            .iter()
            .filter(|s| s.case == case)
            .filter_map(|s| {
                if s.ul_kind == serving {
                    Some(s.ul_distance)
                } else if s.dl_kind == serving {
                    Some(s.dl_distance)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Fraction of drops whose SIR hit the infinite sentinel (empty
    /// interferer set under zero noise).
    pub fn sentinel_rate(&self, direction: Direction) -> f64 {
        let n = self
            .samples
            .iter()
            .filter(|s| Self::sir_of(s, direction).is_infinite())
            .count();
        n as f64 / self.samples.len() as f64
    }
}

/// Runs `drops` independent drops with stream ids
/// `stream_base..stream_base + drops`. Deterministic in
/// (config, options, drops, seed, stream_base).
pub fn run_monte_carlo(
    cfg: &NetworkConfig,
    opts: &SimOptions,
    drops: usize,
    seed: u64,
    stream_base: u64,
) -> Result<MonteCarloResult> {
    cfg.validate()?;
    if drops == 0 {
        return Err(crate::Error::Validation("drops must be >= 1".into()));
    }
    let census = opts.estimator == Estimator::AllVehicles;
    let per_drop: Result<Vec<_>> = (0..drops as u64)
        .into_par_iter()
        .map(|i| drop::run_drop(cfg, opts, &RngStream::new(seed, stream_base + i), census))
        .collect();
    let per_drop = per_drop?;

    let mut samples = Vec::with_capacity(drops);
    let mut census_counts = [0u64; 4];
    let mut census_total = 0u64;
    for (sample, counts) in per_drop {
        samples.push(sample);
        if let Some(c) = counts {
            for k in 0..4 {
                census_counts[k] += c[k];
            }
            census_total += c.iter().sum::<u64>();
        }
    }
    Ok(MonteCarloResult {
        samples,
        census_counts: census.then_some(census_counts),
        census_total,
    })
}

/// Association-only fast path: samples just the candidate tiers (MBS field
/// and typical-road SBSs plus their shadowing), skipping interference.
/// Returns the same record layout with SIR fields unset, for distance-law
/// and association statistics at high drop counts.
pub fn run_association_mc(
    cfg: &NetworkConfig,
    drops: usize,
    seed: u64,
    stream_base: u64,
) -> Result<MonteCarloResult> {
    cfg.validate()?;
    if drops == 0 {
        return Err(crate::Error::Validation("drops must be >= 1".into()));
    }
    let per_drop: Result<Vec<_>> = (0..drops as u64)
        .into_par_iter()
        .map(|i| drop::run_association_drop(cfg, &RngStream::new(seed, stream_base + i)))
        .collect();
    Ok(MonteCarloResult {
        samples: per_drop?,
        census_counts: None,
        census_total: 0,
    })
}

/// Per-speed Monte Carlo: sets the vehicle density by the Greenshields
/// relation and runs the full engine, returning (speed, result) pairs.
pub fn run_speed_sweep(
    cfg: &NetworkConfig,
    opts: &SimOptions,
    speeds_kmh: &[f64],
    drops: usize,
    seed: u64,
) -> Result<Vec<(f64, MonteCarloResult)>> {
    let mut out = Vec::with_capacity(speeds_kmh.len());
    for (idx, &v) in speeds_kmh.iter().enumerate() {
        let mut point = cfg.clone();
        point.lambda_v = speed_to_density(v, cfg)?;
        let result = run_monte_carlo(&point, opts, drops, seed, (idx as u64) << 32)?;
        out.push((v, result));
    }
    Ok(out)
}
