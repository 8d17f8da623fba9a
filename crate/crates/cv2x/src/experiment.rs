//! Experiment orchestration: parameter sweeps, figure-reproduction presets,
//! analytic-vs-simulated comparison and CSV emission.
//!
//! Output is data-only: a schema-stable CSV consumed by any plotting tool.
//! Re-running a spec with the same seed reproduces the CSV byte for byte.

use std::io::Write;
use std::path::PathBuf;

use crate::analysis::{AccessMode, Analysis, AnalysisOptions, AssociationCase};
use crate::channel::{speed_to_density, NetworkConfig, Scenario};
use crate::simulator::{
    run_association_mc, run_monte_carlo, EstimateWithCI, MonteCarloResult, SimOptions,
};
use crate::{BsKind, Direction, Error, Result};

/// What a run evaluates at each sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Analyze,
    Simulate,
    Compare,
}

impl Mode {
    pub fn wants_analytic(self) -> bool {
        self != Mode::Simulate
    }
    pub fn wants_simulated(self) -> bool {
        self != Mode::Analyze
    }
}

/// Metric families a run can emit.
#[derive(Clone, Copy, Debug, Default)]
pub struct Metrics {
    pub assoc: bool,
    pub se_cases: bool,
    pub se_system: bool,
    pub cp: bool,
}

impl Metrics {
    pub fn parse(list: &str) -> Result<Self> {
        let mut m = Metrics::default();
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "assoc" => m.assoc = true,
                "se" => m.se_cases = true,
                "se-system" => m.se_system = true,
                "cp" => m.cp = true,
                other => {
                    return Err(Error::Validation(format!(
                        "unknown metric `{other}` (expected assoc, se, se-system, cp)"
                    )))
                }
            }
        }
        Ok(m)
    }

    fn any(self) -> bool {
        self.assoc || self.se_cases || self.se_system || self.cp
    }

    fn only_assoc(self) -> bool {
        self.assoc && !self.se_cases && !self.se_system && !self.cp
    }
}

/// Swept parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKey {
    /// λ_s / λ_m with λ_m fixed.
    LambdaRatio,
    LambdaM,
    LambdaS,
    LambdaV,
    LambdaL,
    /// Vehicle speed, mapped to λ_v through the Greenshields relation.
    SpeedKmh,
    /// Coverage threshold in dB (configuration untouched).
    ThresholdDb,
    /// Single-point run on the base configuration.
    None,
}

impl SweepKey {
    pub fn label(self) -> &'static str {
        match self {
            SweepKey::LambdaRatio => "lambda_ratio",
            SweepKey::LambdaM => "lambda_m",
            SweepKey::LambdaS => "lambda_s",
            SweepKey::LambdaV => "lambda_v",
            SweepKey::LambdaL => "lambda_l",
            SweepKey::SpeedKmh => "speed_kmh",
            SweepKey::ThresholdDb => "threshold_db",
            SweepKey::None => "none",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub key: SweepKey,
    pub values: Vec<f64>,
}

impl Sweep {
    pub fn single_point() -> Self {
        Sweep {
            key: SweepKey::None,
            values: vec![0.0],
        }
    }

    /// Parses `KEY:FROM:TO:STEPS` into an inclusive linear grid.
    pub fn parse(arg: &str) -> Result<Self> {
        let parts: Vec<&str> = arg.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Validation(format!(
                "sweep must be KEY:FROM:TO:STEPS, got `{arg}`"
            )));
        }
        let key = match parts[0] {
            "lambda_ratio" => SweepKey::LambdaRatio,
            "lambda_m" => SweepKey::LambdaM,
            "lambda_s" => SweepKey::LambdaS,
            "lambda_v" => SweepKey::LambdaV,
            "lambda_l" => SweepKey::LambdaL,
            "speed_kmh" => SweepKey::SpeedKmh,
            "threshold_db" => SweepKey::ThresholdDb,
            other => {
                return Err(Error::Validation(format!(
                    "unknown sweep key `{other}`"
                )))
            }
        };
        let from: f64 = parts[1]
            .parse()
            .map_err(|_| Error::Validation(format!("bad sweep FROM `{}`", parts[1])))?;
        let to: f64 = parts[2]
            .parse()
            .map_err(|_| Error::Validation(format!("bad sweep TO `{}`", parts[2])))?;
        let steps: usize = parts[3]
            .parse()
            .map_err(|_| Error::Validation(format!("bad sweep STEPS `{}`", parts[3])))?;
        if steps == 0 {
            return Err(Error::Validation("sweep needs at least one step".into()));
        }
        let values = if steps == 1 {
            vec![from]
        } else {
            (0..steps)
                .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
                .collect()
        };
        Ok(Sweep { key, values })
    }
}

/// A fully resolved experiment.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub name: String,
    pub mode: Mode,
    pub base: NetworkConfig,
    pub sweep: Sweep,
    pub metrics: Metrics,
    /// CP thresholds (dB) evaluated when the threshold itself is not swept.
    pub thresholds_db: Vec<f64>,
    pub drops: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub sim: SimOptions,
    pub analysis: AnalysisOptions,
}

impl ExperimentSpec {
    pub fn new(name: impl Into<String>, mode: Mode, base: NetworkConfig) -> Self {
        Self {
            name: name.into(),
            mode,
            base,
            sweep: Sweep::single_point(),
            metrics: Metrics {
                assoc: true,
                ..Metrics::default()
            },
            thresholds_db: vec![0.0],
            drops: 10_000,
            seed: 1,
            out: None,
            sim: SimOptions::default(),
            analysis: AnalysisOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep.values.is_empty() {
            return Err(Error::Validation("sweep grid is empty".into()));
        }
        if self.mode.wants_simulated() && self.drops == 0 {
            return Err(Error::Validation(
                "simulate/compare need drops >= 1".into(),
            ));
        }
        if !self.metrics.any() {
            return Err(Error::Validation("no metrics selected".into()));
        }
        Ok(())
    }
}

/// One output record. `analytic`/`simulated` are filled per the mode;
/// `pass` is set only by compare mode.
#[derive(Clone, Debug)]
pub struct ResultRow {
    pub experiment: String,
    pub scenario: String,
    pub sweep_value: f64,
    pub metric_id: String,
    pub case: String,
    pub direction: String,
    pub analytic: Option<f64>,
    pub simulated: Option<f64>,
    pub ci95: Option<f64>,
    pub drops: Option<u64>,
    pub seed: u64,
    pub pass: Option<bool>,
}

/// Outcome of a run: all rows plus comparison bookkeeping.
pub struct RunReport {
    pub rows: Vec<ResultRow>,
    pub comparisons: usize,
    pub comparison_failures: usize,
}

/// Comparison gate: agreement within max(0.02, 3·CI95).
pub fn comparison_passes(analytic: f64, simulated: f64, ci95: f64) -> bool {
    (analytic - simulated).abs() <= f64::max(0.02, 3.0 * ci95)
}

struct RowBuilder<'a> {
    spec: &'a ExperimentSpec,
    scenario: &'static str,
    sweep_value: f64,
    rows: Vec<ResultRow>,
    comparisons: usize,
    failures: usize,
}

impl<'a> RowBuilder<'a> {
    fn push(
        &mut self,
        metric_id: String,
        case: &str,
        direction: &str,
        analytic: Option<f64>,
        simulated: Option<&EstimateWithCI>,
    ) {
        let (sim_mean, ci95, drops) = match simulated {
            Some(e) => (Some(e.mean), Some(e.ci95_halfwidth), Some(e.n as u64)),
            None => (None, None, None),
        };
        let pass = match (self.spec.mode, analytic, sim_mean, ci95) {
            (Mode::Compare, Some(a), Some(s), Some(ci)) => {
                self.comparisons += 1;
                let ok = comparison_passes(a, s, ci);
                if !ok {
                    self.failures += 1;
                }
                Some(ok)
            }
            _ => None,
        };
        self.rows.push(ResultRow {
            experiment: self.spec.name.clone(),
            scenario: self.scenario.to_string(),
            sweep_value: self.sweep_value,
            metric_id,
            case: case.to_string(),
            direction: direction.to_string(),
            analytic,
            simulated: sim_mean,
            ci95,
            drops,
            seed: self.spec.seed,
            pass,
        });
    }
}

fn apply_sweep(cfg: &mut NetworkConfig, key: SweepKey, v: f64) -> Result<()> {
    match key {
        SweepKey::LambdaRatio => cfg.lambda_s = v * cfg.lambda_m,
        SweepKey::LambdaM => cfg.lambda_m = v,
        SweepKey::LambdaS => cfg.lambda_s = v,
        SweepKey::LambdaV => cfg.lambda_v = v,
        SweepKey::LambdaL => cfg.lambda_l = v,
        SweepKey::SpeedKmh => cfg.lambda_v = speed_to_density(v, cfg)?,
        SweepKey::ThresholdDb | SweepKey::None => {}
    }
    Ok(())
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Runs the experiment: per sweep point, evaluate the selected metric
/// families on the analytic and/or simulated path and collect rows in a
/// fixed deterministic order.
pub fn run(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let mut rows = Vec::new();
    let mut comparisons = 0;
    let mut failures = 0;

    for (pi, &value) in spec.sweep.values.iter().enumerate() {
        let mut cfg = spec.base.clone();
        apply_sweep(&mut cfg, spec.sweep.key, value)?;
        cfg.validate()?;

        let thresholds_db: Vec<f64> = if spec.sweep.key == SweepKey::ThresholdDb {
            vec![value]
        } else {
            spec.thresholds_db.clone()
        };

        let analysis = if spec.mode.wants_analytic() {
            Some(Analysis::with_options(&cfg, spec.analysis)?)
        } else {
            None
        };
        let stream_base = (pi as u64) << 32;
        let mc: Option<MonteCarloResult> = if spec.mode.wants_simulated() {
            if spec.metrics.only_assoc() {
                Some(run_association_mc(&cfg, spec.drops, spec.seed, stream_base)?)
            } else {
                Some(run_monte_carlo(
                    &cfg,
                    &spec.sim,
                    spec.drops,
                    spec.seed,
                    stream_base,
                )?)
            }
        } else {
            None
        };

        let mut b = RowBuilder {
            spec,
            scenario: cfg.scenario.label(),
            sweep_value: value,
            rows: Vec::new(),
            comparisons: 0,
            failures: 0,
        };

        if spec.metrics.assoc {
            let freq = mc.as_ref().map(|m| m.case_freq());
            for case in [
                AssociationCase::Case1,
                AssociationCase::Case2,
                AssociationCase::Case3,
                AssociationCase::Case4,
            ] {
                let analytic = analysis.as_ref().map(|a| a.assoc_prob(case));
                let sim = freq.as_ref().map(|f| &f[case.index().unwrap()]);
                b.push("assoc_prob".into(), case.label(), "", analytic, sim);
            }
        }

        if spec.metrics.se_cases {
            for case in [
                AssociationCase::Case1,
                AssociationCase::Case2,
                AssociationCase::Case4,
            ] {
                for dir in [Direction::Ul, Direction::Dl] {
                    let analytic = analysis
                        .as_ref()
                        .map(|a| a.se_link(case, dir).map(|v| v.nats))
                        .transpose()?;
                    let sim = mc.as_ref().map(|m| m.se_link(case, dir));
                    b.push(
                        "se".into(),
                        case.label(),
                        dir.label(),
                        analytic,
                        sim.as_ref(),
                    );
                }
            }
        }

        if spec.metrics.se_system {
            for mode in [AccessMode::Decoupled, AccessMode::Coupled] {
                for (dir, label) in [
                    (Some(Direction::Ul), "ul"),
                    (Some(Direction::Dl), "dl"),
                    (None, "total"),
                ] {
                    let analytic = analysis
                        .as_ref()
                        .map(|a| match dir {
                            Some(d) => a.system_average_se_direction(mode, d).map(|v| v.nats),
                            None => a.system_average_se(mode).map(|v| v.nats),
                        })
                        .transpose()?;
                    let sim = mc.as_ref().map(|m| m.system_se(mode, dir));
                    b.push(
                        "se_system".into(),
                        mode.label(),
                        label,
                        analytic,
                        sim.as_ref(),
                    );
                }
            }
        }

        if spec.metrics.cp {
            for &t_db in &thresholds_db {
                let t_lin = db_to_linear(t_db);
                let metric = if spec.sweep.key == SweepKey::ThresholdDb {
                    "cp".to_string()
                } else {
                    format!("cp_{t_db}db")
                };
                for serving in [BsKind::Mbs, BsKind::Sbs] {
                    for dir in [Direction::Ul, Direction::Dl] {
                        let analytic = analysis
                            .as_ref()
                            .map(|a| a.coverage_prob(serving, dir, t_lin))
                            .transpose()?;
                        let sim = mc.as_ref().map(|m| m.coverage_prob(serving, dir, t_lin));
                        b.push(
                            metric.clone(),
                            serving.label(),
                            dir.label(),
                            analytic,
                            sim.as_ref(),
                        );
                    }
                }
            }
        }

        comparisons += b.comparisons;
        failures += b.failures;
        rows.extend(b.rows);
    }

    Ok(RunReport {
        rows,
        comparisons,
        comparison_failures: failures,
    })
}

const CSV_HEADER: [&str; 12] = [
    "experiment",
    "scenario",
    "sweep_value",
    "metric_id",
    "case",
    "direction",
    "analytic",
    "simulated",
    "ci95",
    "drops",
    "seed",
    "pass",
];

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes rows as stable CSV: fixed header and column order, shortest
/// round-trip float formatting, RFC-style quoting.
pub fn write_csv<W: Write>(rows: &[ResultRow], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.as_str(),
            r.scenario.as_str(),
            &r.sweep_value.to_string(),
            r.metric_id.as_str(),
            r.case.as_str(),
            r.direction.as_str(),
            &fmt_opt_f64(r.analytic),
            &fmt_opt_f64(r.simulated),
            &fmt_opt_f64(r.ci95),
            &r.drops.map(|d| d.to_string()).unwrap_or_default(),
            &r.seed.to_string(),
            &r.pass
                .map(|p| if p { "pass" } else { "fail" }.to_string())
                .unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Figure-reproduction presets: each encodes the swept parameter, the
/// fixed deployment of the corresponding figure, and the metric family.
/// Presets are data; the CLI applies user overrides on top.
pub fn figure_preset(name: &str, mode: Mode) -> Option<ExperimentSpec> {
    let ratio_grid = vec![0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
    let speed_grid = vec![0.0, 30.0, 60.0, 90.0, 115.0];
    let reference = |scenario: Scenario| {
        let mut cfg = NetworkConfig::defaults(scenario);
        cfg.lambda_m = 5.0;
        cfg.lambda_l = 1.0 / std::f64::consts::PI;
        cfg.lambda_v = 15.0;
        cfg.lambda_s = 10.0;
        cfg
    };
    let mut spec = match name {
        // Joint association probability vs SBS/MBS density ratio.
        "fig2a" | "fig2b" => {
            let scenario = if name == "fig2a" {
                Scenario::Los
            } else {
                Scenario::Nlos
            };
            let mut s = ExperimentSpec::new(name, mode, NetworkConfig::defaults(scenario));
            s.base.lambda_m = 5.0;
            s.sweep = Sweep {
                key: SweepKey::LambdaRatio,
                values: ratio_grid,
            };
            s.metrics = Metrics {
                assoc: true,
                ..Metrics::default()
            };
            s
        }
        // Per-case link SE vs density ratio.
        "fig5" => {
            let mut s = ExperimentSpec::new(name, mode, reference(Scenario::Los));
            s.sweep = Sweep {
                key: SweepKey::LambdaRatio,
                values: ratio_grid,
            };
            s.metrics = Metrics {
                se_cases: true,
                ..Metrics::default()
            };
            s
        }
        // Decoupled vs coupled SE per direction / total system average.
        "fig8" | "fig9" => {
            let mut s = ExperimentSpec::new(name, mode, reference(Scenario::Los));
            s.sweep = Sweep {
                key: SweepKey::LambdaRatio,
                values: ratio_grid,
            };
            s.metrics = Metrics {
                se_system: true,
                ..Metrics::default()
            };
            s
        }
        // Coverage probability vs SIR threshold at the reference densities.
        "fig11" => {
            let mut s = ExperimentSpec::new(name, mode, reference(Scenario::Nlos));
            s.sweep = Sweep {
                key: SweepKey::ThresholdDb,
                values: (0..13).map(|i| -10.0 + 2.5 * i as f64).collect(),
            };
            s.metrics = Metrics {
                cp: true,
                ..Metrics::default()
            };
            s
        }
        // Coverage vs vehicle speed (Greenshields density coupling).
        "fig12" => {
            let mut base = NetworkConfig::defaults(Scenario::Nlos);
            base.lambda_m = 4.0;
            base.lambda_s = 2.0;
            base.lambda_l = 1.0 / std::f64::consts::PI;
            let mut s = ExperimentSpec::new(name, mode, base);
            s.sweep = Sweep {
                key: SweepKey::SpeedKmh,
                values: speed_grid,
            };
            s.metrics = Metrics {
                cp: true,
                ..Metrics::default()
            };
            s
        }
        // SE vs vehicle speed.
        "fig14" => {
            let mut base = NetworkConfig::defaults(Scenario::Nlos);
            base.lambda_m = 5.0;
            base.lambda_s = 2.5;
            base.lambda_l = 1.0 / std::f64::consts::PI;
            let mut s = ExperimentSpec::new(name, mode, base);
            s.sweep = Sweep {
                key: SweepKey::SpeedKmh,
                values: speed_grid,
            };
            s.metrics = Metrics {
                se_cases: true,
                se_system: true,
                ..Metrics::default()
            };
            s
        }
        _ => return None,
    };
    spec.name = name.to_string();
    Some(spec)
}
