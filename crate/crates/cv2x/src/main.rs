//! `cv2x` — analyze, simulate, or cross-validate UL/DL decoupled access in
//! a cellular-V2X network model.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cv2x::channel::Scenario;
use cv2x::config::load_config;
use cv2x::experiment::{figure_preset, run, write_csv, ExperimentSpec, Metrics, Mode, Sweep};
use cv2x::geometry::{build_realization, RngStream};
use cv2x::simulator::{run_monte_carlo, Estimator};
use cv2x::Error;

#[derive(Parser)]
#[command(
    name = "cv2x",
    about = "UL/DL decoupled access in cellular-V2X: analytical evaluation and Monte Carlo simulation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the analytical expressions only.
    Analyze(RunArgs),
    /// Run the Monte Carlo simulator only.
    Simulate(RunArgs),
    /// Run both and gate each metric on |analytic - simulated| <= max(0.02, 3·CI95).
    Compare(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Network configuration file (flat key = value lines).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Figure-reproduction preset: fig2a|fig2b|fig5|fig8|fig9|fig11|fig12|fig14.
    #[arg(long)]
    figure: Option<String>,
    /// Parameter sweep KEY:FROM:TO:STEPS (keys: lambda_ratio, lambda_m,
    /// lambda_s, lambda_v, lambda_l, speed_kmh, threshold_db).
    #[arg(long)]
    sweep: Option<String>,
    /// Comma-separated metric families: assoc, se, se-system, cp.
    #[arg(long)]
    metrics: Option<String>,
    /// Monte Carlo drops per sweep point.
    #[arg(long)]
    drops: Option<usize>,
    /// Base RNG seed; identical seeds reproduce output byte-for-byte.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Scenario override: los or nlos.
    #[arg(long)]
    scenario: Option<String>,
    /// Output CSV path (default: <experiment>.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Association estimator: typical-only (default) or all-vehicles.
    #[arg(long)]
    estimator: Option<String>,
    /// Disable the UL scheduling exclusion around the serving BS.
    #[arg(long)]
    no_ul_exclusion: bool,
    /// Keep the finite upper limit on the Case-2 DL SBS interference term.
    #[arg(long)]
    paper_case2_upper: bool,
    /// Write drop 0's node layout as (kind, road_index, x_km, y_km) CSV.
    #[arg(long)]
    dump_realization: Option<PathBuf>,
    /// Write raw per-drop SIR samples as (drop_id, case, direction, sir_linear) CSV.
    #[arg(long)]
    dump_sir: Option<PathBuf>,
}

fn build_spec(mode: Mode, args: &RunArgs) -> Result<ExperimentSpec, Error> {
    let mut spec = match &args.figure {
        Some(name) => figure_preset(name, mode).ok_or_else(|| {
            Error::Validation(format!(
                "unknown figure `{name}` (expected fig2a|fig2b|fig5|fig8|fig9|fig11|fig12|fig14)"
            ))
        })?,
        None => ExperimentSpec::new("custom", mode, cv2x::channel::NetworkConfig::default()),
    };
    spec.mode = mode;

    if let Some(path) = &args.config {
        spec.base = load_config(path)?;
    }
    if let Some(s) = &args.scenario {
        let scenario = Scenario::parse(s)
            .ok_or_else(|| Error::Validation(format!("unknown scenario `{s}`")))?;
        spec.base.set_scenario(scenario);
    }
    if let Some(sweep) = &args.sweep {
        spec.sweep = Sweep::parse(sweep)?;
    }
    if let Some(metrics) = &args.metrics {
        spec.metrics = Metrics::parse(metrics)?;
    }
    if let Some(drops) = args.drops {
        spec.drops = drops;
    }
    spec.seed = args.seed;
    spec.out = args.out.clone();
    if let Some(est) = &args.estimator {
        spec.sim.estimator = match est.as_str() {
            "typical-only" => Estimator::TypicalOnly,
            "all-vehicles" => Estimator::AllVehicles,
            other => {
                return Err(Error::Validation(format!(
                    "unknown estimator `{other}` (expected typical-only or all-vehicles)"
                )))
            }
        };
    }
    spec.sim.ul_exclusion = !args.no_ul_exclusion;
    spec.analysis.paper_case2_upper = args.paper_case2_upper;
    spec.base.validate()?;
    Ok(spec)
}

fn dump_realization(spec: &ExperimentSpec, path: &PathBuf) -> Result<(), Error> {
    let real = build_realization(&spec.base, &RngStream::new(spec.seed, 0));
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "kind,road_index,x_km,y_km")?;
    writeln!(f, "typical_vehicle,{},0,0", real.typical_road_index)?;
    for p in &real.mbs_points {
        writeln!(f, "mbs,-1,{},{}", p[0], p[1])?;
    }
    for (r, road) in real.roads.iter().enumerate() {
        for &u in &real.sbs_offsets[r] {
            let p = road.to_plane(u);
            writeln!(f, "sbs,{r},{},{}", p[0], p[1])?;
        }
        for &u in &real.vehicle_offsets[r] {
            let p = road.to_plane(u);
            writeln!(f, "vehicle,{r},{},{}", p[0], p[1])?;
        }
    }
    f.flush()?;
    Ok(())
}

fn dump_sir(spec: &ExperimentSpec, path: &PathBuf) -> Result<(), Error> {
    // Raw samples of the base configuration (no sweep applied).
    let mc = run_monte_carlo(&spec.base, &spec.sim, spec.drops, spec.seed, 0)?;
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "drop_id,case,direction,sir_linear")?;
    for (i, s) in mc.samples.iter().enumerate() {
        writeln!(f, "{i},{},ul,{}", s.case.label(), s.ul_sir)?;
        writeln!(f, "{i},{},dl,{}", s.case.label(), s.dl_sir)?;
    }
    f.flush()?;
    Ok(())
}

fn execute(mode: Mode, args: &RunArgs) -> Result<i32, Error> {
    let spec = build_spec(mode, args)?;

    if let Some(path) = &args.dump_realization {
        dump_realization(&spec, path)?;
    }
    if mode.wants_simulated() {
        if let Some(path) = &args.dump_sir {
            dump_sir(&spec, path)?;
        }
    }

    let report = run(&spec)?;

    let out_path = spec
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", spec.name)));
    let file = std::fs::File::create(&out_path)?;
    write_csv(&report.rows, file)?;

    println!(
        "{}: {} sweep point(s), {} row(s) -> {}",
        spec.name,
        spec.sweep.values.len(),
        report.rows.len(),
        out_path.display()
    );
    for row in &report.rows {
        let mut line = format!(
            "  {}={:<8} {:<12} {:<9} {:<5}",
            spec.sweep.key.label(),
            format!("{:.4}", row.sweep_value),
            row.metric_id,
            row.case,
            row.direction
        );
        if let Some(a) = row.analytic {
            line.push_str(&format!(" analytic={a:.6}"));
        }
        if let Some(s) = row.simulated {
            line.push_str(&format!(" simulated={s:.6}"));
        }
        if let Some(ci) = row.ci95 {
            line.push_str(&format!(" ±{ci:.6}"));
        }
        if let Some(p) = row.pass {
            line.push_str(if p { " PASS" } else { " FAIL" });
        }
        println!("{line}");
    }
    if mode == Mode::Compare {
        println!(
            "comparison: {}/{} within max(0.02, 3·CI95)",
            report.comparisons - report.comparison_failures,
            report.comparisons
        );
        if report.comparison_failures > 0 {
            return Ok(3);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match &cli.command {
        Command::Analyze(a) => (Mode::Analyze, a),
        Command::Simulate(a) => (Mode::Simulate, a),
        Command::Compare(a) => (Mode::Compare, a),
    };
    match execute(mode, args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Validation(_) | Error::Parse { .. } => 2,
                Error::NonConvergence { .. } | Error::UnsupportedOrder { .. } => 4,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
