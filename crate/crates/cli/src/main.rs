//! `usv-swarm`: run surrounding-control scenarios, plot recorded traces,
//! and execute the numerical verification suites.

mod plot;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use usv_swarm::engine::{run, EngineError};
use usv_swarm::scenario::{parse_scenario, preset, preset_catalog, scenario_to_json, Scenario};
use usv_swarm::trace::{parse_csv, to_csv};
use usv_swarm::verify;

#[derive(Parser)]
#[command(
    name = "usv-swarm",
    about = "Collective surrounding control simulator for underactuated surface vessels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario (bundled preset name or JSON file) and write the
    /// trace and outcome report.
    Run(RunArgs),
    /// Render metrics of a recorded trace as SVG plots.
    Plot(PlotArgs),
    /// Run a verification suite and print its machine-readable report.
    Verify(VerifyArgs),
    /// List bundled scenario presets (or dump one as JSON).
    Presets(PresetArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Preset name or path to a scenario JSON file.
    scenario: String,
    /// Output directory for trace.csv and outcome.json.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the scenario duration (s).
    #[arg(long)]
    duration: Option<f64>,
    /// Field overrides as key=value (repeatable); see README for keys.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
struct PlotArgs {
    /// Path to a trace CSV produced by `run`.
    trace: PathBuf,
    /// Metrics to render (repeatable); defaults to rho, phase and hull.
    #[arg(long = "metric", value_name = "NAME")]
    metrics: Vec<String>,
    /// Output directory for the SVG files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name (or "all").
    suite: String,
    /// Also write the JSON report to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PresetArgs {
    /// Dump this preset as scenario JSON instead of listing.
    #[arg(long)]
    dump: Option<String>,
}

fn load_scenario(source: &str) -> Result<Scenario> {
    if let Ok(sc) = preset(source) {
        return Ok(sc);
    }
    let path = Path::new(source);
    if !path.exists() {
        bail!(
            "'{source}' is neither a bundled preset nor an existing file; presets: {}",
            preset_catalog()
                .iter()
                .map(|(n, _)| *n)
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {source}"))?;
    Ok(parse_scenario(&text)?)
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let mut sc = load_scenario(&args.scenario)?;
    if let Some(seed) = args.seed {
        sc.seed = seed;
    }
    if let Some(duration) = args.duration {
        sc.duration = duration;
    }
    for pair in &args.set {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("override '{pair}' is not of the form key=value"))?;
        sc.apply_override(key, value)?;
    }
    sc.validate()?;

    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating output directory {}", args.out.display()))?;
    let (trace, outcome) = run(&sc).map_err(|e| match e {
        EngineError::Blowup { t, vessel } => {
            anyhow!("run aborted: numerical blow-up at t = {t:.3} s on vessel {vessel}")
        }
        other => anyhow!(other),
    })?;

    let trace_path = args.out.join("trace.csv");
    fs::write(&trace_path, to_csv(&trace))?;
    let outcome_path = args.out.join("outcome.json");
    fs::write(&outcome_path, serde_json::to_string_pretty(&outcome)?)?;

    println!("scenario: {}", sc.name);
    println!("ticks:    {}", trace.records.len());
    println!(
        "surrounded_at:         {}",
        outcome
            .surrounded_at
            .map_or("never".to_string(), |t| format!("{t:.1} s"))
    );
    println!(
        "equally_surrounded_at: {}",
        outcome
            .equally_surrounded_at
            .map_or("never".to_string(), |t| format!("{t:.1} s"))
    );
    println!(
        "steady state: hull {:.3} m, max |rho - rho_o| {:.3} m, max gap error {:.2} deg",
        outcome.steady_state.hull_distance,
        outcome.steady_state.max_rho_error,
        outcome.steady_state.max_gap_error_deg
    );
    println!("trace:   {}", trace_path.display());
    println!("outcome: {}", outcome_path.display());
    Ok(())
}

fn cmd_plot(args: &PlotArgs) -> Result<()> {
    let text = fs::read_to_string(&args.trace)
        .with_context(|| format!("reading {}", args.trace.display()))?;
    let trace = parse_csv(&text)?;
    let metrics: Vec<String> = if args.metrics.is_empty() {
        vec!["rho".into(), "phase".into(), "hull".into()]
    } else {
        args.metrics.clone()
    };
    // extract everything first so an unknown metric writes no files
    let mut rendered = Vec::new();
    for m in &metrics {
        let series = plot::extract(&trace, m)?;
        rendered.push((m.clone(), plot::render_svg(&series)));
    }
    fs::create_dir_all(&args.out)?;
    for (m, svg) in rendered {
        let path = args.out.join(format!("{m}.svg"));
        fs::write(&path, svg)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let reports = verify::run_suite(&args.suite).ok_or_else(|| {
        anyhow!(
            "unknown suite '{}'; available: {}, all",
            args.suite,
            verify::available_suites().join(", ")
        )
    })?;
    let passed = reports.iter().all(|r| r.passed());
    let doc = serde_json::json!({
        "suite": args.suite,
        "passed": passed,
        "reports": reports,
    });
    let text = serde_json::to_string_pretty(&doc)?;
    println!("{text}");
    if let Some(out) = &args.out {
        fs::write(out, &text)?;
    }
    Ok(passed)
}

fn cmd_presets(args: &PresetArgs) -> Result<()> {
    if let Some(name) = &args.dump {
        let sc = preset(name)?;
        println!("{}", scenario_to_json(&sc));
        return Ok(());
    }
    for (name, description) in preset_catalog() {
        println!("{name}");
        println!("    {description}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args).map(|()| true),
        Command::Plot(args) => cmd_plot(args).map(|()| true),
        Command::Verify(args) => cmd_verify(args),
        Command::Presets(args) => cmd_presets(args).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
