//! `suddenlab` — evolve small open quantum systems, track entanglement and
//! Bell-violation functionals, and locate their finite death times.
//!
//! Exit codes: 0 success, 1 scenario error, 2 numeric failure,
//! 3 verification failure.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use suddenlab::presets::{preset, PRESET_NAMES};
use suddenlab::runner::{self, reference_death_time, report_to_json, RunReport};
use suddenlab::scenario::{parse_scenario, OutputFormat, Scenario};
use suddenlab::verify;
use suddenlab_core::nonlocality::{svetlichny_value, wwzb_values, wwzb_values_exhaustive};
use suddenlab_core::sudden_death::DeathStatus;

#[derive(Parser)]
#[command(
    name = "suddenlab",
    version,
    about = "Open-system entanglement and Bell-nonlocality death-time laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the sweep horizon of the scenario.
    #[arg(long, global = true)]
    tmax: Option<f64>,

    /// Override the number of sweep points.
    #[arg(long, global = true)]
    points: Option<usize>,

    /// Override the bisection tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Worker threads for sweep evaluation; the output is identical for
    /// any count.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Output directory (defaults to $SUDDENLAB_OUT, then ./out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format for reports.
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// Evaluate the full symmetry closure of the correlation classes.
    #[arg(long, global = true, default_value_t = false)]
    exhaustive: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario's sweeps and write trajectory files.
    Evolve { scenario: PathBuf },
    /// Run a scenario and report death times.
    Deathtime { scenario: PathBuf },
    /// Evaluate Bell operators on a scenario's initial state and their
    /// violation margins along the sweep.
    Bell { scenario: PathBuf },
    /// Run a named preset (or `all`) and print the reproduction summary.
    Reproduce { which: String },
    /// Run the verification checklist and print the pass/fail table.
    Verify,
}

fn load_scenario(path: &PathBuf, cli: &Cli) -> Result<Scenario, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("cannot read {}: {e}", path.display());
        ExitCode::from(1)
    })?;
    let mut s = parse_scenario(&text).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        ExitCode::from(1)
    })?;
    apply_overrides(&mut s, cli);
    Ok(s)
}

fn apply_overrides(s: &mut Scenario, cli: &Cli) {
    if let Some(tmax) = cli.tmax {
        s.sweep.t_max = tmax;
    }
    if let Some(points) = cli.points {
        s.sweep.points = points;
    }
    if let Some(tol) = cli.tol {
        s.detect.tolerance = tol;
    }
    if let Some(format) = &cli.format {
        s.output.format = if format == "json" {
            OutputFormat::Json
        } else {
            OutputFormat::Csv
        };
    }
}

fn out_dir(cli: &Cli, s: &Scenario) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var_os("SUDDENLAB_OUT").map(PathBuf::from))
        .or_else(|| s.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn status_word(status: &DeathStatus) -> &'static str {
    match status {
        DeathStatus::FiniteDeath => "finite death",
        DeathStatus::Asymptotic => "asymptotic",
        DeathStatus::NeverPositive => "never positive",
        DeathStatus::Revival => "finite death with revivals",
        DeathStatus::Undetermined => "undetermined at t_max",
    }
}

fn print_report(report: &RunReport, reference: Option<(f64, &'static str)>) {
    println!("scenario: {}", report.scenario.name);
    for (label, res) in report.measure_results.iter().chain(&report.bell_results) {
        match res.t_death {
            Some(t) => println!("  {label}: {} at t = {t:.9}", status_word(&res.status)),
            None => println!("  {label}: {}", status_word(&res.status)),
        }
    }
    for (label, value) in &report.scalars {
        println!("  {label} = {value:.9}");
        if label == "max_truncation_leakage" && *value > 1e-6 {
            println!("  warning: photon truncation is leaking; raise `truncation`");
        }
    }
    for (label, intervals) in &report.revivals {
        let rendered: Vec<String> = intervals
            .iter()
            .take(4)
            .map(|(d, r)| format!("({d:.4}, {r:.4})"))
            .collect();
        println!("  {label} revivals: {}", rendered.join(" "));
    }
    if let Some((t, formula)) = reference {
        println!("  reference value: {t:.9}  [{formula}]");
    }
    for file in &report.trajectory_files {
        println!("  wrote {}", file.display());
    }
    println!("  wall time: {:.3}s", report.wall_seconds);
}

fn run_scenario(s: &Scenario, cli: &Cli, write_files: bool) -> Result<RunReport, ExitCode> {
    let dir = out_dir(cli, s);
    let dir_opt = write_files.then_some(dir.as_path());
    runner::run(s, cli.workers.max(1), dir_opt).map_err(|e| {
        eprintln!("numeric failure in scenario '{}': {e}", s.name);
        ExitCode::from(2)
    })
}

fn bell_summary(s: &Scenario, cli: &Cli) -> Result<(), ExitCode> {
    let evolver = runner::build_evolver(s).map_err(|e| {
        eprintln!("scenario error: {e}");
        ExitCode::from(1)
    })?;
    let rho0 = evolver(0.0).map_err(|e| {
        eprintln!("numeric failure: {e}");
        ExitCode::from(2)
    })?;
    if rho0.dim() != 8 {
        return Ok(());
    }
    let settings = suddenlab_core::nonlocality::tripartite_settings(
        std::f64::consts::FRAC_PI_6,
        std::f64::consts::FRAC_PI_3,
    );
    let reports = if cli.exhaustive {
        wwzb_values_exhaustive(&rho0, &settings)
    } else {
        wwzb_values(&rho0, &settings)
    }
    .map_err(|e| {
        eprintln!("numeric failure: {e}");
        ExitCode::from(2)
    })?;
    println!(
        "two-setting correlation classes at printed angles{}:",
        if cli.exhaustive { " (symmetry closure)" } else { "" }
    );
    for rep in &reports {
        println!(
            "  {:<4} expectation {:+.9}  bound {}  {}",
            rep.operator_id,
            rep.expectation,
            rep.bound,
            if rep.violated { "VIOLATED" } else { "satisfied" }
        );
    }
    let sv = svetlichny_value(
        &rho0,
        &suddenlab_core::nonlocality::svetlichny_ghz_settings(),
    )
    .map_err(|e| {
        eprintln!("numeric failure: {e}");
        ExitCode::from(2)
    })?;
    println!(
        "  {:<4} expectation {:+.9}  bound {}  {}",
        "S",
        sv.expectation,
        sv.bound,
        if sv.violated { "VIOLATED" } else { "satisfied" }
    );
    Ok(())
}

fn run() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Evolve { scenario } => {
            let s = match load_scenario(scenario, &cli) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match run_scenario(&s, &cli, true) {
                Ok(report) => {
                    if s.output.format == OutputFormat::Json {
                        println!("{}", report_to_json(&report));
                    } else {
                        print_report(&report, None);
                    }
                    ExitCode::SUCCESS
                }
                Err(code) => code,
            }
        }
        Command::Deathtime { scenario } => {
            let s = match load_scenario(scenario, &cli) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match run_scenario(&s, &cli, false) {
                Ok(report) => {
                    if s.output.format == OutputFormat::Json {
                        println!("{}", report_to_json(&report));
                    } else {
                        print_report(&report, None);
                    }
                    ExitCode::SUCCESS
                }
                Err(code) => code,
            }
        }
        Command::Bell { scenario } => {
            let s = match load_scenario(scenario, &cli) {
                Ok(s) => s,
                Err(code) => return code,
            };
            if let Err(code) = bell_summary(&s, &cli) {
                return code;
            }
            match run_scenario(&s, &cli, false) {
                Ok(report) => {
                    for (label, res) in &report.bell_results {
                        match res.t_death {
                            Some(t) => {
                                println!("  {label}: {} at t = {t:.9}", status_word(&res.status))
                            }
                            None => println!("  {label}: {}", status_word(&res.status)),
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(code) => code,
            }
        }
        Command::Reproduce { which } => {
            let names: Vec<&str> = if which == "all" {
                PRESET_NAMES.to_vec()
            } else if PRESET_NAMES.contains(&which.as_str()) {
                vec![which.as_str()]
            } else {
                eprintln!(
                    "unknown preset '{which}'; available: {}",
                    PRESET_NAMES.join(", ")
                );
                return ExitCode::from(1);
            };
            for name in names {
                let mut s = preset(name).expect("preset table is complete");
                apply_overrides(&mut s, &cli);
                match run_scenario(&s, &cli, true) {
                    Ok(report) => print_report(&report, reference_death_time(name)),
                    Err(code) => return code,
                }
            }
            ExitCode::SUCCESS
        }
        Command::Verify => {
            let rows = verify::run_all();
            print!("{}", verify::format_table(&rows));
            if cli.format.as_deref() == Some("json") {
                let dir = cli
                    .out
                    .clone()
                    .or_else(|| std::env::var_os("SUDDENLAB_OUT").map(PathBuf::from))
                    .unwrap_or_else(|| PathBuf::from("out"));
                if std::fs::create_dir_all(&dir).is_ok() {
                    let path = dir.join("verify.json");
                    if std::fs::write(&path, verify::to_json(&rows)).is_ok() {
                        println!("wrote {}", path.display());
                    }
                }
            }
            if verify::all_pass(&rows) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
    }
}

fn main() -> ExitCode {
    run()
}
