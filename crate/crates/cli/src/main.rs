use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use twinfield::commands::{self, parse_list, parse_vector, write_json, Grid, ScanSpec};
use twinfield::serial::to_sorted_json;
use twinfield::{CliError, Overrides, Result, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "twinfield", version, about = "Lorentz covariance checks for a tachyon field on twin space")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Config file, flat `key = value` lines or JSON.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    mass: Option<f64>,
    /// Total-quanta cap of each Fock factor.
    #[arg(long, global = true)]
    nmax: Option<u32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative tolerance under which mode labels coincide.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    rel_tol: Option<f64>,
    #[arg(long, global = true)]
    degenerate_eps: Option<f64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Comma-separated boost speeds; an empty string is an empty list.
    #[arg(long, global = true, allow_hyphen_values = true)]
    speeds: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the randomized invariance checks.
    InvarianceSuite,
    /// Tabulate the Feynman propagator and its boosted values.
    PropagatorScan(ScanArgs),
    /// Contrast the ordinary and tachyonic Pauli–Jordan functions.
    PauliJordan(GridArgs),
    /// Boost a one-quantum twin state and report the mode's fate.
    BoostDemo(DemoArgs),
    /// Boost a first-order Yukawa process and compare balances.
    YukawaCovariance(YukawaArgs),
    /// Run every command with its defaults.
    RunAll,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Times, `start:stop:count` or a single value.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    /// Radii, `start:stop:count` or a single value.
    #[arg(long)]
    r: Option<String>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Boost direction `x,y,z`.
    #[arg(long, default_value = "1,1,0", allow_hyphen_values = true)]
    boost_dir: String,
    /// Also write the Pauli–Jordan contrast on the same grid.
    #[arg(long)]
    contrast: bool,
}

#[derive(Args, Debug)]
struct DemoArgs {
    /// Mode momentum `kx,ky,kz`.
    #[arg(long, default_value = "1.5,0,0", allow_hyphen_values = true)]
    k: String,
    #[arg(long, default_value_t = 0.9)]
    speed: f64,
    /// Boost direction `x,y,z`.
    #[arg(long, default_value = "1,0,0", allow_hyphen_values = true)]
    dir: String,
}

#[derive(Args, Debug)]
struct YukawaArgs {
    /// Process JSON; defaults to emission from a particle at rest.
    #[arg(long)]
    process: Option<PathBuf>,
    /// Boost direction `x,y,z`.
    #[arg(long, default_value = "1,0,0", allow_hyphen_values = true)]
    dir: String,
}

const DEFAULT_SCAN_SPEEDS: &[f64] = &[0.3, 0.6, 0.9];
const DEFAULT_YUKAWA_SPEEDS: &[f64] = &[0.3, 0.6, 0.9, 0.99];
const DEFAULT_CONTRAST_T: &str = "0.5:2:4";
const DEFAULT_CONTRAST_R: &str = "0.25:3:12";

fn speeds(g: &Global, default: &[f64]) -> Result<Vec<f64>> {
    match &g.speeds {
        Some(s) => parse_list(s),
        None => Ok(default.to_vec()),
    }
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", to_sorted_json(v));
}

fn suite(cfg: &RunConfig) -> Result<()> {
    let report = commands::invariance_suite(cfg)?;
    write_json(&cfg.out, "invariance_suite.json", &report)?;
    print_json(&report);
    commands::suite_failure(&report).map_or(Ok(()), Err)
}

fn scan(cfg: &RunConfig, g: &Global, a: &ScanArgs) -> Result<()> {
    let d = ScanSpec::default();
    let spec = ScanSpec {
        t: a.grid.t.as_deref().map(str::parse).transpose()?.unwrap_or(d.t),
        r: a.grid.r.as_deref().map(str::parse).transpose()?.unwrap_or(d.r),
        speeds: speeds(g, DEFAULT_SCAN_SPEEDS)?,
        direction: parse_vector(&a.boost_dir)?,
    };
    let (_, summary) = commands::propagator_scan(cfg, &spec)?;
    write_json(&cfg.out, "propagator_scan.json", &summary)?;
    println!(
        "propagator-scan: {} rows, {} flagged, max deviation {}, max real-part deviation {}, csv {}",
        summary.rows,
        summary.flagged,
        fmt_opt(summary.max_deviation),
        fmt_opt(summary.max_re_deviation),
        summary.csv.display()
    );
    if a.contrast {
        contrast(cfg, &spec.t, &spec.r)?;
    }
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |x| format!("{x:.3e}"))
}

fn contrast(cfg: &RunConfig, t: &Grid, r: &Grid) -> Result<()> {
    let (_, summary) = commands::pauli_jordan_contrast(cfg, t, r)?;
    write_json(&cfg.out, "pauli_jordan.json", &summary)?;
    println!(
        "pauli-jordan: {} rows; at {} spacelike points ordinary vanishes at {}, tachyonic nonzero at {}; csv {}",
        summary.rows,
        summary.spacelike,
        summary.ordinary_vanishes,
        summary.tachyonic_nonzero,
        summary.csv.display()
    );
    Ok(())
}

fn pauli_jordan(cfg: &RunConfig, a: &GridArgs) -> Result<()> {
    let t: Grid = a.t.as_deref().unwrap_or(DEFAULT_CONTRAST_T).parse()?;
    let r: Grid = a.r.as_deref().unwrap_or(DEFAULT_CONTRAST_R).parse()?;
    contrast(cfg, &t, &r)
}

fn demo(cfg: &RunConfig, a: &DemoArgs) -> Result<()> {
    let d = commands::boost_demo(cfg, parse_vector(&a.k)?, a.speed, parse_vector(&a.dir)?)?;
    write_json(&cfg.out, "boost_demo.json", &d)?;
    print!("{}", commands::describe_boost_demo(&d));
    Ok(())
}

fn yukawa(cfg: &RunConfig, g: &Global, a: &YukawaArgs) -> Result<()> {
    let p = match &a.process {
        Some(path) => commands::load_process(path)?,
        None => commands::default_process(cfg)?,
    };
    let report = commands::yukawa_covariance(&p, &speeds(g, DEFAULT_YUKAWA_SPEEDS)?, parse_vector(&a.dir)?)?;
    write_json(&cfg.out, "yukawa_covariance.json", &report)?;
    println!("{:>8} {:>12} {:>9} {:>5}", "speed", "residual", "migrated", "pass");
    for r in &report.rows {
        println!("{:>8} {:>12.3e} {:>9} {:>5}", r.speed, r.residual, r.tachyon_migrated, r.pass);
    }
    if report.pass {
        Ok(())
    } else {
        let failed: Vec<String> = report.rows.iter().filter(|r| !r.pass).map(|r| format!("speed {}", r.speed)).collect();
        Err(CliError::ChecksFailed { failed: failed.len(), total: report.rows.len(), names: failed.join(", ") })
    }
}

fn run_all(cfg: &RunConfig, g: &Global) -> Result<()> {
    let steps: Vec<(&str, Result<()>)> = vec![
        ("invariance-suite", suite(cfg)),
        (
            "propagator-scan",
            scan(cfg, g, &ScanArgs { grid: GridArgs { t: None, r: None }, boost_dir: "1,1,0".into(), contrast: false }),
        ),
        ("pauli-jordan", pauli_jordan(cfg, &GridArgs { t: None, r: None })),
        ("boost-demo", demo(cfg, &DemoArgs { k: "1.5,0,0".into(), speed: 0.9, dir: "1,0,0".into() })),
        ("yukawa-covariance", yukawa(cfg, g, &YukawaArgs { process: None, dir: "1,0,0".into() })),
    ];
    let summary: Vec<_> = steps
        .iter()
        .map(|(name, r)| match r {
            Ok(()) => json!({ "command": name, "pass": true }),
            Err(e) => json!({ "command": name, "pass": false, "error": e.to_json()["error"].clone() }),
        })
        .collect();
    let pass = steps.iter().all(|(_, r)| r.is_ok());
    write_json(&cfg.out, "run_all.json", &json!({ "commands": summary, "pass": pass }))?;
    let failed: Vec<&str> = steps.iter().filter(|(_, r)| r.is_err()).map(|(n, _)| *n).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed { failed: failed.len(), total: steps.len(), names: failed.join(", ") })
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let overrides = Overrides {
        mass: g.mass,
        n_max: g.nmax,
        label_tol: g.tol,
        rel_tol: g.rel_tol,
        degenerate_eps: g.degenerate_eps,
        seed: g.seed,
        out: g.out.clone(),
        threads: g.threads,
    };
    let cfg = RunConfig::load(g.config.as_deref(), &overrides)?;
    match &cli.command {
        Command::InvarianceSuite => suite(&cfg),
        Command::PropagatorScan(a) => scan(&cfg, g, a),
        Command::PauliJordan(a) => pauli_jordan(&cfg, a),
        Command::BoostDemo(a) => demo(&cfg, a),
        Command::YukawaCovariance(a) => yukawa(&cfg, g, a),
        Command::RunAll => run_all(&cfg, g),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", to_sorted_json(&e.to_json()));
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&CliError::Usage(e.to_string().trim().to_string())),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
