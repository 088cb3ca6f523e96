//! The `run`, `compare` and `validate` commands.
//!
//! Exit codes: 0 converged or feasible, 1 invalid input or infeasible grid,
//! 2 time limit reached without convergence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::constraints::{validate_grid, ConstraintReport, RawGrid, Tolerances};
use crate::control::{ControlMode, Controller};
use crate::error::{Error, Result};
use crate::io::{self, MetricsDocument};
use crate::sim::{compare_modes, convergence_time, run, summarize};
use crate::surface::SurfaceConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_TIMEOUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "morphsurf",
    version,
    about = "Morphing-surface object conveyance simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one scenario; writes trace.csv and metrics.json.
    Run {
        scenario: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Run a scenario under several controllers and seeds.
    Compare {
        scenario: PathBuf,
        /// Comma-separated modes, e.g. wave,distributed,funnel.
        #[arg(long, default_value = "wave,distributed,funnel")]
        modes: String,
        /// Inclusive range `1..20` or a comma list `1,4,9`.
        #[arg(long, default_value = "1")]
        seeds: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Check a scenario, grid CSV or trace CSV against the surface
    /// constraints.
    Validate { path: PathBuf },
}

/// Parses argv and dispatches; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    match cli.command {
        Command::Run { scenario, out: dir } => cmd_run(&scenario, &dir, &mut out, &mut err),
        Command::Compare {
            scenario,
            modes,
            seeds,
            out: dir,
        } => {
            let parsed = parse_modes(&modes).and_then(|m| parse_seeds(&seeds).map(|s| (m, s)));
            match parsed {
                Ok((modes, seeds)) => {
                    cmd_compare(&scenario, &modes, &seeds, &dir, &mut out, &mut err)
                }
                Err(e) => fail(&mut err, &e),
            }
        }
        Command::Validate { path } => cmd_validate(&path, &mut out, &mut err),
    }
}

fn fail(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_INVALID
}

/// `wave,distributed` style mode list.
pub fn parse_modes(text: &str) -> Result<Vec<ControlMode>> {
    let modes = text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<Vec<ControlMode>>>()?;
    if modes.is_empty() {
        return Err(Error::InvalidControl("--modes lists no mode".into()));
    }
    Ok(modes)
}

/// `a..b` (inclusive), `a..=b`, or a comma list of seeds.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::InvalidScenario(format!("--seeds: cannot parse `{text}`"));
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    let seeds = text
        .split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    Ok(seeds)
}

pub fn cmd_run(scenario: &Path, out_dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match try_run(scenario, out_dir, out) {
        Ok(code) => code,
        Err(e) => fail(err, &e),
    }
}

fn try_run(scenario: &Path, out_dir: &Path, out: &mut dyn Write) -> Result<i32> {
    let sc = io::load_scenario(scenario)?;
    let result = run(&sc)?;
    fs::create_dir_all(out_dir)?;
    io::save_trace(
        &result.trace,
        &sc.final_surface(),
        &out_dir.join("trace.csv"),
    )?;
    let doc = MetricsDocument::new(result.metrics, &sc);
    fs::write(out_dir.join("metrics.json"), doc.to_json()?)?;
    let m = &doc.metrics;
    match m.convergence_time {
        Some(t) if m.converged => {
            writeln!(
                out,
                "{}: converged at {t:.1} s (run ended at {:.1} s)",
                m.mode, m.final_time
            )?;
            Ok(EXIT_OK)
        }
        _ => {
            writeln!(out, "{}: not converged by t_max = {} s", m.mode, sc.t_max)?;
            Ok(EXIT_TIMEOUT)
        }
    }
}

pub fn cmd_compare(
    scenario: &Path,
    modes: &[ControlMode],
    seeds: &[u64],
    out_dir: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match try_compare(scenario, modes, seeds, out_dir, out) {
        Ok(()) => EXIT_OK,
        Err(e) => fail(err, &e),
    }
}

fn try_compare(
    scenario: &Path,
    modes: &[ControlMode],
    seeds: &[u64],
    out_dir: &Path,
    out: &mut dyn Write,
) -> Result<()> {
    let base = io::load_scenario(scenario)?;
    for &mode in modes {
        base.with_mode(mode).validate()?;
    }
    let results = compare_modes(&base, modes, seeds);
    fs::create_dir_all(out_dir)?;
    for &mode in modes {
        let entries: Vec<serde_json::Value> = results
            .iter()
            .filter(|(m, _, _)| *m == mode)
            .map(|(_, seed, res)| match res {
                Ok(metrics) => serde_json::to_value(metrics).unwrap_or_default(),
                Err(e) => serde_json::json!({ "seed": seed, "error": e.to_string() }),
            })
            .collect();
        let mut text = serde_json::to_string_pretty(&entries)?;
        text.push('\n');
        fs::write(out_dir.join(format!("{mode}.json")), text)?;
    }
    let table = io::summary_csv(&summarize(&results));
    fs::write(out_dir.join("summary.csv"), &table)?;
    write!(out, "{table}")?;
    Ok(())
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match try_validate(path, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_INVALID,
        Err(e) => fail(err, &e),
    }
}

/// Returns whether every checked grid is feasible.
fn try_validate(path: &Path, out: &mut dyn Write) -> Result<bool> {
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        return validate_scenario(path, out);
    }
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with("t,") {
        validate_trace(path, out)
    } else {
        validate_grid_file(&text, out)
    }
}

fn report(out: &mut dyn Write, label: &str, rep: &ConstraintReport) -> Result<bool> {
    if rep.is_feasible() {
        writeln!(out, "{label}: feasible")?;
    } else {
        writeln!(out, "{label}:\n{rep}")?;
    }
    Ok(rep.is_feasible())
}

/// A scenario is checked by building its first commanded grid.
fn validate_scenario(path: &Path, out: &mut dyn Write) -> Result<bool> {
    let sc = io::load_scenario(path)?;
    let mut controller = Controller::new(sc.control, sc.surface)?;
    let command = controller.tick(&sc.initial_objects(), &sc.surface)?;
    let rep = validate_grid(&command.grid, &sc.surface, Tolerances::default())?;
    report(
        out,
        &format!("{} (initial {} grid)", path.display(), sc.control.mode),
        &rep,
    )
}

fn validate_grid_file(text: &str, out: &mut dyn Write) -> Result<bool> {
    let (meta, grid) = io::read_grid(text.as_bytes())?;
    let rows = grid.rows();
    let (n, m) = (rows[0].len() - 1, rows.len() - 1);
    let need = |v: Option<f64>, key: &str| {
        v.ok_or_else(|| Error::Parse {
            source_name: "grid".into(),
            message: format!("missing `{key}=` in the `#` metadata line"),
        })
    };
    let cfg = SurfaceConfig::new(
        n,
        m,
        need(meta.width, "W")?,
        need(meta.length, "L")?,
        need(meta.stroke, "l")?,
        (1, 1),
    )?;
    let rep = validate_grid(&grid, &cfg, Tolerances::default())?;
    report(out, &format!("S({n}, {m}) grid"), &rep)
}

/// Every row of a trace is checked; the surface comes from the
/// `metrics.json` written next to it. The convergence time is recomputed
/// and compared with the stored value.
fn validate_trace(path: &Path, out: &mut dyn Write) -> Result<bool> {
    let metrics_path = path.with_file_name("metrics.json");
    let doc = MetricsDocument::load(&metrics_path)?;
    let sc = doc.parameters.to_scenario()?;
    let cfg = sc.final_surface();
    let (layout, trace) = io::load_trace(path)?;
    if (layout.n, layout.m) != (cfg.n, cfg.m) {
        return Err(Error::InvalidScenario(format!(
            "trace is for S({}, {}) but metrics.json describes S({}, {})",
            layout.n, layout.m, cfg.n, cfg.m
        )));
    }
    let mut feasible = true;
    let mut bad_rows = 0usize;
    for row in &trace.rows {
        let rep = validate_grid(&RawGrid::from(&row.grid), &cfg, Tolerances::default())?;
        if !rep.is_feasible() {
            if bad_rows == 0 {
                writeln!(out, "t = {}:\n{rep}", row.t)?;
            }
            bad_rows += 1;
            feasible = false;
        }
    }
    writeln!(
        out,
        "{}: {} rows, {} infeasible",
        path.display(),
        trace.rows.len(),
        bad_rows
    )?;
    if doc.metrics.converged {
        let recomputed = convergence_time(&trace, &cfg, doc.settle_window);
        if recomputed != doc.metrics.convergence_time {
            writeln!(
                out,
                "convergence time mismatch: trace gives {recomputed:?}, metrics.json has {:?}",
                doc.metrics.convergence_time
            )?;
            feasible = false;
        }
    }
    Ok(feasible)
}
