//! `lambda-ob`: steady states, spectra, bistability curves, hysteresis
//! scans and parameter sweeps from a TOML run configuration.
//!
//! Data goes to files (or stdout with `--output -`); diagnostics go to
//! stderr. Exit codes: 0 success, 2 configuration error, 3 solver failure,
//! 4 I/O error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lambda_ob::bloch::{steady_state, weak_probe_coherence, Drive};
use lambda_ob::cavity::{hysteresis_scan, jumps, trace_ob_curve, Direction, JumpCriteria};
use lambda_ob::io::{
    write_curve_csv, write_hysteresis_csv, write_json, write_point_curves, write_spectrum_csv, write_sweep_summary,
    CurveSidecar, RunConfig, SteadyReport,
};
use lambda_ob::par::{default_workers, WORKERS_ENV};
use lambda_ob::sweep::{figure_preset, run_sweep, Provenance, PRESET_NAMES};
use lambda_ob::{Error, Result};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "lambda-ob", version, about = "Optical bistability of a Λ-type EIT medium in a ring cavity")]
struct Cli {
    /// TOML run configuration; every key is optional.
    #[arg(long, short, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override a configuration value, e.g. `--set cavity.c=40`. Repeatable.
    #[arg(long = "set", global = true, value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,

    /// Worker threads for sweeps.
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady density matrix at the configured drive, as JSON.
    Steady {
        /// Output file; defaults to stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Weak-probe response over the Δ_P grid of `[spectrum]`.
    Spectrum {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Input-output curve over the x grid, plus a JSON sidecar.
    Curve {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Adiabatic ramp of the input field following `[scan]`.
    Hysteresis {
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Cartesian parameter sweep.
    Sweep {
        /// Start from a figure preset instead of the config file.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Write the curve of every point.
        #[arg(long)]
        curves: bool,
    },
    /// List presets, or emit one as a config file.
    Preset {
        name: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config_error() {
        2
    } else if e.is_solver_failure() {
        3
    } else {
        4
    }
}

fn preset_config(name: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::from_sweep_spec(&figure_preset(name)?);
    cfg.output.prefix = name.to_string();
    Ok(cfg)
}

fn load_config(cli: &Cli, preset: Option<&str>) -> Result<RunConfig> {
    let cfg = match (preset, &cli.config) {
        (Some(name), _) => RunConfig::from_toml_str(&preset_config(name)?.to_toml_string()?, &cli.overrides)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
            RunConfig::from_toml_str(&text, &cli.overrides)?
        }
        (None, None) => RunConfig::from_toml_str("", &cli.overrides)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// `-` is stdout; anything else is a file whose parent is created.
fn open_output(path: &Path) -> Result<Box<dyn Write>> {
    if path == Path::new("-") {
        return Ok(Box::new(std::io::stdout().lock()));
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(Box::new(BufWriter::new(File::create(path)?)))
}

fn announce(path: &Path) {
    if path != Path::new("-") {
        eprintln!("wrote {}", path.display());
    }
}

#[derive(Serialize)]
struct SweepSidecar<'a> {
    provenance: &'a Provenance,
    config: &'a RunConfig,
    failed_points: usize,
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Steady { output } => {
            let cfg = load_config(&cli, None)?;
            let drive = Drive::new(cfg.drive.omega_p, cfg.drive.omega_c);
            let sol = steady_state(&cfg.atom, &drive, None)?;
            let path = output.clone().unwrap_or_else(|| "-".into());
            write_json(open_output(&path)?, &SteadyReport::from(&sol))?;
            announce(&path);
        }
        Command::Spectrum { output } => {
            let cfg = load_config(&cli, None)?;
            let rows: Vec<_> = cfg
                .spectrum
                .points()?
                .into_iter()
                .map(|d| {
                    let atom = lambda_ob::bloch::AtomParams { delta_p: d, ..cfg.atom };
                    (d, weak_probe_coherence(&atom, cfg.drive.omega_c))
                })
                .collect();
            let path = output.clone().unwrap_or_else(|| cfg.output.path("spectrum.csv"));
            write_spectrum_csv(open_output(&path)?, &rows)?;
            announce(&path);
        }
        Command::Curve { output } => {
            let cfg = load_config(&cli, None)?;
            let curve = trace_ob_curve(&cfg.atom, cfg.drive.omega_c, &cfg.cavity, &cfg.grid.points())?;
            let path = output.clone().unwrap_or_else(|| cfg.output.path("curve.csv"));
            write_curve_csv(open_output(&path)?, &curve)?;
            announce(&path);
            let sidecar = if path == Path::new("-") {
                cfg.output.path("curve.json")
            } else {
                path.with_extension("json")
            };
            write_json(
                open_output(&sidecar)?,
                &CurveSidecar {
                    turning_points: &curve.turning_points,
                    degenerate_points: &curve.degenerate_points,
                    thresholds: &curve.thresholds,
                    stable_branches: curve.stable_branch_count(),
                    config: &cfg,
                },
            )?;
            announce(&sidecar);
            eprintln!(
                "{} turning points, {} stable branches",
                curve.turning_points.len(),
                curve.stable_branch_count()
            );
        }
        Command::Hysteresis { output } => {
            let cfg = load_config(&cli, None)?;
            let scan = hysteresis_scan(
                &cfg.atom,
                cfg.drive.omega_c,
                &cfg.cavity,
                &cfg.scan.ramp()?,
                cfg.scan.up_then_down,
            )?;
            let path = output.clone().unwrap_or_else(|| cfg.output.path("hysteresis.csv"));
            write_hysteresis_csv(open_output(&path)?, &scan)?;
            announce(&path);
            let unconverged = scan.iter().filter(|p| !p.converged).count();
            if unconverged > 0 {
                eprintln!("warning: {unconverged} scan points did not converge");
            }
            for j in jumps(&scan, &JumpCriteria::default()) {
                let arrow = if j.direction == Direction::Up { "up" } else { "down" };
                eprintln!(
                    "jump {arrow} between y = {} and {}: x {} -> {}",
                    j.y_before, j.y_after, j.x_before, j.x_after
                );
            }
        }
        Command::Sweep { preset, curves } => {
            let mut cfg = load_config(&cli, preset.as_deref())?;
            cfg.sweep.outputs.curve |= *curves;
            let workers = cli.workers.filter(|&n| n > 0).unwrap_or_else(default_workers);
            let res = run_sweep(&cfg.sweep_spec(), workers)?;
            std::fs::create_dir_all(&cfg.output.dir)?;
            let summary = cfg.output.path("sweep.csv");
            write_sweep_summary(open_output(&summary)?, &res)?;
            announce(&summary);
            let n = write_point_curves(&cfg.output.dir, &cfg.output.prefix, &res.records)?;
            if n > 0 {
                eprintln!("wrote {n} curve files to {}", cfg.output.dir.display());
            }
            let failed = res.records.iter().filter(|r| r.error.is_some()).count();
            let sidecar = cfg.output.path("sweep.json");
            write_json(
                open_output(&sidecar)?,
                &SweepSidecar {
                    provenance: &res.provenance,
                    config: &cfg,
                    failed_points: failed,
                },
            )?;
            announce(&sidecar);
            for (k, r) in res.records.iter().enumerate() {
                if let Some(e) = &r.error {
                    eprintln!("warning: point {k} {:?} failed: {e}", r.values);
                }
            }
        }
        Command::Preset { name: None, output } => {
            let mut out = open_output(output.as_deref().unwrap_or(Path::new("-")))?;
            for name in PRESET_NAMES {
                writeln!(out, "{name}")?;
            }
            out.flush()?;
        }
        Command::Preset { name: Some(name), output } => {
            let mut cfg = preset_config(name)?;
            cfg.sweep.outputs.curve = true;
            let path = output.clone().unwrap_or_else(|| "-".into());
            let mut out = open_output(&path)?;
            out.write_all(cfg.to_toml_string()?.as_bytes())?;
            out.flush()?;
            announce(&path);
        }
    }
    Ok(())
}
