//! squeezejc - figure datasets for the Jaynes-Cummings model driven by pure
//! and mixed squeezed coherent light.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use squeezejc::verify::{run_oracle_suite, OracleReport};
use squeezejc_cli::config::{Kind, OutputKind, QMode, ScenarioConfig};
use squeezejc_cli::error::{CliError, Result};
use squeezejc_cli::format::fmt_g;
use squeezejc_cli::presets::{preset, PRESET_NAMES};
use squeezejc_cli::run::{print_report, run_scenarios};

/// Photon statistics, atomic inversion, entanglement, squeezing and Wigner
/// data for PSCS and MSCS fields.
#[derive(Parser)]
#[command(name = "squeezejc", version, about, long_about = None)]
struct Cli {
    /// Scenario config (JSON); flags below override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Fixed Fock cutoff instead of the automatic one
    #[arg(long, global = true)]
    nmax: Option<usize>,

    /// End of the lambda t axis
    #[arg(long, global = true)]
    tmax: Option<f64>,

    /// Number of time points
    #[arg(long, global = true)]
    points: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

/// Field selection for single-output commands.
#[derive(Args, Clone)]
struct FieldArgs {
    /// Field type
    #[arg(long, value_enum)]
    kind: Option<Kind>,

    /// Mean coherent photon number N_c
    #[arg(long)]
    nc: Option<f64>,

    /// Comma-separated mean squeezed photon numbers N_s
    #[arg(long, value_delimiter = ',')]
    ns: Option<Vec<f64>>,

    /// MSCS coherent weight: 'derived' or a number in [0, 1]
    #[arg(long)]
    q: Option<QMode>,
}

#[derive(Subcommand)]
enum Command {
    /// Photon counting distribution P(n)
    Pcd(FieldArgs),
    /// Atomic inversion W(t)
    Inversion(FieldArgs),
    /// Atom-field negativity N(t)
    Negativity(FieldArgs),
    /// Quadrature means and variances against N_s (MSCS)
    Quadratures(FieldArgs),
    /// Mandel Q against N_s
    Mandelq(FieldArgs),
    /// Wigner function on a phase-space grid (MSCS)
    Wigner(FieldArgs),
    /// Derived coherent weight q against N_s
    Qweight(FieldArgs),
    /// Run every output listed in the config
    Run,
    /// Reproduce the data behind one figure (fig1 .. fig17)
    Preset { name: String },
    /// Cross-check closed forms against brute-force oracles
    Verify,
}

fn base_config(cli: &Cli) -> Result<ScenarioConfig> {
    match &cli.config {
        Some(path) => ScenarioConfig::load(path),
        None => Ok(ScenarioConfig::default()),
    }
}

fn apply_globals(cli: &Cli, config: &mut ScenarioConfig) {
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    if let Some(n) = cli.nmax {
        config.n_max_override = Some(n);
    }
    if let Some(t) = cli.tmax {
        config.time_max = t;
    }
    if let Some(p) = cli.points {
        config.time_points = p;
    }
}

fn single_output(cli: &Cli, args: &FieldArgs, output: OutputKind) -> Result<()> {
    let mut config = base_config(cli)?;
    if let Some(kind) = args.kind {
        config.kind = kind;
    }
    if let Some(nc) = args.nc {
        config.n_c = nc;
    }
    if let Some(ns) = &args.ns {
        config.n_s_list = ns.clone();
    }
    if let Some(q) = args.q {
        config.q_mode = q;
    }
    config.outputs = vec![output];
    apply_globals(cli, &mut config);
    config.validate()?;
    let out = config.output_dir.clone();
    run_scenarios(&[config], None, &out)?;
    Ok(())
}

fn write_oracle_report(report: &OracleReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let mut text = String::from("kind,name,tolerance,value,passed\n");
    for c in &report.checks {
        text.push_str(&format!(
            "check,\"{}\",{},{},{}\n",
            c.name,
            fmt_g(c.tolerance),
            fmt_g(c.observed),
            c.passed
        ));
    }
    for d in &report.diagnostics {
        text.push_str(&format!("diagnostic,\"{}\",,{},\n", d.name, fmt_g(d.value)));
    }
    let path = dir.join("oracle_report.csv");
    std::fs::write(&path, text).map_err(CliError::io(&path))
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Pcd(a) => single_output(cli, a, OutputKind::Pcd),
        Command::Inversion(a) => single_output(cli, a, OutputKind::Inversion),
        Command::Negativity(a) => single_output(cli, a, OutputKind::Negativity),
        Command::Quadratures(a) => single_output(cli, a, OutputKind::Quadratures),
        Command::Mandelq(a) => single_output(cli, a, OutputKind::MandelQ),
        Command::Wigner(a) => single_output(cli, a, OutputKind::Wigner),
        Command::Qweight(a) => single_output(cli, a, OutputKind::Qweight),
        Command::Run => {
            if cli.config.is_none() {
                return Err(CliError::Config("run needs --config".into()));
            }
            let mut config = base_config(cli)?;
            apply_globals(cli, &mut config);
            config.validate()?;
            let out = config.output_dir.clone();
            run_scenarios(&[config], None, &out)?;
            Ok(())
        }
        Command::Preset { name } => {
            if cli.config.is_some() {
                return Err(CliError::Config(
                    "--config cannot be combined with preset".into(),
                ));
            }
            let mut configs = preset(name).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown preset '{name}', expected one of {}",
                    PRESET_NAMES.join(", ")
                ))
            })?;
            for c in &mut configs {
                apply_globals(cli, c);
                c.validate()?;
            }
            let out = configs[0].output_dir.clone();
            run_scenarios(&configs, Some(name), &out)?;
            Ok(())
        }
        Command::Verify => {
            let report = run_oracle_suite();
            print_report(&report);
            if let Some(dir) = &cli.out {
                write_oracle_report(&report, dir)?;
            }
            let failed = report.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::OracleFailed(failed));
            }
            Ok(())
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = execute(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
