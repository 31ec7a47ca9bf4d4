//! Scenario execution: CSV datasets plus a JSON summary.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::Serialize;
use squeezejc::dynamics::{inversion_mscs_closed, inversion_series, TimeGrid};
use squeezejc::entanglement::negativity_series_ensemble;
use squeezejc::field::{
    hermite_form_report, mean_photon_mscs, mixing_weight, FieldKind, FieldParams, Pcd,
};
use squeezejc::fock::Basis;
use squeezejc::observables::{
    mandel_q, quadrature_report, quadrature_trace_oracle, wigner_displaced_parity, wigner_mscs,
    wigner_mscs_point,
};
use squeezejc::verify::OracleReport;

use crate::config::{OutputKind, QMode, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::format::{fmt_g, label};

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub n_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    pub n_max: usize,
    pub tail_mass: f64,
    pub oracle_max_deviation: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub kind: &'static str,
    pub n_c: f64,
    pub q_mode: QMode,
    pub time_max: f64,
    pub time_points: usize,
    pub tail_tol: f64,
    pub runs: Vec<RunSummary>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub scenarios: Vec<ScenarioSummary>,
}

/// Writes a header and rows with '\n' line endings and `%.12g` numbers.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_g(x)).collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    std::fs::write(path, text).map_err(CliError::io(path))
}

fn context(config: &ScenarioConfig, n_s: f64) -> String {
    format!(
        "{} n_c = {}, n_s = {}",
        config.kind.as_str(),
        label(config.n_c),
        label(n_s)
    )
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Sample points for the Wigner oracle: the coherent centre, the origin and
/// three points between them, all inside any sensible window.
fn wigner_probe_points(params: &FieldParams) -> Vec<C64> {
    let a = params.alpha;
    vec![
        a,
        C64::new(0.0, 0.0),
        a * 0.5,
        a * 0.5 + C64::new(0.0, 1.0),
        C64::new(0.3, -0.6),
    ]
}

struct Sweeps {
    quadratures: Vec<Vec<f64>>,
    mandel_q: Vec<Vec<f64>>,
    qweight: Vec<Vec<f64>>,
}

fn run_one(
    config: &ScenarioConfig,
    n_s: f64,
    out_dir: &Path,
    files: &mut Vec<String>,
    sweeps: &mut Sweeps,
) -> Result<RunSummary> {
    let ctx = context(config, n_s);
    let num = |e| CliError::numerical(ctx.clone())(e);
    let params = config.field(n_s).map_err(num)?;
    let n_max = config
        .n_max_override
        .unwrap_or_else(|| params.required_n_max(config.tail_tol));
    let basis = Basis::new(n_max).with_tail_tol(config.tail_tol);
    let pcd: Pcd = params.pcd(basis).map_err(num)?;
    let tail_mass = (1.0 - pcd.sum()).max(0.0);
    if tail_mass > config.tail_tol {
        return Err(num(squeezejc::Error::Truncation {
            n_max,
            tail: tail_mass,
            tol: config.tail_tol,
        }));
    }
    log::info!("{ctx}: n_max = {n_max}, tail mass = {tail_mass:.3e}");

    let mscs = params.kind == FieldKind::Mscs;
    let mut oracle = BTreeMap::new();
    let stem = |kind: OutputKind| {
        format!(
            "{}_{}_nc{}_ns{}.csv",
            kind.as_str(),
            config.kind.as_str(),
            label(config.n_c),
            label(n_s)
        )
    };
    let times = || TimeGrid::linspace(0.0, config.time_max, config.time_points);

    for &output in &config.outputs {
        match output {
            OutputKind::Pcd => {
                let rows: Vec<Vec<f64>> = pcd
                    .probabilities
                    .iter()
                    .enumerate()
                    .map(|(n, &p)| vec![n as f64, p])
                    .collect();
                let name = stem(output);
                write_csv(&out_dir.join(&name), &["n", "probability"], &rows)?;
                files.push(name);
                if mscs {
                    let rho = params.density(basis).map_err(num)?;
                    oracle.insert(
                        "pcd_vs_density_diagonal".into(),
                        max_dev(&pcd.probabilities, &rho.diagonal()),
                    );
                } else if let Some(r) = hermite_form_report(&params, &pcd) {
                    oracle.insert("pcd_vs_hermite_form".into(), r.order_power_max_dev);
                }
            }
            OutputKind::Inversion => {
                let grid = times().map_err(num)?;
                let series = inversion_series(&pcd, &grid);
                let values = if mscs {
                    let closed = inversion_mscs_closed(&params, &grid).map_err(num)?;
                    oracle.insert(
                        "inversion_closed_vs_series".into(),
                        closed.max_abs_diff(&series),
                    );
                    closed
                } else {
                    series
                };
                let rows: Vec<Vec<f64>> = values
                    .times
                    .iter()
                    .zip(&values.values)
                    .map(|(&t, &w)| vec![t, w])
                    .collect();
                let name = stem(output);
                write_csv(&out_dir.join(&name), &["lambda_t", "inversion"], &rows)?;
                files.push(name);
            }
            OutputKind::Negativity => {
                let grid = times().map_err(num)?;
                let components = params.components(basis).map_err(num)?;
                let series = negativity_series_ensemble(&components, &grid).map_err(num)?;
                let rows: Vec<Vec<f64>> = series
                    .times
                    .iter()
                    .zip(&series.values)
                    .map(|(&t, &v)| vec![t, v])
                    .collect();
                let name = stem(output);
                write_csv(&out_dir.join(&name), &["lambda_t", "negativity"], &rows)?;
                files.push(name);
            }
            OutputKind::Wigner => {
                let grid = wigner_mscs(&params, &config.wigner_grid.into()).map_err(num)?;
                let mut rows = Vec::with_capacity(grid.re.len() * grid.im.len());
                for (i, &x) in grid.re.iter().enumerate() {
                    for (j, &y) in grid.im.iter().enumerate() {
                        rows.push(vec![x, y, grid.values[[i, j]]]);
                    }
                }
                let name = stem(output);
                write_csv(
                    &out_dir.join(&name),
                    &["re_alpha", "im_alpha", "wigner"],
                    &rows,
                )?;
                files.push(name);
                let points = wigner_probe_points(&params);
                let rho = params.density(basis).map_err(num)?;
                let parity = wigner_displaced_parity(&rho, &points).map_err(num)?;
                let closed: Vec<f64> = points
                    .iter()
                    .map(|&b| wigner_mscs_point(&params, b))
                    .collect();
                oracle.insert(
                    "wigner_vs_displaced_parity".into(),
                    max_dev(&closed, &parity),
                );
                oracle.insert("wigner_grid_mass_deficit".into(), (1.0 - grid.mass()).abs());
            }
            OutputKind::Quadratures => {
                let r = quadrature_report(&params, 0.0).map_err(num)?;
                sweeps.quadratures.push(vec![
                    n_s,
                    params.q,
                    r.mean_x1,
                    r.mean_x2,
                    r.var_x1,
                    r.var_x2,
                    r.product,
                    r.mixture_var_x1,
                    r.mixture_var_x2,
                ]);
                let (_, (v1, v2)) = quadrature_trace_oracle(&params, 0.0, basis).map_err(num)?;
                oracle.insert(
                    "quadrature_mixture_vs_trace".into(),
                    (r.mixture_var_x1 - v1)
                        .abs()
                        .max((r.mixture_var_x2 - v2).abs()),
                );
            }
            OutputKind::MandelQ => {
                let q = mandel_q(&pcd).map_err(num)?;
                sweeps.mandel_q.push(vec![n_s, params.q, pcd.mean(), q]);
                if mscs {
                    // <n(n-1)> = q N_c^2 + (1-q)(3 N_s^2 + N_s) for the mixture
                    let m = mean_photon_mscs(&params);
                    let f2 = params.q * params.n_c * params.n_c
                        + (1.0 - params.q) * (3.0 * n_s * n_s + n_s);
                    oracle.insert("mandel_q_vs_moments".into(), (q - (f2 - m * m) / m).abs());
                }
            }
            OutputKind::Qweight => {
                let q = mixing_weight(params.alpha.re, params.zeta).map_err(num)?;
                sweeps.qweight.push(vec![n_s, q]);
            }
        }
    }

    Ok(RunSummary {
        n_s,
        q: mscs.then_some(params.q),
        n_max,
        tail_mass,
        oracle_max_deviation: oracle,
    })
}

pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<ScenarioSummary> {
    config.validate()?;
    std::fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let mut files = Vec::new();
    let mut sweeps = Sweeps {
        quadratures: Vec::new(),
        mandel_q: Vec::new(),
        qweight: Vec::new(),
    };
    let runs = config
        .n_s_list
        .iter()
        .map(|&n_s| run_one(config, n_s, out_dir, &mut files, &mut sweeps))
        .collect::<Result<Vec<_>>>()?;

    for &output in config.outputs.iter().filter(|o| o.is_sweep()) {
        let (header, rows): (&[&str], _) = match output {
            OutputKind::Quadratures => (
                &[
                    "n_s",
                    "q",
                    "mean_x1",
                    "mean_x2",
                    "var_x1",
                    "var_x2",
                    "product",
                    "mixture_var_x1",
                    "mixture_var_x2",
                ],
                &sweeps.quadratures,
            ),
            OutputKind::MandelQ => (&["n_s", "q", "mean_photon", "mandel_q"], &sweeps.mandel_q),
            OutputKind::Qweight => (&["n_s", "q_derived"], &sweeps.qweight),
            _ => unreachable!("only sweep kinds reach here"),
        };
        let name = format!(
            "{}_{}_nc{}.csv",
            output.as_str(),
            config.kind.as_str(),
            label(config.n_c)
        );
        write_csv(&out_dir.join(&name), header, rows)?;
        files.push(name);
    }

    Ok(ScenarioSummary {
        kind: config.kind.as_str(),
        n_c: config.n_c,
        q_mode: config.q_mode,
        time_max: config.time_max,
        time_points: config.time_points,
        tail_tol: config.tail_tol,
        runs,
        files,
    })
}

/// Runs every scenario into `out_dir` and writes `summary.json` there.
pub fn run_scenarios(
    configs: &[ScenarioConfig],
    preset: Option<&str>,
    out_dir: &Path,
) -> Result<Summary> {
    let scenarios = configs
        .iter()
        .map(|c| run_scenario(c, out_dir))
        .collect::<Result<Vec<_>>>()?;
    let summary = Summary {
        preset: preset.map(str::to_owned),
        scenarios,
    };
    let path = out_dir.join(SUMMARY_FILE);
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(CliError::io(&path))?;
    Ok(summary)
}

/// Prints the oracle report, one line per check and diagnostic.
pub fn print_report(report: &OracleReport) {
    for c in &report.checks {
        println!(
            "{} {} (observed {:.3e}, tolerance {:.0e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.observed,
            c.tolerance
        );
    }
    for d in &report.diagnostics {
        println!("DIAG {}: {:.6e}", d.name, d.value);
    }
}
