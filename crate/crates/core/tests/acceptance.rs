//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every criterion reports even when an
//! earlier one fails. The process exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use rand::{rngs::StdRng, Rng, SeedableRng};

use squeezejc::dynamics::{
    evolution_blocks, inversion_mscs_closed, inversion_series, inversion_trace, TimeGrid,
};
use squeezejc::entanglement::{negativity_series, negativity_series_ensemble};
use squeezejc::field::{mixing_weight, mscs_pcd, DensityMatrix, FieldParams, Pcd};
use squeezejc::fock::{FockVector, SqueezeParam};
use squeezejc::observables::{
    mandel_q, quadrature_report, quadrature_trace_oracle, wigner_displaced_parity, wigner_mscs,
    wigner_mscs_point, wigner_mscs_point_unnormalized_form, PhaseSpaceSpec,
};
use squeezejc::verify::unitarity_checks;
use squeezejc::Result;

const FIGURE_NS: [f64; 6] = [0.0, 1.0, 2.0, 5.0, 8.0, 10.0];
const PUBLISHED_Q: [f64; 6] = [1.00, 0.70, 0.58, 0.41, 0.33, 0.30];
const Q_TOL: f64 = 0.005;
const PCD_SUM_TOL: f64 = 1e-9;
const INVERSION_TOL: f64 = 1e-8;
const PROPAGATOR_TOL: f64 = 1e-8;
const NEGATIVITY_ZERO_TOL: f64 = 1e-10;
const NEGATIVITY_BOUND_SLACK: f64 = 1e-9;
const FOCK_NEGATIVITY_TOL: f64 = 1e-8;
const PSCS_PEAK_RATIO: f64 = 1.8;
const MSCS_PEAK_RATIO: f64 = 1.05;
const QUADRATURE_ORACLE_TOL: f64 = 1e-8;
const POISSON_Q_TOL: f64 = 1e-9;
const WIGNER_MASS_TOL: f64 = 0.01;
const WIGNER_FLOOR: f64 = -1e-9;
const WIGNER_ORACLE_TOL: f64 = 1e-6;
const TAIL_TOL: f64 = 1e-12;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Result<Verdict> {
    Ok(Verdict { passed, detail })
}

/// The twelve parameter sets behind the time-resolved and PCD figures:
/// N_c = 20 with derived q, N_c = 10 with q = 0.8.
fn figure_sets() -> Result<Vec<FieldParams>> {
    let mut sets = Vec::new();
    for &n_s in &FIGURE_NS {
        sets.push(FieldParams::pscs(20.0, n_s)?);
        sets.push(FieldParams::mscs_derived(20.0, n_s)?);
        sets.push(FieldParams::pscs(10.0, n_s)?);
        sets.push(FieldParams::mscs(10.0, n_s, 0.8)?);
    }
    Ok(sets)
}

fn c1_q_weights() -> Result<Verdict> {
    let mut worst = 0.0f64;
    let mut values = Vec::new();
    for (&n_s, &published) in FIGURE_NS.iter().zip(&PUBLISHED_Q) {
        let q = mixing_weight(20f64.sqrt(), SqueezeParam::from_mean_photons(n_s)?)?;
        worst = worst.max((q - published).abs());
        values.push(format!("{q:.4}"));
    }
    verdict(
        worst <= Q_TOL,
        format!(
            "q = [{}], max |q - published| = {worst:.4} (tol {Q_TOL})",
            values.join(", ")
        ),
    )
}

fn c2_pcd_normalization() -> Result<Verdict> {
    let mut worst = 0.0f64;
    let mut largest_n_max = 0;
    for p in figure_sets()? {
        let basis = p.auto_basis(TAIL_TOL);
        largest_n_max = largest_n_max.max(basis.n_max);
        worst = worst.max((p.pcd(basis)?.sum() - 1.0).abs());
    }
    verdict(
        worst <= PCD_SUM_TOL,
        format!("24 PCDs, max |sum - 1| = {worst:.2e} (tol {PCD_SUM_TOL:.0e}), n_max up to {largest_n_max}"),
    )
}

fn c3_inversion_routes() -> Result<Verdict> {
    let grid = TimeGrid::linspace(0.0, 50.0, 501)?;
    let mut worst = 0.0f64;
    let mut dims = Vec::new();
    for n_s in [1.0, 5.0] {
        let p = FieldParams::mscs_derived(20.0, n_s)?;
        let basis = p.auto_basis(TAIL_TOL);
        dims.push(basis.n_max);
        let closed = inversion_mscs_closed(&p, &grid)?;
        let series = inversion_series(&mscs_pcd(&p, basis.n_max), &grid);
        let trace = inversion_trace(&p.density(basis)?, &grid)?;
        worst = worst
            .max(closed.max_abs_diff(&series))
            .max(closed.max_abs_diff(&trace))
            .max(series.max_abs_diff(&trace));
    }
    verdict(
        worst <= INVERSION_TOL,
        format!(
            "closed/series/trace sup-norm {worst:.2e} (tol {INVERSION_TOL:.0e}), n_max {dims:?}"
        ),
    )
}

fn c4_propagator() -> Result<Verdict> {
    let mut passed = true;
    let mut oracle = 0.0f64;
    let mut unitary = 0.0f64;
    for t in [1.0, 3.0, 7.0] {
        let [a, b] = unitarity_checks(&evolution_blocks(t, 60), t);
        passed &= a.passed && b.passed && a.tolerance == PROPAGATOR_TOL;
        oracle = oracle.max(a.observed);
        unitary = unitary.max(b.observed);
    }
    verdict(
        passed,
        format!("blocks vs expm {oracle:.2e} (tol 1e-8), U^dag U - I {unitary:.2e} (tol 1e-10)"),
    )
}

fn c5_negativity() -> Result<Verdict> {
    let grid = TimeGrid::linspace(0.0, 50.0, 251)?;
    let mut at_zero = 0.0f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in figure_sets()? {
        let series = negativity_series_ensemble(&p.components(p.auto_basis(TAIL_TOL))?, &grid)?;
        at_zero = at_zero.max(series.values[0]);
        for &v in &series.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let fine = TimeGrid::linspace(0.0, 10.0, 201)?;
    let mut fock = 0.0f64;
    for n in [0usize, 3] {
        let rho = DensityMatrix::from_pure(&FockVector::basis_state(n, n + 3));
        let series = negativity_series(&rho, &fine)?;
        for (t, v) in series.times.iter().zip(&series.values) {
            let exact = (2.0 * t * ((n + 1) as f64).sqrt()).sin().abs() / 2.0;
            fock = fock.max((v - exact).abs());
        }
    }
    verdict(
        at_zero < NEGATIVITY_ZERO_TOL
            && lo >= 0.0
            && hi <= 0.5 + NEGATIVITY_BOUND_SLACK
            && fock <= FOCK_NEGATIVITY_TOL,
        format!(
            "max N(0) {at_zero:.1e}, range [{lo:.3e}, {hi:.4}] over 24 states, Fock n=0,3 dev {fock:.1e}"
        ),
    )
}

fn pcd(p: &FieldParams) -> Result<Pcd> {
    p.pcd(p.auto_basis(TAIL_TOL))
}

fn c6a_pscs_localization() -> Result<Verdict> {
    let ratio =
        pcd(&FieldParams::pscs(20.0, 1.0)?)?.peak() / pcd(&FieldParams::pscs(20.0, 0.0)?)?.peak();
    verdict(
        ratio >= PSCS_PEAK_RATIO,
        format!("PSCS peak(N_s=1)/peak(N_s=0) = {ratio:.4} (need >= {PSCS_PEAK_RATIO})"),
    )
}

fn c6b_mscs_no_localization() -> Result<Verdict> {
    // the coherent peak sits within N_c +/- 2 sqrt(N_c); the squeezed vacuum
    // adds a separate spike at n = 0 that is not a localized coherent peak
    let window = |d: &Pcd| {
        let (lo, hi) = (
            (20.0 - 2.0 * 20f64.sqrt()) as usize,
            (20.0 + 2.0 * 20f64.sqrt()) as usize,
        );
        d.probabilities[lo..=hi].iter().copied().fold(0.0, f64::max)
    };
    let mixed = pcd(&FieldParams::mscs_derived(20.0, 1.0)?)?;
    let coherent = pcd(&FieldParams::mscs_derived(20.0, 0.0)?)?;
    let ratio = window(&mixed) / window(&coherent);
    verdict(
        ratio <= MSCS_PEAK_RATIO,
        format!(
            "MSCS coherent-window peak ratio {ratio:.4} (need <= {MSCS_PEAK_RATIO}); P(0) spike {:.4}",
            mixed.probabilities[0]
        ),
    )
}

fn c6c_collapse_minimum() -> Result<Verdict> {
    let grid = TimeGrid::linspace(5.0, 12.0, 701)?;
    let mut minima = Vec::new();
    for n_s in [0.0, 1.0, 2.0, 5.0] {
        let p = FieldParams::pscs(20.0, n_s)?;
        let series = negativity_series_ensemble(&p.components(p.auto_basis(TAIL_TOL))?, &grid)?;
        minima.push(series.min_in(5.0, 12.0).unwrap_or(f64::NAN));
    }
    let increasing = minima.windows(2).all(|w| w[1] > w[0]);
    verdict(
        increasing,
        format!("min N(t) on [5, 12] for N_s = 0, 1, 2, 5: {minima:.4?}"),
    )
}

fn c7_quadratures() -> Result<Verdict> {
    let mut ordered = true;
    let mut min_product = f64::INFINITY;
    let mut oracle = 0.0f64;
    let mut printed = 0.0f64;
    for n_s in [0.5, 1.0, 2.0, 5.0] {
        let p = FieldParams::mscs(10.0, n_s, 0.8)?;
        let rep = quadrature_report(&p, 0.0)?;
        ordered &= rep.var_x1 < 0.25 && rep.var_x2 > 0.25;
        min_product = min_product.min(rep.product);
        let (_, (v1, v2)) = quadrature_trace_oracle(&p, 0.0, p.auto_basis(1e-14))?;
        oracle = oracle
            .max((rep.mixture_var_x1 - v1).abs())
            .max((rep.mixture_var_x2 - v2).abs());
        printed = printed
            .max((rep.var_x1 - v1).abs())
            .max((rep.var_x2 - v2).abs());
    }
    verdict(
        ordered && min_product >= 0.25 - 1e-10 && oracle <= QUADRATURE_ORACLE_TOL,
        format!(
            "var_x1 < 1/4 < var_x2: {ordered}, min product {min_product:.4}, mixture vs trace {oracle:.1e}; \
             component-only variances off by up to {printed:.3}"
        ),
    )
}

fn c8_mandel_q() -> Result<Verdict> {
    let mut min_q = f64::INFINITY;
    for n_c in [10.0, 20.0, 30.0] {
        for n_s in [0.5, 1.0, 2.0, 5.0, 8.0, 10.0] {
            min_q = min_q.min(mandel_q(&pcd(&FieldParams::mscs(n_c, n_s, 0.8)?)?)?);
        }
    }
    let poisson = mandel_q(&pcd(&FieldParams::mscs(20.0, 0.0, 1.0)?)?)?;
    verdict(
        min_q > 0.0 && poisson.abs() <= POISSON_Q_TOL,
        format!("min Q over 18 MSCS {min_q:.4}, Poisson Q {poisson:.1e}"),
    )
}

fn c9_wigner() -> Result<Verdict> {
    let p = FieldParams::mscs(10.0, 2.0, 0.8)?;
    let spec = PhaseSpaceSpec::default();
    let grid = wigner_mscs(&p, &spec)?;
    let mass = grid.mass();
    let floor = grid.min();
    let mut rng = StdRng::seed_from_u64(2024);
    let points: Vec<C64> = (0..25)
        .map(|_| {
            C64::new(
                grid.re[rng.random_range(0..grid.re.len())],
                grid.im[rng.random_range(0..grid.im.len())],
            )
        })
        .collect();
    let oracle = wigner_displaced_parity(&p.density(p.auto_basis(TAIL_TOL))?, &points)?;
    let mut worst = 0.0f64;
    let mut printed = 0.0f64;
    for (b, o) in points.iter().zip(&oracle) {
        worst = worst.max((wigner_mscs_point(&p, *b) - o).abs());
        printed = printed.max((wigner_mscs_point_unnormalized_form(&p, *b) - o).abs());
    }
    verdict(
        (mass - 1.0).abs() <= WIGNER_MASS_TOL
            && floor >= WIGNER_FLOOR
            && worst <= WIGNER_ORACLE_TOL,
        format!(
            "mass {mass:.6}, min {floor:.1e}, 25-point oracle dev {worst:.1e}; \
             unnormalized squeezed term off by up to {printed:.3}"
        ),
    )
}

type Criterion = (
    &'static str,
    &'static str,
    Duration,
    fn() -> Result<Verdict>,
);

fn main() {
    let criteria: [Criterion; 11] = [
        (
            "1",
            "q-weight reproduction",
            Duration::from_secs(1),
            c1_q_weights,
        ),
        (
            "2",
            "PCD normalization",
            Duration::from_secs(5),
            c2_pcd_normalization,
        ),
        (
            "3",
            "inversion routes agree",
            Duration::from_secs(120),
            c3_inversion_routes,
        ),
        (
            "4",
            "propagator vs oracle",
            Duration::from_secs(30),
            c4_propagator,
        ),
        (
            "5",
            "negativity properties",
            Duration::from_secs(60),
            c5_negativity,
        ),
        (
            "6a",
            "PSCS peak localization",
            Duration::from_secs(100),
            c6a_pscs_localization,
        ),
        (
            "6b",
            "MSCS no localization",
            Duration::from_secs(100),
            c6b_mscs_no_localization,
        ),
        (
            "6c",
            "PSCS collapse minimum rises",
            Duration::from_secs(100),
            c6c_collapse_minimum,
        ),
        (
            "7",
            "quadrature squeezing",
            Duration::from_secs(10),
            c7_quadratures,
        ),
        (
            "8",
            "Mandel Q positivity",
            Duration::from_secs(10),
            c8_mandel_q,
        ),
        (
            "9",
            "Wigner validation",
            Duration::from_secs(120),
            c9_wigner,
        ),
    ];
    let mut failures = 0;
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok(v) => (v.passed && elapsed <= budget, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "{} criterion {id:<3} {title}: {detail} [{:.2} s of {} s]",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
