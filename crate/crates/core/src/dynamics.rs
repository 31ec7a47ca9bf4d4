//! Resonant Jaynes-Cummings evolution with the atom initially excited.
//!
//! Time is the dimensionless product lambda t throughout. In the atom-major
//! basis (e, g) the propagator is
//!
//! ```text
//! U(t) = [[C, S'], [S, C']]
//! C  = cos(t sqrt(a a^dag))                C' = cos(t sqrt(a^dag a))
//! S  = -i a^dag sin(t sqrt(a a^dag)) / sqrt(a a^dag)
//! S' = -i a     sin(t sqrt(a^dag a)) / sqrt(a^dag a)
//! ```
//!
//! and S^dag = -S', so the excited initial state evolves to
//! [[C rho C, -C rho S'], [S rho C, -S rho S']].

use ndarray::{s, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::field::{DensityMatrix, FieldKind, FieldParams, Pcd};
use crate::fock::{ln_factorials, FockVector};
use crate::linalg::{annihilation, creation, dagger, expm, hermitian_deviation, trace};

pub const DEFAULT_T_MAX: f64 = 50.0;
pub const DEFAULT_TIME_POINTS: usize = 2001;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Increasing, nonnegative sample times lambda t.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    points: Vec<f64>,
}

impl TimeGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.first().is_some_and(|&t| !(t >= 0.0)) {
            return Err(Error::InvalidParameter(
                "time grid must start at t >= 0".into(),
            ));
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "time grid must be strictly increasing".into(),
            ));
        }
        Ok(Self { points })
    }

    /// `count` evenly spaced points on [t_min, t_max].
    pub fn linspace(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidParameter(
                "time grid needs at least 2 points".into(),
            ));
        }
        let step = (t_max - t_min) / (count - 1) as f64;
        Self::new((0..count).map(|k| t_min + step * k as f64).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self::linspace(0.0, DEFAULT_T_MAX, DEFAULT_TIME_POINTS).expect("default grid is valid")
    }
}

/// A scalar observable sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl TimeSeries {
    pub fn max_abs_diff(&self, other: &TimeSeries) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_in(&self, lo: f64, hi: f64) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t >= lo && **t <= hi)
            .map(|(_, v)| *v)
            .reduce(f64::min)
    }
}

/// Structured form of the four propagator blocks on `n_max` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionBlocks {
    /// cos(t sqrt(n+1)), the diagonal of C.
    pub cos_upper: Vec<f64>,
    /// cos(t sqrt(n)), the diagonal of C'.
    pub cos_lower: Vec<f64>,
    /// sin(t sqrt(n+1)) / sqrt(n+1): S = -i a^dag diag(this).
    pub sinc_upper: Vec<f64>,
    /// sin(t sqrt(n)) / sqrt(n), equal to t at n = 0: S' = -i a diag(this).
    pub sinc_lower: Vec<f64>,
}

pub fn evolution_blocks(t: f64, n_max: usize) -> EvolutionBlocks {
    let sinc = |x: f64| {
        if x == 0.0 {
            t
        } else {
            (t * x).sin() / x
        }
    };
    EvolutionBlocks {
        cos_upper: (0..n_max)
            .map(|n| (t * ((n + 1) as f64).sqrt()).cos())
            .collect(),
        cos_lower: (0..n_max).map(|n| (t * (n as f64).sqrt()).cos()).collect(),
        sinc_upper: (0..n_max).map(|n| sinc(((n + 1) as f64).sqrt())).collect(),
        sinc_lower: (0..n_max).map(|n| sinc((n as f64).sqrt())).collect(),
    }
}

impl EvolutionBlocks {
    pub fn n_max(&self) -> usize {
        self.cos_upper.len()
    }

    /// Dense (C, S, C', S').
    pub fn dense(&self) -> [Array2<C64>; 4] {
        let n = self.n_max();
        let c = Array2::from_diag(&ndarray::Array1::from_iter(
            self.cos_upper.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let c_prime = Array2::from_diag(&ndarray::Array1::from_iter(
            self.cos_lower.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let diag_upper = Array2::from_diag(&ndarray::Array1::from_iter(
            self.sinc_upper.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let diag_lower = Array2::from_diag(&ndarray::Array1::from_iter(
            self.sinc_lower.iter().map(|&x| C64::new(x, 0.0)),
        ));
        let s = creation(n).dot(&diag_upper).mapv(|z| -I * z);
        let s_prime = annihilation(n).dot(&diag_lower).mapv(|z| -I * z);
        [c, s, c_prime, s_prime]
    }

    /// U(t) = [[C, S'], [S, C']] on the 2 n_max atom-major basis.
    pub fn propagator(&self) -> Array2<C64> {
        let n = self.n_max();
        let [c, s, c_prime, s_prime] = self.dense();
        let mut u = Array2::zeros((2 * n, 2 * n));
        u.slice_mut(s![..n, ..n]).assign(&c);
        u.slice_mut(s![..n, n..]).assign(&s_prime);
        u.slice_mut(s![n.., ..n]).assign(&s);
        u.slice_mut(s![n.., n..]).assign(&c_prime);
        u
    }

    /// max |(U^dag U - I)_{ij}| over indices away from the truncation edge.
    ///
    /// S pushes |e, n_max - 1> out of the basis, so the last `edge` levels of
    /// each atomic block are excluded.
    pub fn unitarity_defect(&self, edge: usize) -> f64 {
        let n = self.n_max();
        let u = self.propagator();
        let g = dagger(&u).dot(&u);
        let keep = |i: usize| (i % n) + edge < n;
        let mut worst = 0.0f64;
        for ((i, j), z) in g.indexed_iter() {
            if keep(i) && keep(j) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((z - target).norm());
            }
        }
        worst
    }
}

/// exp(-i t H_I) for H_I = sigma_+ a + sigma_- a^dag on `dim` levels,
/// atom-major, by dense matrix exponential.
pub fn oracle_propagator(t: f64, dim: usize) -> Array2<C64> {
    let mut h = Array2::zeros((2 * dim, 2 * dim));
    h.slice_mut(s![..dim, dim..]).assign(&annihilation(dim));
    h.slice_mut(s![dim.., ..dim]).assign(&creation(dim));
    expm(&h.mapv(|z| -I * t * z))
}

/// Atom-field density matrix on 2 n_max levels, blocks [[ee, eg], [ge, gg]].
#[derive(Debug, Clone, PartialEq)]
pub struct JointDensity {
    pub entries: Array2<C64>,
}

impl JointDensity {
    /// Number of field levels per atomic block.
    pub fn n_max(&self) -> usize {
        self.entries.nrows() / 2
    }

    pub fn trace(&self) -> f64 {
        trace(&self.entries).re
    }

    pub fn validate(&self, tail_tol: f64) -> Result<()> {
        let deviation = hermitian_deviation(&self.entries);
        if deviation > 1e-12 {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = self.trace();
        if tr > 1.0 + 1e-12 || tr < 1.0 - tail_tol {
            return Err(Error::Truncation {
                n_max: self.n_max(),
                tail: 1.0 - tr,
                tol: tail_tol,
            });
        }
        Ok(())
    }
}

/// rho_tot(t) for the atom excited and the field in `rho_field` at t = 0.
pub fn evolve_joint(rho_field: &DensityMatrix, t: f64) -> Result<JointDensity> {
    let n = rho_field.dim();
    let rho = &rho_field.entries;
    if rho.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rho.ncols(),
        });
    }
    let b = evolution_blocks(t, n);
    let c = &b.cos_upper;
    // S_{n+1,n} = -i sin(t sqrt(n+1))
    let sn: Vec<f64> = (0..n)
        .map(|k| (t * ((k + 1) as f64).sqrt()).sin())
        .collect();

    let mut out = Array2::zeros((2 * n, 2 * n));
    for i in 0..n {
        for j in 0..n {
            out[[i, j]] = rho[[i, j]] * (c[i] * c[j]);
        }
    }
    // eg = C rho S^dag, (rho S^dag)_{i,j} = i sin_{j-1} rho_{i,j-1}
    for i in 0..n {
        for j in 1..n {
            out[[i, n + j]] = I * rho[[i, j - 1]] * (c[i] * sn[j - 1]);
        }
    }
    // ge = S rho C
    for i in 1..n {
        for j in 0..n {
            out[[n + i, j]] = -I * rho[[i - 1, j]] * (sn[i - 1] * c[j]);
        }
    }
    // gg = S rho S^dag
    for i in 1..n {
        for j in 1..n {
            out[[n + i, n + j]] = rho[[i - 1, j - 1]] * (sn[i - 1] * sn[j - 1]);
        }
    }
    Ok(JointDensity { entries: out })
}

/// Reference evolution U (|e><e| (x) rho) U^dag with dense U.
pub fn evolve_joint_dense(rho_field: &DensityMatrix, t: f64) -> JointDensity {
    let n = rho_field.dim();
    let u = evolution_blocks(t, n).propagator();
    let mut initial = Array2::zeros((2 * n, 2 * n));
    initial.slice_mut(s![..n, ..n]).assign(&rho_field.entries);
    JointDensity {
        entries: u.dot(&initial).dot(&dagger(&u)),
    }
}

/// U(t)(|e> (x) phi), split into its excited and ground field components.
pub fn evolve_pure(phi: &FockVector, t: f64) -> (Vec<C64>, Vec<C64>) {
    let n = phi.n_max();
    let amps = &phi.amplitudes;
    let excited = (0..n)
        .map(|k| amps[k] * (t * ((k + 1) as f64).sqrt()).cos())
        .collect();
    let mut ground = vec![C64::new(0.0, 0.0); n];
    for k in 1..n {
        ground[k] = -I * amps[k - 1] * (t * (k as f64).sqrt()).sin();
    }
    (excited, ground)
}

/// Partial trace over the field, as a 2x2 density matrix in (e, g) order.
pub fn reduce_to_atom(joint: &JointDensity) -> DensityMatrix {
    let n = joint.n_max();
    let m = &joint.entries;
    let mut atom = Array2::zeros((2, 2));
    for k in 0..n {
        atom[[0, 0]] += m[[k, k]];
        atom[[0, 1]] += m[[k, n + k]];
        atom[[1, 0]] += m[[n + k, k]];
        atom[[1, 1]] += m[[n + k, n + k]];
    }
    DensityMatrix { entries: atom }
}

/// W(t) = sum_n P(n) cos(2 t sqrt(n+1)).
pub fn inversion_series(pcd: &Pcd, grid: &TimeGrid) -> TimeSeries {
    let freqs: Vec<f64> = (0..pcd.probabilities.len())
        .map(|n| 2.0 * ((n + 1) as f64).sqrt())
        .collect();
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            pcd.probabilities
                .iter()
                .zip(&freqs)
                .map(|(p, w)| p * (w * t).cos())
                .sum()
        })
        .collect();
    TimeSeries {
        times: grid.points().to_vec(),
        values,
    }
}

/// Weights below this are dropped from the closed-form MSCS inversion.
const CLOSED_FORM_CUTOFF: f64 = 1e-20;

/// MSCS inversion as the split even/odd series: even levels 2k carry the
/// Poisson weight q e^{-N_c} N_c^{2k}/(2k)! plus the squeezed weight
/// (1-q)/sqrt(1+N_s) (2k)!/(2^{2k} (k!)^2) (N_s/(1+N_s))^k at frequency
/// 2 sqrt(2k+1); odd levels 2k+1 carry only q e^{-N_c} N_c^{2k+1}/(2k+1)!
/// at frequency 2 sqrt(2k+2). Summed until both weights are negligible.
pub fn inversion_mscs_closed(params: &FieldParams, grid: &TimeGrid) -> Result<TimeSeries> {
    if params.kind != FieldKind::Mscs {
        return Err(Error::InvalidParameter(
            "closed-form inversion needs an MSCS field".into(),
        ));
    }
    let (n_c, n_s, q) = (params.n_c, params.n_s, params.q);
    let ln_poisson = |n: usize, lf: &[f64]| -> f64 {
        if n_c == 0.0 {
            if n == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            -n_c + n as f64 * n_c.ln() - lf[n]
        }
    };
    let ln_squeezed = |k: usize, lf: &[f64]| -> f64 {
        if n_s == 0.0 {
            if k == 0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else {
            -0.5 * (1.0 + n_s).ln() + lf[2 * k]
                - 2.0 * k as f64 * std::f64::consts::LN_2
                - 2.0 * lf[k]
                + k as f64 * (n_s / (1.0 + n_s)).ln()
        }
    };

    // (weight, frequency) pairs
    let mut terms: Vec<(f64, f64)> = Vec::new();
    let mut lf = ln_factorials(64);
    let mut k = 0usize;
    loop {
        if 2 * k + 1 >= lf.len() {
            lf = ln_factorials(2 * lf.len());
        }
        let even = q * ln_poisson(2 * k, &lf).exp() + (1.0 - q) * ln_squeezed(k, &lf).exp();
        let odd = q * ln_poisson(2 * k + 1, &lf).exp();
        terms.push((even, 2.0 * ((2 * k + 1) as f64).sqrt()));
        terms.push((odd, 2.0 * ((2 * k + 2) as f64).sqrt()));
        let past_peak = (2 * k) as f64 > n_c && (k as f64) > n_s;
        if past_peak && even < CLOSED_FORM_CUTOFF && odd < CLOSED_FORM_CUTOFF {
            break;
        }
        k += 1;
    }
    let values = grid
        .points()
        .iter()
        .map(|&t| terms.iter().map(|(w, f)| w * (f * t).cos()).sum())
        .collect();
    Ok(TimeSeries {
        times: grid.points().to_vec(),
        values,
    })
}

/// W(t) = tr(rho_atom sigma_z) from the full joint evolution.
pub fn inversion_trace(rho_field: &DensityMatrix, grid: &TimeGrid) -> Result<TimeSeries> {
    let values = grid
        .points()
        .iter()
        .map(|&t| {
            let atom = reduce_to_atom(&evolve_joint(rho_field, t)?);
            Ok(atom.entries[[0, 0]].re - atom.entries[[1, 1]].re)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TimeSeries {
        times: grid.points().to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Basis;
    use crate::linalg::max_abs_diff;
    use std::f64::consts::PI;

    #[test]
    fn blocks_at_zero_time() {
        let [c, s, cp, sp] = evolution_blocks(0.0, 12).dense();
        let eye = Array2::<C64>::eye(12);
        assert_eq!(max_abs_diff(&c, &eye), 0.0);
        assert_eq!(max_abs_diff(&cp, &eye), 0.0);
        assert!(s.iter().all(|z| z.norm() == 0.0));
        assert!(sp.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn removable_singularity_is_t() {
        let b = evolution_blocks(2.7, 4);
        assert_eq!(b.sinc_lower[0], 2.7);
    }

    #[test]
    fn propagator_unitary_in_interior() {
        let b = evolution_blocks(7.3, 60);
        assert!(b.unitarity_defect(1) < 1e-10);
        // the edge level is genuinely lost: |e, 59> leaks with sin^2(sqrt 60)
        assert!(evolution_blocks(1.0, 60).unitarity_defect(0) > 0.9);
    }

    #[test]
    fn propagator_matches_expm_oracle() {
        let n = 40;
        let padding = 10;
        let u = evolution_blocks(3.0, n).propagator();
        let big = oracle_propagator(3.0, n + padding);
        let d = n + padding;
        let mut worst = 0.0f64;
        for (a, oa) in [(0, 0), (n, d)] {
            for (b, ob) in [(0, 0), (n, d)] {
                for i in 0..n - 1 {
                    for j in 0..n - 1 {
                        worst = worst.max((u[[a + i, b + j]] - big[[oa + i, ob + j]]).norm());
                    }
                }
            }
        }
        assert!(worst < 1e-8, "{worst:e}");
    }

    #[test]
    fn structured_evolution_matches_dense() {
        let p = FieldParams::mscs(6.0, 1.0, 0.6).unwrap();
        let rho = p.density(p.auto_basis(1e-10)).unwrap();
        for t in [0.0, 1.3, 9.7] {
            let fast = evolve_joint(&rho, t).unwrap();
            let dense = evolve_joint_dense(&rho, t);
            assert!(max_abs_diff(&fast.entries, &dense.entries) < 1e-12);
        }
    }

    #[test]
    fn product_state_at_zero() {
        let p = FieldParams::pscs(4.0, 0.5).unwrap();
        let rho = p.density(p.auto_basis(1e-10)).unwrap();
        let joint = evolve_joint(&rho, 0.0).unwrap();
        let n = rho.dim();
        assert_eq!(joint.entries.slice(s![..n, ..n]), rho.entries);
        assert!(joint
            .entries
            .slice(s![n.., ..])
            .iter()
            .all(|z| z.norm() == 0.0));
        let atom = reduce_to_atom(&joint);
        assert!((atom.entries[[0, 0]].re - rho.trace()).abs() < 1e-15);
    }

    #[test]
    fn vacuum_field_rabi() {
        let rho = DensityMatrix::from_pure(&FockVector::basis_state(0, 4));
        for t in [0.3, 1.1, PI / 2.0, 4.0] {
            let joint = evolve_joint(&rho, t).unwrap();
            let atom = reduce_to_atom(&joint);
            assert!((atom.entries[[0, 0]].re - t.cos().powi(2)).abs() < 1e-14);
            assert!((atom.entries[[1, 1]].re - t.sin().powi(2)).abs() < 1e-14);
        }
        let grid = TimeGrid::linspace(0.0, 10.0, 101).unwrap();
        let w = inversion_trace(&rho, &grid).unwrap();
        for (t, v) in w.times.iter().zip(&w.values) {
            assert!((v - (2.0 * t).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn trace_preserved_for_mscs() {
        let p = FieldParams::mscs(20.0, 5.0, 0.41).unwrap();
        let rho = p.density(p.auto_basis(1e-10)).unwrap();
        let joint = evolve_joint(&rho, 25.0).unwrap();
        assert!((joint.trace() - rho.trace()).abs() < 1e-10);
        joint.validate(1e-10).unwrap();
        let atom = reduce_to_atom(&joint);
        assert!((atom.trace() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn series_single_level() {
        let pcd = Pcd {
            probabilities: vec![1.0, 0.0, 0.0],
        };
        let grid = TimeGrid::linspace(0.0, 5.0, 11).unwrap();
        let w = inversion_series(&pcd, &grid);
        assert_eq!(w.values[0], 1.0);
        for (t, v) in w.times.iter().zip(&w.values) {
            assert!((v - (2.0 * t).cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn coherent_revival_near_two_pi_sqrt_nc() {
        let p = FieldParams::pscs(20.0, 0.0).unwrap();
        let pcd = p.pcd(p.auto_basis(1e-12)).unwrap();
        let grid = TimeGrid::linspace(0.0, 35.0, 3501).unwrap();
        let w = inversion_series(&pcd, &grid);
        // smoothed envelope: max |W| over sliding windows of width ~1
        let envelope = |lo: f64, hi: f64| {
            w.times
                .iter()
                .zip(&w.values)
                .filter(|(t, _)| **t >= lo && **t <= hi)
                .map(|(_, v)| v.abs())
                .fold(0.0, f64::max)
        };
        let revival = envelope(27.0, 29.5);
        assert!(
            revival > 2.0 * envelope(12.0, 18.0),
            "collapse should be flat"
        );
        let centers: Vec<f64> = (0..60).map(|k| 25.0 + 0.1 * k as f64).collect();
        let best = centers
            .iter()
            .copied()
            .max_by(|a, b| envelope(a - 0.5, a + 0.5).total_cmp(&envelope(b - 0.5, b + 0.5)))
            .unwrap();
        assert!(
            (best - 2.0 * PI * 20f64.sqrt()).abs() < 1.5,
            "revival at {best}"
        );
    }

    #[test]
    fn closed_form_endpoints() {
        let grid = TimeGrid::linspace(0.0, 50.0, 201).unwrap();
        let coh = FieldParams::mscs(20.0, 3.0, 1.0).unwrap();
        let closed = inversion_mscs_closed(&coh, &grid).unwrap();
        let pscs = FieldParams::pscs(20.0, 0.0).unwrap();
        let series = inversion_series(&pscs.pcd(pscs.auto_basis(1e-14)).unwrap(), &grid);
        assert!(closed.max_abs_diff(&series) < 1e-12);
        assert!((closed.values[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_trace() {
        let p = FieldParams::mscs(20.0, 1.0, 0.70).unwrap();
        let grid = TimeGrid::linspace(0.0, 50.0, 50).unwrap();
        let closed = inversion_mscs_closed(&p, &grid).unwrap();
        let rho = p.density(p.auto_basis(1e-12)).unwrap();
        let traced = inversion_trace(&rho, &grid).unwrap();
        assert!(closed.max_abs_diff(&traced) < 1e-8);
    }

    #[test]
    fn pscs_series_matches_trace() {
        let p = FieldParams::pscs(20.0, 2.0).unwrap();
        let b: Basis = p.auto_basis(1e-11);
        let grid = TimeGrid::linspace(0.0, 50.0, 60).unwrap();
        let series = inversion_series(&p.pcd(b).unwrap(), &grid);
        let traced = inversion_trace(&p.density(b).unwrap(), &grid).unwrap();
        assert!(series.max_abs_diff(&traced) < 1e-8);
        assert!(series.values.iter().all(|v| v.abs() <= 1.0 + 1e-10));
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(TimeGrid::new(vec![-1.0, 1.0]).is_err());
        assert!(TimeGrid::linspace(0.0, 1.0, 1).is_err());
        assert_eq!(TimeGrid::default().len(), DEFAULT_TIME_POINTS);
    }
}
