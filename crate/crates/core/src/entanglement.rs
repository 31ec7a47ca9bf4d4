//! Atom-field entanglement through the negativity of the partial transpose.

use ndarray::{s, Array2};
use num_complex::Complex64 as C64;

use crate::dynamics::{evolve_joint, evolve_pure, JointDensity, TimeGrid, TimeSeries};
use crate::error::Result;
use crate::field::DensityMatrix;
use crate::fock::FockVector;
use crate::linalg::{hermitian_eigenvalues, Spectrum};

/// Eigenvalues above this (and below zero) count as numerical zero.
pub const NEGATIVE_EIGENVALUE_FLOOR: f64 = -1e-10;

/// Transpose over the atom: blocks (s, s') and (s', s) trade places while the
/// field indices stay put.
pub fn partial_transpose_atom(joint: &JointDensity) -> JointDensity {
    let n = joint.n_max();
    let m = &joint.entries;
    let mut out = m.clone();
    out.slice_mut(s![..n, n..]).assign(&m.slice(s![n.., ..n]));
    out.slice_mut(s![n.., ..n]).assign(&m.slice(s![..n, n..]));
    JointDensity { entries: out }
}

fn negative_mass(spectrum: &Spectrum) -> f64 {
    spectrum
        .eigenvalues
        .iter()
        .filter(|&&l| l < NEGATIVE_EIGENVALUE_FLOOR)
        .map(|l| -l)
        .sum()
}

/// N = sum_k (|l_k| - l_k) / 2 over the spectrum of the partial transpose.
pub fn negativity(joint: &JointDensity) -> Result<f64> {
    let pt = partial_transpose_atom(joint);
    Ok(negative_mass(&hermitian_eigenvalues(&pt.entries)?))
}

/// log2(2N + 1)
pub fn log_negativity(negativity: f64) -> f64 {
    (2.0 * negativity + 1.0).log2()
}

/// N(t) from the dense joint density at every grid point.
pub fn negativity_series(rho_field: &DensityMatrix, grid: &TimeGrid) -> Result<TimeSeries> {
    let values = grid
        .points()
        .iter()
        .map(|&t| negativity(&evolve_joint(rho_field, t)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries {
        times: grid.points().to_vec(),
        values,
    })
}

/// Residual norms below this are treated as linearly dependent.
const RANK_FLOOR: f64 = 1e-13;

/// Negativity at time `t` for a field given as a weighted ensemble of pure
/// states.
///
/// With r ensemble members the joint state has rank r, and its partial
/// transpose acts within atom (x) span{field parts of the evolved members},
/// at most 4r dimensions. The spectrum is taken there; the rest of the
/// spectrum is zero.
pub fn negativity_ensemble(components: &[(f64, FockVector)], t: f64) -> Result<f64> {
    let parts: Vec<(f64, [Vec<C64>; 2])> = components
        .iter()
        .map(|(w, phi)| {
            let (e, g) = evolve_pure(phi, t);
            (*w, [e, g])
        })
        .collect();

    // Orthonormal basis of the field subspace, Gram-Schmidt applied twice.
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for (_, pair) in &parts {
        for u in pair {
            let mut v = u.clone();
            for _ in 0..2 {
                for q in &basis {
                    let overlap: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= overlap * qi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > RANK_FLOOR {
                basis.push(v.into_iter().map(|z| z / norm).collect());
            }
        }
    }
    let k = basis.len();
    if k == 0 {
        return Ok(0.0);
    }
    let coords = |u: &[C64]| -> Vec<C64> {
        basis
            .iter()
            .map(|q| q.iter().zip(u).map(|(a, b)| a.conj() * b).sum())
            .collect()
    };
    let projected: Vec<(f64, [Vec<C64>; 2])> = parts
        .iter()
        .map(|(w, [e, g])| (*w, [coords(e), coords(g)]))
        .collect();

    // block (a, b) of the partial transpose is sum_i w_i |u_{i,b}><u_{i,a}|
    let mut m = Array2::<C64>::zeros((2 * k, 2 * k));
    for (w, v) in &projected {
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..k {
                    for y in 0..k {
                        m[[a * k + x, b * k + y]] += v[b][x] * v[a][y].conj() * *w;
                    }
                }
            }
        }
    }
    Ok(negative_mass(&hermitian_eigenvalues(&m)?))
}

pub fn negativity_series_ensemble(
    components: &[(f64, FockVector)],
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    let values = grid
        .points()
        .iter()
        .map(|&t| negativity_ensemble(components, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(TimeSeries {
        times: grid.points().to_vec(),
        values,
    })
}
