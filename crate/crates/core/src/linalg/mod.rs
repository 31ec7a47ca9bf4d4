//! Dense complex linear algebra used by the simulation and its oracles.

mod eigen;
mod expm;

pub use eigen::{hermitian_eigenvalues, jacobi_eigh, Eigh, Spectrum};
pub use expm::{expm, expm_multiply};

use ndarray::Array2;
use num_complex::Complex64 as C64;

pub fn dagger(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

pub fn trace(m: &Array2<C64>) -> C64 {
    m.diag().sum()
}

/// Largest elementwise |M - M†|.
pub fn hermitian_deviation(m: &Array2<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Truncated annihilation operator `a` on `dim` number states.
pub fn annihilation(dim: usize) -> Array2<C64> {
    let mut a = Array2::zeros((dim, dim));
    for n in 1..dim {
        a[[n - 1, n]] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

pub fn creation(dim: usize) -> Array2<C64> {
    dagger(&annihilation(dim))
}

pub fn number(dim: usize) -> Array2<C64> {
    Array2::from_diag(&ndarray::Array1::from_iter(
        (0..dim).map(|n| C64::new(n as f64, 0.0)),
    ))
}
