//! Cyclic Jacobi diagonalization of complex Hermitian matrices.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use super::hermitian_deviation;
use crate::error::{Error, Result};

/// Deviation from Hermiticity tolerated before symmetrizing.
const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Real eigenvalues in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Off-diagonal Frobenius norm left after the final sweep.
    pub residual: f64,
}

impl Spectrum {
    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Eigh {
    pub spectrum: Spectrum,
    /// Column k is the eigenvector of `spectrum.eigenvalues[k]`.
    pub vectors: Array2<C64>,
}

pub fn hermitian_eigenvalues(m: &Array2<C64>) -> Result<Spectrum> {
    jacobi(m, false).map(|e| e.spectrum)
}

pub fn jacobi_eigh(m: &Array2<C64>) -> Result<Eigh> {
    jacobi(m, true)
}

fn frobenius(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal(m: &Array2<C64>) -> f64 {
    let n = m.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[[i, j]].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &Array2<C64>, want_vectors: bool) -> Result<Eigh> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "eigen-decomposition needs a square matrix");

    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }

    let mut a = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (m[[i, j]] + m[[j, i]].conj()));
    let mut v = if want_vectors {
        Array2::eye(n)
    } else {
        Array2::zeros((0, 0))
    };
    let norm = frobenius(&a);
    let target = 1e-14 * norm;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= target {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                let g = apq.norm();
                let app = a[[p, p]].re;
                let aqq = a[[q, q]].re;
                if g <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) || g == 0.0 {
                    a[[p, q]] = C64::new(0.0, 0.0);
                    a[[q, p]] = C64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                // Phase e^{-i phi} makes the pivot real, then a real rotation
                // annihilates it.
                let phase = (apq / g).conj();
                let zeta = (aqq - app) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let r_pp = C64::new(c, 0.0);
                let r_pq = C64::new(s, 0.0);
                let r_qp = phase * (-s);
                let r_qq = phase * c;

                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = akp * r_pp + akq * r_qp;
                    a[[k, q]] = akp * r_pq + akq * r_qq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = r_pp.conj() * apk + r_qp.conj() * aqk;
                    a[[q, k]] = r_pq.conj() * apk + r_qq.conj() * aqk;
                }
                a[[p, q]] = C64::new(0.0, 0.0);
                a[[q, p]] = C64::new(0.0, 0.0);
                a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
                a[[q, q]] = C64::new(a[[q, q]].re, 0.0);

                if want_vectors {
                    for k in 0..n {
                        let vkp = v[[k, p]];
                        let vkq = v[[k, q]];
                        v[[k, p]] = vkp * r_pp + vkq * r_qp;
                        v[[k, q]] = vkp * r_pq + vkq * r_qq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let residual = off_diagonal(&a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.total_cmp(&a[[j, j]].re));
    let eigenvalues = order.iter().map(|&i| a[[i, i]].re).collect();
    let vectors = if want_vectors {
        let mut sorted = Array2::zeros((n, n));
        for (col, &i) in order.iter().enumerate() {
            sorted.column_mut(col).assign(&v.column(i));
        }
        sorted
    } else {
        v
    };
    Ok(Eigh {
        spectrum: Spectrum {
            eigenvalues,
            residual,
        },
        vectors,
    })
}

impl Eigh {
    /// Rebuilds V diag(lambda) V^dag.
    pub fn reconstruct(&self) -> Array2<C64> {
        let lambda = Array1::from_iter(self.spectrum.eigenvalues.iter().map(|&x| C64::new(x, 0.0)));
        let scaled = &self.vectors * &lambda;
        scaled.dot(&super::dagger(&self.vectors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, trace};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn random_hermitian(n: usize, seed: u64) -> Array2<C64> {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = Array2::from_shape_fn((n, n), |_| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let h = &g + &crate::linalg::dagger(&g);
        h.mapv(|z| z * 0.5)
    }

    #[test]
    fn identity_eigenvalues() {
        let s = hermitian_eigenvalues(&Array2::eye(4)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0; 4]);
    }

    #[test]
    fn diagonal_sorted_ascending() {
        let d = Array2::from_diag(&ndarray::arr1(&[
            C64::new(3.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(2.0, 0.0),
        ]));
        let s = hermitian_eigenvalues(&d).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_complex_pivot() {
        // [[0, i], [-i, 0]] has eigenvalues -1 and 1.
        let mut m = Array2::zeros((2, 2));
        m[[0, 1]] = C64::new(0.0, 1.0);
        m[[1, 0]] = C64::new(0.0, -1.0);
        let s = hermitian_eigenvalues(&m).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_50_reconstructs() {
        let m = random_hermitian(50, 7);
        let e = jacobi_eigh(&m).unwrap();
        assert!(max_abs_diff(&e.reconstruct(), &m) < 1e-9);
        assert!((e.spectrum.sum() - trace(&m).re).abs() < 1e-8);
        let norm = frobenius(&m);
        assert!(e.spectrum.residual < 1e-12 * norm);
        let vv = crate::linalg::dagger(&e.vectors).dot(&e.vectors);
        assert!(max_abs_diff(&vv, &Array2::eye(50)) < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Array2::<C64>::eye(3);
        m[[0, 2]] = C64::new(1e-3, 0.0);
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn tiny_asymmetry_is_symmetrized() {
        let mut m = random_hermitian(6, 3);
        m[[1, 4]] += C64::new(1e-12, 0.0);
        assert!(hermitian_eigenvalues(&m).is_ok());
    }
}
