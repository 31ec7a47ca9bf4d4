use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

fn norm1(m: &Array2<C64>) -> f64 {
    m.columns()
        .into_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring around a Taylor series.
///
/// The argument is scaled by 2^-s until its 1-norm is at most 1/2, the series
/// is summed until the next term falls below 1e-17 relative to the partial
/// sum, and the result is squared s times.
pub fn expm(m: &Array2<C64>) -> Array2<C64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "expm needs a square matrix");
    let norm = norm1(m);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.mapv(|z| z * 0.5f64.powi(squarings));

    let mut sum = Array2::<C64>::eye(n);
    let mut term = Array2::<C64>::eye(n);
    for k in 1..64 {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        sum += &term;
        if norm1(&term) <= 1e-17 * norm1(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.dot(&sum);
    }
    sum
}

/// exp(M) v without forming exp(M), for sparse M.
///
/// The nonzeros of `m` are gathered once; the action is then built from
/// 2^s Taylor steps, each with operator norm at most 1/2.
pub fn expm_multiply(m: &Array2<C64>, v: &Array1<C64>) -> Array1<C64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "expm_multiply needs a square matrix");
    assert_eq!(n, v.len(), "vector length must match the matrix");
    let entries: Vec<(usize, usize, C64)> = m
        .indexed_iter()
        .filter(|(_, z)| z.norm() != 0.0)
        .map(|((i, j), z)| (i, j, *z))
        .collect();
    let steps = (norm1(m) / 0.5).ceil().max(1.0) as usize;
    let h = 1.0 / steps as f64;

    let mut out = v.clone();
    let mut term = Array1::<C64>::zeros(n);
    for _ in 0..steps {
        term.assign(&out);
        let mut acc = out.clone();
        for k in 1..64 {
            let mut next = Array1::<C64>::zeros(n);
            for &(i, j, z) in &entries {
                next[i] += z * term[j];
            }
            term = next.mapv(|x| x * (h / k as f64));
            acc += &term;
            let t = term.iter().map(|x| x.norm()).sum::<f64>();
            if t <= 1e-17 * acc.iter().map(|x| x.norm()).sum::<f64>() {
                break;
            }
        }
        out = acc;
    }
    out
}
