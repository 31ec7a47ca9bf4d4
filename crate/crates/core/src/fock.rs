//! Pure single-mode states in a truncated number basis.
//!
//! Amplitude magnitudes are assembled in log space so that factorials and
//! large powers never overflow, even a few hundred levels up.

use std::f64::consts::PI;

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{annihilation, creation, expm_multiply};

pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
/// Extra levels carried by the matrix-exponential oracle beyond `n_max`.
pub const DEFAULT_ORACLE_PADDING: usize = 40;

/// Truncation of the number basis: `n_max` retained levels (n = 0..n_max-1)
/// and the largest probability mass allowed to fall outside them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    pub n_max: usize,
    pub tail_tol: f64,
}

impl Basis {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }
}

/// Squeeze parameter zeta = r e^{i theta}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    pub r: f64,
    pub theta: f64,
}

impl SqueezeParam {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "squeeze magnitude must be finite and >= 0, got {r}"
            )));
        }
        Ok(Self {
            r,
            theta: theta.rem_euclid(2.0 * PI),
        })
    }

    pub fn vacuum() -> Self {
        Self { r: 0.0, theta: 0.0 }
    }

    /// Squeeze with sinh^2 r = `n_s` and phase 0.
    pub fn from_mean_photons(n_s: f64) -> Result<Self> {
        if !(n_s >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mean squeezed photon number must be >= 0, got {n_s}"
            )));
        }
        Self::new(n_s.sqrt().asinh(), 0.0)
    }

    /// N_s = sinh^2 r.
    pub fn mean_photons(&self) -> f64 {
        self.r.sinh().powi(2)
    }

    /// cosh r
    pub fn mu(&self) -> f64 {
        self.r.cosh()
    }

    /// sinh r
    pub fn nu(&self) -> f64 {
        self.r.sinh()
    }

    pub fn as_complex(&self) -> C64 {
        C64::from_polar(self.r, self.theta)
    }
}

/// Amplitudes <n|psi> for n = 0..n_max-1.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amplitudes: Vec<C64>,
}

impl FockVector {
    pub fn basis_state(n: usize, n_max: usize) -> Self {
        assert!(n < n_max, "level {n} outside a basis of {n_max} levels");
        let mut amplitudes = vec![C64::new(0.0, 0.0); n_max];
        amplitudes[n] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Probability mass lost to truncation, 1 - sum |c_n|^2.
    pub fn tail_mass(&self) -> f64 {
        (1.0 - self.norm_sqr()).max(0.0)
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// <self|other>
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn to_array(&self) -> Array1<C64> {
        Array1::from_vec(self.amplitudes.clone())
    }

    /// Keeps the first `n_max` levels (zero-padding if longer than stored).
    pub fn resized(&self, n_max: usize) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        amplitudes.resize(n_max, C64::new(0.0, 0.0));
        Self { amplitudes }
    }

    fn checked(self, tail_tol: f64) -> Result<Self> {
        if let Some(bad) = self.amplitudes.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonConvergence {
                norm: bad.norm(),
                tol: tail_tol,
            });
        }
        let tail = 1.0 - self.norm_sqr();
        if tail > tail_tol {
            return Err(Error::Truncation {
                n_max: self.n_max(),
                tail,
                tol: tail_tol,
            });
        }
        Ok(self)
    }
}

/// ln k! for k = 0..=n.
pub(crate) fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

fn coherent_raw(alpha: C64, n_max: usize) -> FockVector {
    let mut amplitudes = vec![C64::new(0.0, 0.0); n_max];
    if alpha.norm() == 0.0 {
        if n_max > 0 {
            amplitudes[0] = C64::new(1.0, 0.0);
        }
        return FockVector { amplitudes };
    }
    let lf = ln_factorials(n_max);
    let (mag, phase) = alpha.to_polar();
    let ln_mag = mag.ln();
    for (n, amp) in amplitudes.iter_mut().enumerate() {
        let ln_abs = -0.5 * mag * mag + n as f64 * ln_mag - 0.5 * lf[n];
        *amp = C64::from_polar(ln_abs.exp(), n as f64 * phase);
    }
    FockVector { amplitudes }
}

fn squeezed_vacuum_raw(zeta: SqueezeParam, n_max: usize) -> FockVector {
    let mut amplitudes = vec![C64::new(0.0, 0.0); n_max];
    if n_max == 0 {
        return FockVector { amplitudes };
    }
    if zeta.r == 0.0 {
        amplitudes[0] = C64::new(1.0, 0.0);
        return FockVector { amplitudes };
    }
    let lf = ln_factorials(n_max);
    let ln_tanh = zeta.r.tanh().ln();
    let ln_norm = -0.5 * zeta.r.cosh().ln();
    // (-e^{i theta} tanh r)^m carries phase m (theta + pi).
    for m in 0..n_max.div_ceil(2) {
        let n = 2 * m;
        let mf = m as f64;
        let ln_abs = ln_norm + mf * ln_tanh + 0.5 * lf[n] - mf * std::f64::consts::LN_2 - lf[m];
        amplitudes[n] = C64::from_polar(ln_abs.exp(), mf * (zeta.theta + PI));
    }
    FockVector { amplitudes }
}

/// Magnitudes outside this band are rescaled during the recurrence.
const RESCALE_HIGH: f64 = 1e100;
const RESCALE_LOW: f64 = 1e-100;

fn squeezed_coherent_raw(alpha: C64, zeta: SqueezeParam, n_max: usize) -> FockVector {
    if n_max == 0 {
        return FockVector { amplitudes: vec![] };
    }
    let mu = zeta.mu();
    let nu = zeta.nu();
    let e_theta = C64::from_polar(1.0, zeta.theta);
    // [(a - alpha) mu + (a^dag - alpha^*) e^{i theta} nu] |alpha, zeta> = 0 gives
    //   mu sqrt(n+1) c_{n+1} = beta c_n - nu e^{i theta} sqrt(n) c_{n-1}.
    let beta = alpha * mu + e_theta * alpha.conj() * nu;
    // c_0 = <-alpha|zeta>, evaluated in closed form.
    let ln_c0 = C64::new(-0.5 * mu.ln() - 0.5 * alpha.norm_sqr(), 0.0)
        - alpha.conj() * alpha.conj() * e_theta * (0.5 * zeta.r.tanh());

    // Scaled values v_n with true c_n = v_n exp(scale_n + ln c_0).
    let mut values = Vec::with_capacity(n_max);
    let mut scales = Vec::with_capacity(n_max);
    let mut prev = C64::new(0.0, 0.0);
    let mut cur = C64::new(1.0, 0.0);
    let mut scale = 0.0f64;
    values.push(cur);
    scales.push(scale);
    for n in 0..n_max - 1 {
        let nf = n as f64;
        let next = (beta * cur - e_theta * nu * nf.sqrt() * prev) / (mu * (nf + 1.0).sqrt());
        prev = cur;
        cur = next;
        let big = cur.norm().max(prev.norm());
        if big > RESCALE_HIGH || (big < RESCALE_LOW && big > 0.0) {
            prev /= big;
            cur /= big;
            scale += big.ln();
        }
        values.push(cur);
        scales.push(scale);
    }
    let amplitudes = values
        .into_iter()
        .zip(scales)
        .map(|(v, s)| {
            if v.norm() == 0.0 {
                return C64::new(0.0, 0.0);
            }
            let ln = ln_c0 + C64::new(s + v.norm().ln(), v.arg());
            if ln.re < -745.0 {
                C64::new(0.0, 0.0)
            } else {
                ln.exp()
            }
        })
        .collect();
    FockVector { amplitudes }
}

/// Coherent state |alpha>.
pub fn coherent_amplitudes(alpha: C64, basis: Basis) -> Result<FockVector> {
    coherent_raw(alpha, basis.n_max).checked(basis.tail_tol)
}

/// Squeezed vacuum S(zeta)|0>; odd levels are exactly zero.
pub fn squeezed_vacuum_amplitudes(zeta: SqueezeParam, basis: Basis) -> Result<FockVector> {
    squeezed_vacuum_raw(zeta, basis.n_max).checked(basis.tail_tol)
}

/// Squeezed coherent state D(alpha) S(zeta)|0> by three-term recurrence.
pub fn squeezed_coherent_amplitudes(
    alpha: C64,
    zeta: SqueezeParam,
    basis: Basis,
) -> Result<FockVector> {
    let v = squeezed_coherent_raw(alpha, zeta, basis.n_max);
    let norm = v.norm_sqr();
    if !norm.is_finite() || norm > 1.0 + basis.tail_tol {
        return Err(Error::NonConvergence {
            norm,
            tol: basis.tail_tol,
        });
    }
    v.checked(basis.tail_tol)
}

/// Heuristic cutoff ceil(N_c + N_s + 10 sqrt(N_c + N_s + 1)) + 20.
pub fn default_n_max(n_c: f64, n_s: f64) -> usize {
    let total = n_c + n_s;
    (total + 10.0 * (total + 1.0).sqrt()).ceil() as usize + 20
}

/// Smallest n_max whose discarded tail of `probabilities` stays below `tail_tol`.
fn cutoff_for(probabilities: &[f64], tail_tol: f64) -> Option<usize> {
    let mut tail = 0.0;
    let mut cut = None;
    for n in (0..probabilities.len()).rev() {
        tail += probabilities[n];
        if tail > tail_tol {
            cut = Some(n + 1);
            break;
        }
    }
    cut.or(Some(1))
}

fn grow_until<F>(n_c: f64, n_s: f64, tail_tol: f64, probabilities: F) -> usize
where
    F: Fn(usize) -> Vec<f64>,
{
    let mut dim = 2 * default_n_max(n_c, n_s);
    loop {
        let p = probabilities(dim);
        let total: f64 = p.iter().sum();
        // The probe dimension must itself hold everything but a negligible sliver.
        if 1.0 - total < 1e-3 * tail_tol || dim > 1 << 16 {
            return cutoff_for(&p, tail_tol).unwrap_or(dim).max(1);
        }
        dim *= 2;
    }
}

/// Smallest truncation for which D(alpha)S(zeta)|0> loses at most `tail_tol`.
pub fn required_n_max(alpha: C64, zeta: SqueezeParam, tail_tol: f64) -> usize {
    grow_until(alpha.norm_sqr(), zeta.mean_photons(), tail_tol, |dim| {
        squeezed_coherent_raw(alpha, zeta, dim).probabilities()
    })
}

/// Smallest truncation covering both |alpha> and |zeta> to within `tail_tol`.
pub fn required_n_max_mixture(alpha: C64, zeta: SqueezeParam, tail_tol: f64) -> usize {
    let coh = grow_until(alpha.norm_sqr(), 0.0, tail_tol, |dim| {
        coherent_raw(alpha, dim).probabilities()
    });
    let sq = grow_until(0.0, zeta.mean_photons(), tail_tol, |dim| {
        squeezed_vacuum_raw(zeta, dim).probabilities()
    });
    coh.max(sq)
}

/// Physicists' Hermite polynomial by the forward recurrence
/// H_{n+1} = 2x H_n - 2n H_{n-1}.
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// H_n(x) as (ln |H_n(x)|, sign), safe for large n.
pub fn hermite_log(n: usize, x: f64) -> (f64, f64) {
    let split = |v: f64| {
        if v == 0.0 {
            (f64::NEG_INFINITY, 0.0)
        } else {
            (v.abs().ln(), v.signum())
        }
    };
    if n == 0 {
        return (0.0, 1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    let mut scale = 0.0;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        let big = cur.abs().max(prev.abs());
        if big > RESCALE_HIGH {
            prev /= big;
            cur /= big;
            scale += big.ln();
        }
    }
    let (ln, sign) = split(cur);
    (ln + scale, sign)
}

/// Tail mass below which the oracle's working basis may end. Amplitudes at
/// the edge then sit near 1e-12, far under the oracle's accuracy target.
const ORACLE_EDGE_MASS: f64 = 1e-24;

/// Ground-truth D(alpha) S(zeta)|0> from exponentials of the truncated
/// squeeze and displacement generators, cut back to `basis.n_max`.
///
/// The working basis holds at least `basis.n_max + padding` levels and is
/// widened further until the squeezed coherent state's mass at its edge is
/// negligible; heavy squeezed tails otherwise reflect off the cutoff.
pub fn oracle_state_vector(
    alpha: C64,
    zeta: SqueezeParam,
    basis: Basis,
    padding: usize,
) -> Result<FockVector> {
    let dim = (basis.n_max + padding)
        .max(required_n_max(alpha, zeta, ORACLE_EDGE_MASS) + padding)
        .max(required_n_max_mixture(alpha, zeta, ORACLE_EDGE_MASS) + padding);
    let a = annihilation(dim);
    let ad = creation(dim);
    let z = zeta.as_complex();
    // (zeta^* a^2 - zeta a^dag^2) / 2, filled in directly
    let mut squeeze_gen = ndarray::Array2::zeros((dim, dim));
    for n in 2..dim {
        let w = ((n * (n - 1)) as f64).sqrt() * 0.5;
        squeeze_gen[[n - 2, n]] = z.conj() * w;
        squeeze_gen[[n, n - 2]] = -z * w;
    }
    let displace_gen = &ad * alpha - &a * alpha.conj();

    let mut vacuum = Array1::zeros(dim);
    vacuum[0] = C64::new(1.0, 0.0);
    let squeezed = expm_multiply(&squeeze_gen, &vacuum);
    let displaced = expm_multiply(&displace_gen, &squeezed);
    FockVector {
        amplitudes: displaced.iter().take(basis.n_max).copied().collect(),
    }
    .checked(basis.tail_tol)
}
