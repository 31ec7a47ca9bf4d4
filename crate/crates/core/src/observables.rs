//! Field observables of the MSCS, from quadrature moments to the Wigner function.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::field::{DensityMatrix, FieldKind, FieldParams, Pcd};
use crate::fock::Basis;
use crate::linalg::{annihilation, creation, expm_multiply, jacobi_eigh};

/// Vacuum-level quadrature variance.
pub const VACUUM_VARIANCE: f64 = 0.25;

fn require_mscs(params: &FieldParams) -> Result<()> {
    if params.kind != FieldKind::Mscs {
        return Err(Error::InvalidParameter(format!(
            "expected an MSCS field, got {:?}",
            params.kind
        )));
    }
    Ok(())
}

/// Quadrature moments of X1 = (a + a^dag)/2 and X2 = (a - a^dag)/2i at free
/// phase omega t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureReport {
    pub omega_t: f64,
    pub mean_x1: f64,
    pub mean_x2: f64,
    /// Convex combination of the component variances.
    pub var_x1: f64,
    pub var_x2: f64,
    /// sqrt(var_x1 var_x2)
    pub product: f64,
    /// Variances of the mixture itself, including the spread of the
    /// component means, q (1-q) <X>_coh^2.
    pub mixture_var_x1: f64,
    pub mixture_var_x2: f64,
}

/// (q|alpha| cos(wt - phi), -q|alpha| sin(wt - phi))
pub fn quadrature_means_mscs(params: &FieldParams, omega_t: f64) -> Result<(f64, f64)> {
    require_mscs(params)?;
    let (mag, phi) = params.alpha.to_polar();
    let q = params.q;
    Ok((
        q * mag * (omega_t - phi).cos(),
        -q * mag * (omega_t - phi).sin(),
    ))
}

/// Weighted component variances:
/// q/4 + (1-q)/4 [cosh^2 r + sinh^2 r -/+ 2 cosh r sinh r cos(2wt - theta)].
pub fn quadrature_variances_mscs(params: &FieldParams, omega_t: f64) -> Result<(f64, f64)> {
    require_mscs(params)?;
    let q = params.q;
    let (mu, nu) = (params.zeta.mu(), params.zeta.nu());
    let cross = 2.0 * mu * nu * (2.0 * omega_t - params.zeta.theta).cos();
    let base = mu * mu + nu * nu;
    Ok((
        q / 4.0 + (1.0 - q) / 4.0 * (base - cross),
        q / 4.0 + (1.0 - q) / 4.0 * (base + cross),
    ))
}

pub fn quadrature_report(params: &FieldParams, omega_t: f64) -> Result<QuadratureReport> {
    let (mean_x1, mean_x2) = quadrature_means_mscs(params, omega_t)?;
    let (var_x1, var_x2) = quadrature_variances_mscs(params, omega_t)?;
    let q = params.q;
    // component means are <X>_coh and 0, so the mixture adds q(1-q)<X>_coh^2
    let spread = |mean: f64| {
        if q > 0.0 {
            (1.0 - q) * mean * mean / q
        } else {
            0.0
        }
    };
    Ok(QuadratureReport {
        omega_t,
        mean_x1,
        mean_x2,
        var_x1,
        var_x2,
        product: (var_x1 * var_x2).sqrt(),
        mixture_var_x1: var_x1 + spread(mean_x1),
        mixture_var_x2: var_x2 + spread(mean_x2),
    })
}

/// Means and variances of X1, X2 as operator traces over the MSCS density
/// rotated by the free evolution (alpha -> alpha e^{-i wt}, theta -> theta - 2wt).
pub fn quadrature_trace_oracle(
    params: &FieldParams,
    omega_t: f64,
    basis: Basis,
) -> Result<((f64, f64), (f64, f64))> {
    require_mscs(params)?;
    let (_, phi) = params.alpha.to_polar();
    let rotated = params.with_phases(phi - omega_t, params.zeta.theta - 2.0 * omega_t)?;
    let rho = rotated.density(basis)?;
    let n = rho.dim();
    let a = annihilation(n);
    let ad = creation(n);
    let x1 = (&a + &ad).mapv(|z| z * 0.5);
    let x2 = (&a - &ad).mapv(|z| z / C64::new(0.0, 2.0));
    let moments = |x: &Array2<C64>| {
        let mean = rho.expectation(x).re;
        let sq = rho.expectation(&x.dot(x)).re;
        (mean, sq - mean * mean)
    };
    let (m1, v1) = moments(&x1);
    let (m2, v2) = moments(&x2);
    Ok(((m1, m2), (v1, v2)))
}

/// Q = <(dn)^2>/<n> - 1 = (<n(n-1)> - <n>^2) / <n>.
pub fn mandel_q(pcd: &Pcd) -> Result<f64> {
    let mean = pcd.mean();
    if !(mean > 0.0) {
        return Err(Error::DegenerateInput(
            "Mandel Q is undefined for zero mean photon number".into(),
        ));
    }
    Ok((pcd.factorial_moment2() - mean * mean) / mean)
}

/// Rectangular sampling of the alpha plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceSpec {
    pub re_range: (f64, f64),
    pub im_range: (f64, f64),
    pub step: f64,
}

impl Default for PhaseSpaceSpec {
    /// Sized for N_c = 10: Re alpha in [-2, 8], Im alpha in [-5, 5].
    fn default() -> Self {
        Self {
            re_range: (-2.0, 8.0),
            im_range: (-5.0, 5.0),
            step: 0.05,
        }
    }
}

impl PhaseSpaceSpec {
    fn axis(range: (f64, f64), step: f64) -> Vec<f64> {
        let count = ((range.1 - range.0) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| range.0 + step * k as f64).collect()
    }

    pub fn re_axis(&self) -> Vec<f64> {
        Self::axis(self.re_range, self.step)
    }

    pub fn im_axis(&self) -> Vec<f64> {
        Self::axis(self.im_range, self.step)
    }
}

/// Wigner values on a grid; `values[[i, j]]` sits at re[i] + i im[j].
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub step: f64,
    pub values: Array2<f64>,
}

impl PhaseSpaceGrid {
    /// Riemann-sum integral of W over the grid.
    pub fn mass(&self) -> f64 {
        self.values.sum() * self.step * self.step
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// The Re-alpha marginal, integrated over Im alpha.
    pub fn re_marginal(&self) -> Vec<f64> {
        self.values
            .rows()
            .into_iter()
            .map(|row| row.sum() * self.step)
            .collect()
    }
}

/// Closed-form MSCS Wigner function at one point:
/// q (2/pi) e^{-2|a - gamma|^2} + (1-q) (2/pi) e^{-2|a cosh r + a^* e^{i theta} sinh r|^2}.
pub fn wigner_mscs_point(params: &FieldParams, alpha: C64) -> f64 {
    let gamma = params.alpha;
    let (mu, nu) = (params.zeta.mu(), params.zeta.nu());
    let squeezed = alpha * mu + alpha.conj() * C64::from_polar(nu, params.zeta.theta);
    2.0 / PI
        * (params.q * (-2.0 * (alpha - gamma).norm_sqr()).exp()
            + (1.0 - params.q) * (-2.0 * squeezed.norm_sqr()).exp())
}

/// The squeezed term written as e^{-|a cosh r - a^* e^{i theta} sinh r|^2},
/// kept to measure how far it sits from the displaced-parity result.
pub fn wigner_mscs_point_unnormalized_form(params: &FieldParams, alpha: C64) -> f64 {
    let gamma = params.alpha;
    let (mu, nu) = (params.zeta.mu(), params.zeta.nu());
    let squeezed = alpha * mu - alpha.conj() * C64::from_polar(nu, params.zeta.theta);
    2.0 / PI
        * (params.q * (-2.0 * (alpha - gamma).norm_sqr()).exp()
            + (1.0 - params.q) * (-squeezed.norm_sqr()).exp())
}

/// Least Wigner mass a grid must capture.
pub const MIN_CAPTURED_MASS: f64 = 0.999;

pub fn wigner_mscs(params: &FieldParams, spec: &PhaseSpaceSpec) -> Result<PhaseSpaceGrid> {
    require_mscs(params)?;
    let re = spec.re_axis();
    let im = spec.im_axis();
    let values = Array2::from_shape_fn((re.len(), im.len()), |(i, j)| {
        wigner_mscs_point(params, C64::new(re[i], im[j]))
    });
    let grid = PhaseSpaceGrid {
        re,
        im,
        step: spec.step,
        values,
    };
    let mass = grid.mass();
    if mass < MIN_CAPTURED_MASS {
        return Err(Error::GridTooSmall { mass });
    }
    Ok(grid)
}

/// Eigenvalues of rho below this are dropped before displacing.
const RANK_FLOOR: f64 = 1e-14;

/// W(beta) = (2/pi) sum_n (-1)^n <n|D^dag(beta) rho D(beta)|n>, evaluated
/// at each point.
///
/// rho is diagonalized once; each retained eigenvector is displaced by
/// D(-beta) on a basis wide enough to hold the shifted state.
pub fn wigner_displaced_parity(rho: &DensityMatrix, points: &[C64]) -> Result<Vec<f64>> {
    let n = rho.dim();
    let eig = jacobi_eigh(&rho.entries)?;
    let components: Vec<(f64, Array1<C64>)> = eig
        .spectrum
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > RANK_FLOOR)
        .map(|(k, &l)| (l, eig.vectors.column(k).to_owned()))
        .collect();

    points
        .iter()
        .map(|&beta| {
            let reach = (n as f64).sqrt() + beta.norm();
            let dim = (reach * reach + 10.0 * reach).ceil() as usize + 40;
            let a = annihilation(dim);
            let ad = creation(dim);
            // D(-beta) = exp(-beta a^dag + beta^* a)
            let gen = &a * beta.conj() - &ad * beta;
            let mut total = 0.0;
            for (w, v) in &components {
                let mut padded = Array1::zeros(dim);
                padded.slice_mut(ndarray::s![..n]).assign(v);
                let shifted = expm_multiply(&gen, &padded);
                let parity: f64 = shifted
                    .iter()
                    .enumerate()
                    .map(|(k, z)| {
                        if k % 2 == 0 {
                            z.norm_sqr()
                        } else {
                            -z.norm_sqr()
                        }
                    })
                    .sum();
                total += w * parity;
            }
            Ok(2.0 / PI * total)
        })
        .collect()
}
