//! Pure (PSCS) and mixed (MSCS) squeezed coherent field states.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{
    coherent_amplitudes, hermite_log, ln_factorials, required_n_max, required_n_max_mixture,
    squeezed_coherent_amplitudes, squeezed_vacuum_amplitudes, Basis, FockVector, SqueezeParam,
};
use crate::linalg::{hermitian_deviation, hermitian_eigenvalues, trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    /// D(alpha) S(zeta)|0>
    Pscs,
    /// q |alpha><alpha| + (1 - q) |zeta><zeta|
    Mscs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    pub n_c: f64,
    pub n_s: f64,
    pub alpha: C64,
    pub zeta: SqueezeParam,
    /// Weight of the coherent component; ignored for PSCS.
    pub q: f64,
    pub kind: FieldKind,
}

impl FieldParams {
    fn build(n_c: f64, n_s: f64, q: f64, kind: FieldKind) -> Result<Self> {
        if !(n_c >= 0.0) || !n_c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "N_c must be >= 0, got {n_c}"
            )));
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!(
                "q must lie in [0, 1], got {q}"
            )));
        }
        Ok(Self {
            n_c,
            n_s,
            alpha: C64::new(n_c.sqrt(), 0.0),
            zeta: SqueezeParam::from_mean_photons(n_s)?,
            q,
            kind,
        })
    }

    pub fn pscs(n_c: f64, n_s: f64) -> Result<Self> {
        Self::build(n_c, n_s, 1.0, FieldKind::Pscs)
    }

    pub fn mscs(n_c: f64, n_s: f64, q: f64) -> Result<Self> {
        Self::build(n_c, n_s, q, FieldKind::Mscs)
    }

    /// MSCS with q fixed by equal coherent-state overlap with the PSCS.
    pub fn mscs_derived(n_c: f64, n_s: f64) -> Result<Self> {
        let mut p = Self::build(n_c, n_s, 1.0, FieldKind::Mscs)?;
        p.q = mixing_weight(p.alpha.re, p.zeta)?;
        Ok(p)
    }

    /// Overrides the coherent phase phi and squeeze phase theta.
    pub fn with_phases(mut self, phi: f64, theta: f64) -> Result<Self> {
        self.alpha = C64::from_polar(self.n_c.sqrt(), phi);
        self.zeta = SqueezeParam::new(self.zeta.r, theta)?;
        Ok(self)
    }

    /// Smallest basis whose truncated tail stays below `tail_tol`.
    pub fn required_n_max(&self, tail_tol: f64) -> usize {
        match self.kind {
            FieldKind::Pscs => required_n_max(self.alpha, self.zeta, tail_tol),
            FieldKind::Mscs => required_n_max_mixture(self.alpha, self.zeta, tail_tol),
        }
    }

    pub fn auto_basis(&self, tail_tol: f64) -> Basis {
        Basis::new(self.required_n_max(tail_tol)).with_tail_tol(tail_tol)
    }

    /// The field as a weighted ensemble of pure states.
    pub fn components(&self, basis: Basis) -> Result<Vec<(f64, FockVector)>> {
        match self.kind {
            FieldKind::Pscs => Ok(vec![(
                1.0,
                squeezed_coherent_amplitudes(self.alpha, self.zeta, basis)?,
            )]),
            FieldKind::Mscs => {
                let mut out = Vec::with_capacity(2);
                if self.q > 0.0 {
                    out.push((self.q, coherent_amplitudes(self.alpha, basis)?));
                }
                if self.q < 1.0 {
                    out.push((1.0 - self.q, squeezed_vacuum_amplitudes(self.zeta, basis)?));
                }
                Ok(out)
            }
        }
    }

    pub fn density(&self, basis: Basis) -> Result<DensityMatrix> {
        match self.kind {
            FieldKind::Pscs => pscs_density(self, basis),
            FieldKind::Mscs => mscs_density(self, basis),
        }
    }

    pub fn pcd(&self, basis: Basis) -> Result<Pcd> {
        match self.kind {
            FieldKind::Pscs => pscs_pcd_amplitude(self, basis),
            FieldKind::Mscs => Ok(mscs_pcd(self, basis.n_max)),
        }
    }
}

/// Coherent weight q giving the MSCS the same overlap with |alpha> as the
/// PSCS, for real alpha:
///
/// q = sech r [1 - e^{-a^2 (1 + tanh r)}] / [1 - sech r e^{-a^2 (1 + tanh r)}]
pub fn mixing_weight(alpha_r: f64, zeta: SqueezeParam) -> Result<f64> {
    if !(alpha_r >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "real coherent amplitude must be >= 0, got {alpha_r}"
        )));
    }
    let r = zeta.r;
    if r == 0.0 {
        if alpha_r == 0.0 {
            log::warn!("mixing weight is 0/0 for alpha = 0, r = 0; using q = 1");
        }
        return Ok(1.0);
    }
    let sech = 1.0 / r.cosh();
    // 1 - e^{-x} computed without cancellation for small x
    let x = alpha_r * alpha_r * (1.0 + r.tanh());
    let one_minus = -(-x).exp_m1();
    let q = sech * one_minus / (1.0 - sech * (-x).exp());
    Ok(q.clamp(0.0, 1.0))
}

/// Square complex density operator in the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub entries: Array2<C64>,
}

impl DensityMatrix {
    pub fn from_pure(v: &FockVector) -> Self {
        Self::from_ensemble(&[(1.0, v.clone())])
    }

    pub fn from_ensemble(components: &[(f64, FockVector)]) -> Self {
        let n = components.first().map_or(0, |(_, v)| v.n_max());
        let mut entries = Array2::zeros((n, n));
        for (w, v) in components {
            assert_eq!(v.n_max(), n, "ensemble members must share a basis");
            for (i, ci) in v.amplitudes.iter().enumerate() {
                let wi = ci * *w;
                for (j, cj) in v.amplitudes.iter().enumerate() {
                    entries[[i, j]] += wi * cj.conj();
                }
            }
        }
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        trace(&self.entries).re
    }

    /// tr(rho^2)
    pub fn purity(&self) -> f64 {
        // tr(rho rho) = sum_ij rho_ij rho_ji = sum_ij |rho_ij|^2 for Hermitian rho
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.entries.diag().iter().map(|z| z.re).collect()
    }

    pub fn expectation(&self, op: &Array2<C64>) -> C64 {
        // tr(rho A) = sum_ij rho_ij A_ji
        let mut acc = C64::new(0.0, 0.0);
        for ((i, j), r) in self.entries.indexed_iter() {
            acc += r * op[[j, i]];
        }
        acc
    }

    /// tr(rho n)
    pub fn mean_photon(&self) -> f64 {
        self.diagonal()
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// Rejects non-Hermitian matrices and negative eigenvalues, and checks the
    /// trace against the tail tolerance.
    pub fn validate(&self, tail_tol: f64) -> Result<()> {
        let deviation = hermitian_deviation(&self.entries);
        if deviation > 1e-12 {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = self.trace();
        if tr > 1.0 + 1e-12 || tr < 1.0 - tail_tol {
            return Err(Error::Truncation {
                n_max: self.dim(),
                tail: 1.0 - tr,
                tol: tail_tol,
            });
        }
        let spectrum = hermitian_eigenvalues(&self.entries)?;
        if let Some(&low) = spectrum.eigenvalues.first() {
            if low < -1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "density matrix has negative eigenvalue {low:e}"
                )));
            }
        }
        Ok(())
    }
}

/// Photon counting distribution P(n), n = 0..n_max-1.
#[derive(Debug, Clone, PartialEq)]
pub struct Pcd {
    pub probabilities: Vec<f64>,
}

impl Pcd {
    pub fn sum(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.moment(|n| n)
    }

    /// <n (n - 1)>
    pub fn factorial_moment2(&self) -> f64 {
        self.moment(|n| n * (n - 1.0))
    }

    fn moment(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(n, p)| f(n as f64) * p)
            .sum()
    }

    pub fn peak(&self) -> f64 {
        self.probabilities.iter().copied().fold(0.0, f64::max)
    }
}

fn require(kind: FieldKind, params: &FieldParams) -> Result<()> {
    if params.kind != kind {
        return Err(Error::InvalidParameter(format!(
            "expected a {kind:?} field, got {:?}",
            params.kind
        )));
    }
    Ok(())
}

pub fn pscs_density(params: &FieldParams, basis: Basis) -> Result<DensityMatrix> {
    require(FieldKind::Pscs, params)?;
    Ok(DensityMatrix::from_ensemble(&params.components(basis)?))
}

pub fn mscs_density(params: &FieldParams, basis: Basis) -> Result<DensityMatrix> {
    require(FieldKind::Mscs, params)?;
    let components = params.components(basis)?;
    Ok(DensityMatrix::from_ensemble(&components))
}

/// PSCS photon statistics as |<n|alpha, zeta>|^2.
pub fn pscs_pcd_amplitude(params: &FieldParams, basis: Basis) -> Result<Pcd> {
    require(FieldKind::Pscs, params)?;
    let v = squeezed_coherent_amplitudes(params.alpha, params.zeta, basis)?;
    Ok(Pcd {
        probabilities: v.probabilities(),
    })
}

/// Hermite-form PSCS distribution
///
/// P(n) = 1/(n! mu) (nu/2mu)^k H_n^2(beta/sqrt(2 mu nu)) exp(-beta^2 (1 - nu/mu))
///
/// with beta = sqrt(N_c)(mu + nu) and `k` the exponent of the (nu/2mu)
/// factor. `PowerLaw::Order` gives k = n; `PowerLaw::Squared` gives k = 2.
/// Valid for real alpha and theta = 0 with nonzero squeezing.
pub fn pscs_pcd_hermite(params: &FieldParams, n_max: usize, power: PowerLaw) -> Option<Vec<f64>> {
    if params.n_s <= 0.0 {
        return None;
    }
    let mu = (1.0 + params.n_s).sqrt();
    let nu = params.n_s.sqrt();
    let beta = params.n_c.sqrt() * (mu + nu);
    let x = beta / (2.0 * mu * nu).sqrt();
    let ln_ratio = (nu / (2.0 * mu)).ln();
    let ln_exp = -beta * beta * (1.0 - nu / mu);
    let lf = ln_factorials(n_max);
    Some(
        (0..n_max)
            .map(|n| {
                let (ln_h, sign) = hermite_log(n, x);
                if sign == 0.0 {
                    return 0.0;
                }
                let k = match power {
                    PowerLaw::Order => n as f64,
                    PowerLaw::Squared => 2.0,
                };
                (-lf[n] - mu.ln() + k * ln_ratio + 2.0 * ln_h + ln_exp).exp()
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerLaw {
    Order,
    Squared,
}

/// Max-abs deviation of the Hermite forms from the amplitude-based PCD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteFormReport {
    /// (nu/2mu)^2 prefactor as commonly printed.
    pub printed_max_dev: f64,
    /// (nu/2mu)^n prefactor.
    pub order_power_max_dev: f64,
}

pub fn hermite_form_report(params: &FieldParams, pcd: &Pcd) -> Option<HermiteFormReport> {
    let n = pcd.probabilities.len();
    let dev = |v: Vec<f64>| {
        v.iter()
            .zip(&pcd.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    Some(HermiteFormReport {
        printed_max_dev: dev(pscs_pcd_hermite(params, n, PowerLaw::Squared)?),
        order_power_max_dev: dev(pscs_pcd_hermite(params, n, PowerLaw::Order)?),
    })
}

/// MSCS photon statistics from the even/odd case formula:
/// Poisson weight q on every level, plus the squeezed-vacuum weight
/// (1-q)/sqrt(1+N_s) n!/(2^n ((n/2)!)^2) (N_s/(1+N_s))^{n/2} on even levels.
pub fn mscs_pcd(params: &FieldParams, n_max: usize) -> Pcd {
    let (n_c, n_s, q) = (params.n_c, params.n_s, params.q);
    let lf = ln_factorials(n_max);
    let probabilities = (0..n_max)
        .map(|n| {
            let poisson = if n_c == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-n_c + n as f64 * n_c.ln() - lf[n]).exp()
            };
            let mut p = q * poisson;
            if n % 2 == 0 {
                let m = n / 2;
                let squeezed = if n_s == 0.0 {
                    if n == 0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    (-0.5 * (1.0 + n_s).ln() + lf[n]
                        - n as f64 * std::f64::consts::LN_2
                        - 2.0 * lf[m]
                        + m as f64 * (n_s / (1.0 + n_s)).ln())
                    .exp()
                };
                p += (1.0 - q) * squeezed;
            }
            p
        })
        .collect();
    Pcd { probabilities }
}

/// q N_c + (1 - q) N_s
pub fn mean_photon_mscs(params: &FieldParams) -> f64 {
    params.q * params.n_c + (1.0 - params.q) * params.n_s
}
