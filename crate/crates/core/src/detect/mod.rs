//! Uplink symbol detectors.
//!
//! Every detector works on the Gramian system `G·x = Hᴴy`. Exact-inversion
//! detectors (ZF, MMSE) factor `G` through one of the [`Backend`]s; the
//! approximate detectors (Neumann series, Gauss-Seidel, conjugate gradient)
//! iterate on it; ADMIN wraps a cached LDLᴴ solve in a box-constrained ADMM
//! loop.
//!
//! Costs are split in [`DetectResult`]: `preprocessing` covers the Gramian
//! and matched filter shared by all detectors, `ops` the inversion or
//! iteration itself.

mod admin;
mod approx;
mod linear;
mod simo;

use std::fmt;

pub use admin::{admm_box, detect_admin, AdmmState};
pub use approx::{
    conjugate_gradient, detect_cg, detect_gs, detect_nsa, gauss_seidel, neumann_series,
    NeumannOutcome,
};
pub use linear::{detect_linear, solve_gramian};
pub use simo::{simo_bound, simo_equalize, BerEstimate};

use crate::cplx::{abs_sq, c, cadd, check_finite, dot_h_slices, CMatrix, CVector, OpCount};
use crate::error::{Error, Result};
use crate::phy::Constellation;

/// Hermitian Gramian `HᴴH + reg·I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gramian {
    pub g: CMatrix,
    pub regularization: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Qr,
    Cholesky,
    Ldl,
    /// Gauss-Jordan reference inverse.
    Direct,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Qr => "qr",
            Backend::Cholesky => "chol",
            Backend::Ldl => "ldl",
            Backend::Direct => "direct",
        }
    }
}

/// Starting point of the Gauss-Seidel sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GsInit {
    #[default]
    Zero,
    /// `X⁻¹·x_MF`, the diagonal approximation.
    Diagonal,
}

/// ADMM penalty parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    /// `β = factor·σ²`.
    NoiseScaled(f64),
    Fixed(f64),
}

impl Default for Beta {
    fn default() -> Self {
        Beta::NoiseScaled(1.0)
    }
}

impl Beta {
    pub fn resolve(self, sigma2: f64) -> Result<f64> {
        let beta = match self {
            Beta::NoiseScaled(f) => f * sigma2,
            Beta::Fixed(b) => b,
        };
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "ADMM penalty must be positive, got {beta}"
            )));
        }
        Ok(beta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorSpec {
    Zf { backend: Backend },
    Mmse { backend: Backend },
    Nsa { iterations: usize },
    Gs { iterations: usize, init: GsInit },
    Cg { iterations: usize },
    Admin { iterations: usize, beta: Beta },
}

impl DetectorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DetectorSpec::Zf { .. } => "zf",
            DetectorSpec::Mmse { .. } => "mmse",
            DetectorSpec::Nsa { .. } => "nsa",
            DetectorSpec::Gs { .. } => "gs",
            DetectorSpec::Cg { .. } => "cg",
            DetectorSpec::Admin { .. } => "admin",
        }
    }

    /// Parameter string with `;` separators (safe inside CSV fields).
    pub fn params(&self) -> String {
        match self {
            DetectorSpec::Zf { backend } | DetectorSpec::Mmse { backend } => {
                format!("backend={}", backend.name())
            }
            DetectorSpec::Nsa { iterations } | DetectorSpec::Cg { iterations } => {
                format!("t={iterations}")
            }
            DetectorSpec::Gs { iterations, init } => match init {
                GsInit::Zero => format!("t={iterations}"),
                GsInit::Diagonal => format!("t={iterations};init=diag"),
            },
            DetectorSpec::Admin { iterations, beta } => match beta {
                Beta::NoiseScaled(f) => format!("t={iterations};beta={f}*sigma2;backend=ldl"),
                Beta::Fixed(b) => format!("t={iterations};beta={b};backend=ldl"),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let iterations = match self {
            DetectorSpec::Zf { .. } | DetectorSpec::Mmse { .. } => return Ok(()),
            DetectorSpec::Nsa { iterations }
            | DetectorSpec::Gs { iterations, .. }
            | DetectorSpec::Cg { iterations } => *iterations,
            DetectorSpec::Admin { iterations, beta } => {
                match beta {
                    Beta::NoiseScaled(f) if !(*f > 0.0) => {
                        return Err(Error::InvalidParameter(format!("beta scale {f}")))
                    }
                    Beta::Fixed(b) if !(*b > 0.0) => {
                        return Err(Error::InvalidParameter(format!("beta {b}")))
                    }
                    _ => {}
                }
                *iterations
            }
        };
        if iterations == 0 {
            return Err(Error::InvalidParameter(format!(
                "{} needs at least one iteration",
                self.name()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for DetectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.params())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectResult {
    /// Equalized estimates before slicing.
    pub x_soft: CVector,
    /// Cost of the inversion / iteration path.
    pub ops: OpCount,
    /// Cost of the Gramian and matched filter.
    pub preprocessing: OpCount,
    /// Set by the Neumann detector when the last series term outgrew the previous one.
    pub diverged: bool,
}

fn check_system(h: &CMatrix, y: &CVector) -> Result<()> {
    if h.rows() != y.len() {
        return Err(Error::DimensionMismatch(format!(
            "channel has {} rows but y has length {}",
            h.rows(),
            y.len()
        )));
    }
    Ok(())
}

/// `Hᴴy`.
pub fn matched_filter(h: &CMatrix, y: &CVector, acc: &mut OpCount) -> Result<CVector> {
    check_system(h, y)?;
    crate::cplx::matvec_h(h, y, acc)
}

/// `HᴴH + reg·I`, computing the upper triangle and mirroring it.
pub fn gramian(h: &CMatrix, reg: f64, acc: &mut OpCount) -> Result<Gramian> {
    if !(reg >= 0.0) {
        return Err(Error::InvalidParameter(format!("regularization {reg}")));
    }
    let u = h.cols();
    let cols: Vec<CVector> = (0..u).map(|j| h.col(j)).collect();
    let mut g = CMatrix::zeros(u, u);
    for i in 0..u {
        let mut d = 0.0;
        for (k, z) in cols[i].iter().enumerate() {
            d += abs_sq(*z, acc);
            if k > 0 {
                acc.add += 1;
            }
        }
        if reg != 0.0 {
            d += reg;
            acc.add += 1;
        }
        g[(i, i)] = c(d, 0.0);
        for j in i + 1..u {
            let v = dot_h_slices(cols[i].as_slice(), cols[j].as_slice(), acc);
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    check_finite(g.as_slice().iter(), "gramian")?;
    Ok(Gramian {
        g,
        regularization: reg,
    })
}

/// Gramian and matched filter with their shared cost.
pub(crate) fn prepare(
    h: &CMatrix,
    y: &CVector,
    reg: f64,
) -> Result<(Gramian, CVector, OpCount)> {
    let mut pre = OpCount::new();
    let mf = matched_filter(h, y, &mut pre)?;
    let g = gramian(h, reg, &mut pre)?;
    Ok((g, mf, pre))
}

/// Runs any detector. `constellation` supplies the ADMIN box bound.
pub fn detect(
    h: &CMatrix,
    y: &CVector,
    sigma2: f64,
    spec: &DetectorSpec,
    constellation: &Constellation,
) -> Result<DetectResult> {
    spec.validate()?;
    match *spec {
        DetectorSpec::Zf { .. } | DetectorSpec::Mmse { .. } => detect_linear(h, y, sigma2, spec),
        DetectorSpec::Nsa { iterations } => detect_nsa(h, y, sigma2, iterations),
        DetectorSpec::Gs { iterations, init } => detect_gs(h, y, sigma2, iterations, init),
        DetectorSpec::Cg { iterations } => detect_cg(h, y, sigma2, iterations),
        DetectorSpec::Admin { iterations, beta } => detect_admin(
            h,
            y,
            sigma2,
            iterations,
            beta,
            constellation.max_coordinate(),
        ),
    }
}

/// Adds `v` into `acc_vec` with counted complex additions.
pub(crate) fn accumulate(acc_vec: &mut CVector, v: &CVector, acc: &mut OpCount) {
    for (a, b) in acc_vec.as_mut_slice().iter_mut().zip(v.iter()) {
        *a = cadd(*a, *b, acc);
    }
}
