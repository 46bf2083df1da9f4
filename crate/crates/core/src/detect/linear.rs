use super::{prepare, Backend, DetectResult, DetectorSpec};
use crate::cplx::{matvec, CMatrix, CVector, OpCount};
use crate::decomp::{cholesky, gram_schmidt_qr, invert_direct, ldl};
use crate::error::{Error, Result};

/// Solves `G·x = rhs` through a factorization backend. The reference
/// backend's inversion is uncounted; only its final product is charged.
pub fn solve_gramian(
    g: &CMatrix,
    rhs: &CVector,
    backend: Backend,
    acc: &mut OpCount,
) -> Result<CVector> {
    match backend {
        Backend::Qr => gram_schmidt_qr(g, acc)?.solve(rhs, acc),
        Backend::Cholesky => cholesky(g, acc)?.solve(rhs, acc),
        Backend::Ldl => ldl(g, acc)?.solve(rhs, acc),
        Backend::Direct => matvec(&invert_direct(g)?, rhs, acc),
    }
}

/// Zero-forcing (`σ²` ignored) or MMSE equalization `(HᴴH + σ²I)⁻¹Hᴴy`.
pub fn detect_linear(
    h: &CMatrix,
    y: &CVector,
    sigma2: f64,
    spec: &DetectorSpec,
) -> Result<DetectResult> {
    let (reg, backend) = match *spec {
        DetectorSpec::Zf { backend } => (0.0, backend),
        DetectorSpec::Mmse { backend } => (sigma2, backend),
        other => {
            return Err(Error::InvalidParameter(format!(
                "{} is not a linear detector",
                other.name()
            )))
        }
    };
    let (gram, mf, preprocessing) = prepare(h, y, reg)?;
    let mut ops = OpCount::new();
    let x_soft = solve_gramian(&gram.g, &mf, backend, &mut ops)?;
    Ok(DetectResult {
        x_soft,
        ops,
        preprocessing,
        diverged: false,
    })
}
