//! ADMM-based box-constrained detection.
//!
//! Scaled-form ADMM on `min ‖y − Hx‖²` subject to every real and imaginary
//! coordinate lying in `[−b, b]`:
//!
//! ```text
//! x ← (HᴴH + βI)⁻¹ (Hᴴy + β(z − λ))
//! z ← clip(x + λ, −b, b)
//! λ ← λ + x − z
//! ```
//!
//! with `z = λ = 0` initially, so the first x-update is the MMSE estimate
//! with `σ²` replaced by `β`. `HᴴH + βI` is factored once (LDLᴴ) and reused.

use super::{prepare, Beta, DetectResult};
use crate::cplx::{c, cadd, csub, rcmul, CMatrix, CVector, Complex, OpCount};
use crate::decomp::{ldl, LdlFactors};
use crate::error::{Error, Result};

/// Iterates after one ADMM round.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState {
    pub x: CVector,
    pub z: CVector,
    pub lambda: CVector,
}

fn clip(v: Complex, bound: f64) -> Complex {
    c(v.re.clamp(-bound, bound), v.im.clamp(-bound, bound))
}

/// Runs `t` ADMM rounds on cached factors of `HᴴH + βI`; returns the last `x`.
pub fn admm_box(
    factors: &LdlFactors,
    mf: &CVector,
    beta: f64,
    t: usize,
    bound: f64,
    acc: &mut OpCount,
    mut observe: impl FnMut(&AdmmState),
) -> Result<CVector> {
    if t == 0 {
        return Err(Error::InvalidParameter("ADMIN needs at least one iteration".into()));
    }
    if !(bound > 0.0) {
        return Err(Error::InvalidParameter(format!("box bound {bound}")));
    }
    let n = mf.len();
    let mut z = CVector::zeros(n);
    let mut lambda = CVector::zeros(n);
    let mut x = CVector::zeros(n);

    for round in 0..t {
        let rhs = if round == 0 {
            mf.clone()
        } else {
            CVector::from_fn(n, |i| {
                let gap = csub(z[i], lambda[i], acc);
                cadd(mf[i], rcmul(beta, gap, acc), acc)
            })
        };
        x = factors.solve(&rhs, acc)?;
        for i in 0..n {
            let v = cadd(x[i], lambda[i], acc);
            z[i] = clip(v, bound);
            lambda[i] = csub(v, z[i], acc);
        }
        observe(&AdmmState {
            x: x.clone(),
            z: z.clone(),
            lambda: lambda.clone(),
        });
    }
    Ok(x)
}

/// ADMIN detector with box half-width `bound` (the largest constellation coordinate).
pub fn detect_admin(
    h: &CMatrix,
    y: &CVector,
    sigma2: f64,
    t: usize,
    beta: Beta,
    bound: f64,
) -> Result<DetectResult> {
    let beta = beta.resolve(sigma2)?;
    let (gram, mf, preprocessing) = prepare(h, y, beta)?;
    let mut ops = OpCount::new();
    let factors = ldl(&gram.g, &mut ops)?;
    let x_soft = admm_box(&factors, &mf, beta, t, bound, &mut ops, |_| {})?;
    Ok(DetectResult {
        x_soft,
        ops,
        preprocessing,
        diverged: false,
    })
}
