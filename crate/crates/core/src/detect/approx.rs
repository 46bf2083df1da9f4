//! Approximate-inversion detectors: Neumann series, Gauss-Seidel and
//! conjugate gradient, all operating on `G·x = x_MF`.

use super::{accumulate, prepare, DetectResult, GsInit};
use crate::cplx::{
    cmul, csub, dot_h, matvec, norm_sq, rcmul, recip, rmul, CMatrix, CVector, OpCount, ZERO,
};
use crate::error::{Error, Result};

fn require_iterations(t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::InvalidParameter("iteration count must be >= 1".into()));
    }
    Ok(())
}

fn require_system(g: &CMatrix, b: &CVector) -> Result<usize> {
    if !g.is_square() || g.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with right-hand side of length {}",
            g.rows(),
            g.cols(),
            b.len()
        )));
    }
    Ok(b.len())
}

/// Reciprocals of the (real) Gramian diagonal.
fn diagonal_inverse(g: &CMatrix, acc: &mut OpCount) -> Result<Vec<f64>> {
    let tol = f64::MIN_POSITIVE.sqrt() * g.max_abs();
    (0..g.rows())
        .map(|i| {
            let d = g[(i, i)].re;
            if !(d.abs() > tol) {
                return Err(Error::SingularTriangular { index: i });
            }
            Ok(recip(d, acc))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeumannOutcome {
    pub x: CVector,
    /// Norms of the series terms `(−X⁻¹E)^k X⁻¹ b`, `k = 0..t−1`.
    pub term_norms: Vec<f64>,
    pub diverged: bool,
}

/// Truncated Neumann series `Σ_{k<t} (−X⁻¹E)^k X⁻¹ b` with `G = X + E`
/// split into diagonal and off-diagonal parts. Terms are generated by
/// repeated matrix-vector products.
pub fn neumann_series(
    g: &CMatrix,
    b: &CVector,
    t: usize,
    acc: &mut OpCount,
) -> Result<NeumannOutcome> {
    require_iterations(t)?;
    let n = require_system(g, b)?;
    let xinv = diagonal_inverse(g, acc)?;

    let mut term = CVector::from_fn(n, |i| rcmul(xinv[i], b[i], acc));
    let mut x = term.clone();
    let mut term_norms = vec![term.norm()];
    for _ in 1..t {
        let next = CVector::from_fn(n, |i| {
            let mut s = ZERO;
            for j in (0..n).filter(|&j| j != i) {
                s = crate::cplx::cadd(s, cmul(g[(i, j)], term[j], acc), acc);
            }
            -rcmul(xinv[i], s, acc)
        });
        accumulate(&mut x, &next, acc);
        term_norms.push(next.norm());
        term = next;
    }
    crate::cplx::check_finite(x.iter(), "neumann_series")?;
    let diverged = term_norms.len() >= 2 && {
        let k = term_norms.len();
        term_norms[k - 1] > term_norms[k - 2]
    };
    Ok(NeumannOutcome {
        x,
        term_norms,
        diverged,
    })
}

/// `t` Gauss-Seidel sweeps `x ← (D+L)⁻¹(b − R·x)`, applied row by row as a
/// forward substitution. `observe` sees the iterate after every sweep.
pub fn gauss_seidel(
    g: &CMatrix,
    b: &CVector,
    t: usize,
    init: GsInit,
    acc: &mut OpCount,
    mut observe: impl FnMut(&CVector),
) -> Result<CVector> {
    require_iterations(t)?;
    let n = require_system(g, b)?;
    let dinv = diagonal_inverse(g, acc)?;
    let mut x = match init {
        GsInit::Zero => CVector::zeros(n),
        GsInit::Diagonal => CVector::from_fn(n, |i| rcmul(dinv[i], b[i], acc)),
    };
    for _ in 0..t {
        for i in 0..n {
            let mut s = b[i];
            for j in (0..n).filter(|&j| j != i) {
                s = csub(s, cmul(g[(i, j)], x[j], acc), acc);
            }
            x[i] = rcmul(dinv[i], s, acc);
        }
        crate::cplx::check_finite(x.iter(), "gauss_seidel")?;
        observe(&x);
    }
    Ok(x)
}

/// Conjugate gradient from `x⁰ = 0`. `observe` receives each iterate and its
/// squared residual norm. Stops early once the residual vanishes.
pub fn conjugate_gradient(
    g: &CMatrix,
    b: &CVector,
    t: usize,
    acc: &mut OpCount,
    mut observe: impl FnMut(&CVector, f64),
) -> Result<CVector> {
    require_iterations(t)?;
    let n = require_system(g, b)?;
    let mut x = CVector::zeros(n);
    let mut r = b.clone();
    let mut p = b.clone();
    let mut rr = norm_sq(&r, acc)?;
    let floor = rr * 1e-30;

    for _ in 0..t {
        if rr <= floor {
            break;
        }
        let w = matvec(g, &p, acc)?;
        let pgp = dot_h(&p, &w, acc)?.re;
        if !(pgp > 0.0) {
            return Err(Error::Breakdown(pgp));
        }
        let alpha = rmul(rr, recip(pgp, acc), acc);
        for i in 0..n {
            x[i] = crate::cplx::cadd(x[i], rcmul(alpha, p[i], acc), acc);
            r[i] = csub(r[i], rcmul(alpha, w[i], acc), acc);
        }
        let rr_next = norm_sq(&r, acc)?;
        let beta = rmul(rr_next, recip(rr, acc), acc);
        for i in 0..n {
            p[i] = crate::cplx::cadd(r[i], rcmul(beta, p[i], acc), acc);
        }
        rr = rr_next;
        observe(&x, rr);
    }
    crate::cplx::check_finite(x.iter(), "conjugate_gradient")?;
    Ok(x)
}

pub fn detect_nsa(h: &CMatrix, y: &CVector, sigma2: f64, t: usize) -> Result<DetectResult> {
    let (gram, mf, preprocessing) = prepare(h, y, sigma2)?;
    let mut ops = OpCount::new();
    let out = neumann_series(&gram.g, &mf, t, &mut ops)?;
    Ok(DetectResult {
        x_soft: out.x,
        ops,
        preprocessing,
        diverged: out.diverged,
    })
}

pub fn detect_gs(
    h: &CMatrix,
    y: &CVector,
    sigma2: f64,
    t: usize,
    init: GsInit,
) -> Result<DetectResult> {
    let (gram, mf, preprocessing) = prepare(h, y, sigma2)?;
    let mut ops = OpCount::new();
    let x_soft = gauss_seidel(&gram.g, &mf, t, init, &mut ops, |_| {})?;
    Ok(DetectResult {
        x_soft,
        ops,
        preprocessing,
        diverged: false,
    })
}

pub fn detect_cg(h: &CMatrix, y: &CVector, sigma2: f64, t: usize) -> Result<DetectResult> {
    let (gram, mf, preprocessing) = prepare(h, y, sigma2)?;
    let mut ops = OpCount::new();
    let x_soft = conjugate_gradient(&gram.g, &mf, t, &mut ops, |_, _| {})?;
    Ok(DetectResult {
        x_soft,
        ops,
        preprocessing,
        diverged: false,
    })
}
