//! Gram-Schmidt QR, Cholesky and LDLᴴ factorizations plus triangular solvers.
//!
//! All factorizations charge an [`OpCount`] so that measured real-multiplication
//! counts can be compared against their closed forms:
//!
//! * Gram-Schmidt QR: `U²(4U + 2)` real multiplications, `U` square roots, `U` reciprocals.
//! * Cholesky: `(2U³ + 3U² − 5U)/3` real multiplications, `U` square roots, `U` reciprocals.
//! * LDLᴴ: `(2U³ + 12U² − 14U)/3` real multiplications, `U` reciprocals, no square roots.
//!
//! The LDLᴴ figure follows from carrying `D` and `D⁻¹` through complex
//! multipliers during factorization: the per-pair products `conj(L_ij)·D_j`
//! and the column normalization `c·D_i⁻¹` are complex products.

use crate::cplx::{
    abs_sq, c, cmul, csub, rcmul, recip, sqrt, CMatrix, CVector, Complex, OpCount, ONE, ZERO,
};
use crate::error::{Error, Result};

/// Relative threshold for pivots, column norms and triangular diagonals.
pub const PIVOT_TOL: f64 = 1e-12;

/// Relative asymmetry above which an input is rejected as non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct QrFactors {
    pub q: CMatrix,
    pub r: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CholFactor {
    pub l: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LdlFactors {
    /// Unit lower triangular.
    pub l: CMatrix,
    /// Real positive diagonal of `D`.
    pub d: Vec<f64>,
}

impl QrFactors {
    pub fn reconstruct(&self) -> CMatrix {
        mul_uncounted(&self.q, &self.r)
    }
}

impl CholFactor {
    pub fn reconstruct(&self) -> CMatrix {
        mul_uncounted(&self.l, &self.l.hermitian())
    }
}

impl LdlFactors {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.d.len();
        let ld = CMatrix::from_fn(n, n, |i, j| self.l[(i, j)] * self.d[j]);
        mul_uncounted(&ld, &self.l.hermitian())
    }
}

impl QrFactors {
    /// `R⁻¹·Qᴴ·b`.
    pub fn solve(&self, b: &CVector, acc: &mut OpCount) -> Result<CVector> {
        let w = crate::cplx::matvec_h(&self.q, b, acc)?;
        backward_sub(&self.r, &w, acc)
    }
}

impl CholFactor {
    /// Forward substitution on `L`, then backward substitution on `Lᴴ`.
    pub fn solve(&self, b: &CVector, acc: &mut OpCount) -> Result<CVector> {
        let z = forward_sub(&self.l, b, acc)?;
        backward_sub(&self.l.hermitian(), &z, acc)
    }
}

impl LdlFactors {
    /// `L·z = b`, then `Lᴴ·x = D⁻¹·z`. The `D⁻¹` scaling costs `U`
    /// reciprocals and `2U` real multiplications.
    pub fn solve(&self, b: &CVector, acc: &mut OpCount) -> Result<CVector> {
        let mut z = forward_sub_unit(&self.l, b, acc)?;
        for (zi, &di) in z.as_mut_slice().iter_mut().zip(&self.d) {
            *zi = rcmul(recip(di, acc), *zi, acc);
        }
        backward_sub_unit(&self.l.hermitian(), &z, acc)
    }
}

fn mul_uncounted(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut scratch = OpCount::new();
    crate::cplx::matmul(a, b, &mut scratch).expect("conformable factors")
}

fn require_square(a: &CMatrix, what: &str) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.rows())
}

fn require_hermitian(a: &CMatrix) -> Result<()> {
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Classical Gram-Schmidt in its right-looking form: each column is
/// normalized, then its projection is removed from every later column.
pub fn gram_schmidt_qr(a: &CMatrix, acc: &mut OpCount) -> Result<QrFactors> {
    let n = require_square(a, "gram_schmidt_qr")?;
    // column-major working copy of Q
    let mut q: Vec<Vec<Complex>> = (0..n).map(|j| a.col(j).into_vec()).collect();
    let scale = q
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mut r = CMatrix::zeros(n, n);

    for i in 0..n {
        let nsq = crate::cplx::norm_sq_slice(&q[i], acc);
        let rii = sqrt(nsq, acc);
        if !(rii > PIVOT_TOL * scale) {
            return Err(Error::NearSingular {
                column: i,
                norm: rii,
            });
        }
        let inv = recip(rii, acc);
        for z in q[i].iter_mut() {
            *z = rcmul(inv, *z, acc);
        }
        r[(i, i)] = c(rii, 0.0);

        let (done, rest) = q.split_at_mut(i + 1);
        let qi = &done[i];
        for (offset, qj) in rest.iter_mut().enumerate() {
            let rij = crate::cplx::dot_h_slices(qi, qj, acc);
            for (zj, zi) in qj.iter_mut().zip(qi) {
                *zj = csub(*zj, cmul(rij, *zi, acc), acc);
            }
            r[(i, i + 1 + offset)] = rij;
        }
    }

    let q = CMatrix::from_fn(n, n, |i, j| q[j][i]);
    crate::cplx::check_finite(q.as_slice().iter(), "gram_schmidt_qr")?;
    Ok(QrFactors { q, r })
}

/// Cholesky factorization `A = L·Lᴴ` of a Hermitian positive-definite matrix.
pub fn cholesky(a: &CMatrix, acc: &mut OpCount) -> Result<CholFactor> {
    let n = require_square(a, "cholesky")?;
    require_hermitian(a)?;
    let tol = PIVOT_TOL * a.max_abs();
    let mut l = CMatrix::zeros(n, n);

    for i in 0..n {
        let mut pivot = a[(i, i)].re;
        for j in 0..i {
            pivot -= abs_sq(l[(i, j)], acc);
            acc.sub += 1;
        }
        if !(pivot > tol) {
            return Err(Error::NotPositiveDefinite { index: i, pivot });
        }
        let lii = sqrt(pivot, acc);
        l[(i, i)] = c(lii, 0.0);
        let inv = recip(lii, acc);

        for k in i + 1..n {
            let mut s = a[(k, i)];
            for j in 0..i {
                s = csub(s, cmul(l[(k, j)], l[(i, j)].conj(), acc), acc);
            }
            l[(k, i)] = rcmul(inv, s, acc);
        }
    }
    crate::cplx::check_finite(l.as_slice().iter(), "cholesky")?;
    Ok(CholFactor { l })
}

/// Square-root-free factorization `A = L·D·Lᴴ` with unit-diagonal `L`.
pub fn ldl(a: &CMatrix, acc: &mut OpCount) -> Result<LdlFactors> {
    let n = require_square(a, "ldl")?;
    require_hermitian(a)?;
    let tol = PIVOT_TOL * a.max_abs();
    let mut l = CMatrix::identity(n);
    let mut d = vec![ZERO; n];
    let mut t = vec![ZERO; n];

    for i in 0..n {
        for j in 0..i {
            t[j] = cmul(l[(i, j)].conj(), d[j], acc);
        }
        let mut di = a[(i, i)];
        for j in 0..i {
            di = csub(di, cmul(l[(i, j)], t[j], acc), acc);
        }
        // Hermitian input: the imaginary part is round-off only
        let pivot = di.re;
        if !(pivot > tol) {
            return Err(Error::NotPositiveDefinite { index: i, pivot });
        }
        d[i] = c(pivot, 0.0);
        let dinv = c(recip(pivot, acc), 0.0);

        for k in i + 1..n {
            let mut s = a[(k, i)];
            for j in 0..i {
                s = csub(s, cmul(l[(k, j)], t[j], acc), acc);
            }
            l[(k, i)] = cmul(s, dinv, acc);
        }
    }
    crate::cplx::check_finite(l.as_slice().iter(), "ldl")?;
    Ok(LdlFactors {
        l,
        d: d.into_iter().map(|z| z.re).collect(),
    })
}

/// Divides `s` by a triangular diagonal entry; real diagonals take the cheap path.
#[inline]
fn divide_by_diag(s: Complex, d: Complex, acc: &mut OpCount) -> Complex {
    if d.im == 0.0 {
        rcmul(recip(d.re, acc), s, acc)
    } else {
        let inv = recip(abs_sq(d, acc), acc);
        rcmul(inv, cmul(s, d.conj(), acc), acc)
    }
}

fn check_triangular_system(t: &CMatrix, b: &CVector, what: &str) -> Result<usize> {
    let n = require_square(t, what)?;
    if b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{what}: {n}x{n} system with right-hand side of length {}",
            b.len()
        )));
    }
    Ok(n)
}

fn check_diagonal(t: &CMatrix, n: usize) -> Result<()> {
    let tol = PIVOT_TOL * t.max_abs();
    for i in 0..n {
        if !(t[(i, i)].norm() > tol) {
            return Err(Error::SingularTriangular { index: i });
        }
    }
    Ok(())
}

fn forward(l: &CMatrix, b: &CVector, unit: bool, acc: &mut OpCount) -> Result<CVector> {
    let n = check_triangular_system(l, b, "forward_sub")?;
    if !unit {
        check_diagonal(l, n)?;
    }
    let mut z = CVector::zeros(n);
    for i in 0..n {
        let mut s = b[i];
        for j in 0..i {
            s = csub(s, cmul(l[(i, j)], z[j], acc), acc);
        }
        z[i] = if unit { s } else { divide_by_diag(s, l[(i, i)], acc) };
    }
    crate::cplx::check_finite(z.iter(), "forward_sub")?;
    Ok(z)
}

fn backward(u: &CMatrix, b: &CVector, unit: bool, acc: &mut OpCount) -> Result<CVector> {
    let n = check_triangular_system(u, b, "backward_sub")?;
    if !unit {
        check_diagonal(u, n)?;
    }
    let mut x = CVector::zeros(n);
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s = csub(s, cmul(u[(i, j)], x[j], acc), acc);
        }
        x[i] = if unit { s } else { divide_by_diag(s, u[(i, i)], acc) };
    }
    crate::cplx::check_finite(x.iter(), "backward_sub")?;
    Ok(x)
}

/// Solves `L·z = b` for lower-triangular `L`. Entries above the diagonal are ignored.
pub fn forward_sub(l: &CMatrix, b: &CVector, acc: &mut OpCount) -> Result<CVector> {
    forward(l, b, false, acc)
}

/// As [`forward_sub`], treating the diagonal as ones without reading it.
pub fn forward_sub_unit(l: &CMatrix, b: &CVector, acc: &mut OpCount) -> Result<CVector> {
    forward(l, b, true, acc)
}

/// Solves `U·x = b` for upper-triangular `U`. Entries below the diagonal are ignored.
pub fn backward_sub(u: &CMatrix, b: &CVector, acc: &mut OpCount) -> Result<CVector> {
    backward(u, b, false, acc)
}

pub fn backward_sub_unit(u: &CMatrix, b: &CVector, acc: &mut OpCount) -> Result<CVector> {
    backward(u, b, true, acc)
}

/// Gauss-Jordan inversion with partial pivoting. Uncounted; used as a reference.
pub fn invert_direct(a: &CMatrix) -> Result<CMatrix> {
    let n = require_square(a, "invert_direct")?;
    let tol = 1e-14 * a.max_abs();
    let mut m = a.clone();
    let mut inv = CMatrix::identity(n);

    for col in 0..n {
        let (pivot_row, pivot_abs) = (col..n)
            .map(|r| (r, m[(r, col)].norm()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot_abs > tol) {
            return Err(Error::Singular(col));
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = m[(col, j)];
                m[(col, j)] = m[(pivot_row, j)];
                m[(pivot_row, j)] = tmp;
                let tmp = inv[(col, j)];
                inv[(col, j)] = inv[(pivot_row, j)];
                inv[(pivot_row, j)] = tmp;
            }
        }
        let p = ONE / m[(col, col)];
        for j in 0..n {
            m[(col, j)] *= p;
            inv[(col, j)] *= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[(r, col)];
            if f == ZERO {
                continue;
            }
            for j in 0..n {
                let mv = m[(col, j)];
                let iv = inv[(col, j)];
                m[(r, j)] -= f * mv;
                inv[(r, j)] -= f * iv;
            }
        }
    }
    crate::cplx::check_finite(inv.as_slice().iter(), "invert_direct")?;
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cplx::matvec;
    use crate::testutil::{random_gramian, random_matrix};

    fn rows(r: &[&[(f64, f64)]]) -> CMatrix {
        CMatrix::from_rows(
            &r.iter()
                .map(|row| row.iter().map(|&(re, im)| c(re, im)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn vector(v: &[(f64, f64)]) -> CVector {
        CVector::new(v.iter().map(|&(re, im)| c(re, im)).collect())
    }

    fn qr_rm(u: u64) -> u64 {
        u * u * (4 * u + 2)
    }

    fn chol_rm(u: u64) -> u64 {
        (2 * u * u * u + 3 * u * u - 5 * u) / 3
    }

    fn ldl_rm(u: u64) -> u64 {
        (2 * u * u * u + 12 * u * u - 14 * u) / 3
    }

    #[test]
    fn qr_of_identity_is_identity() {
        let f = gram_schmidt_qr(&CMatrix::identity(4), &mut OpCount::new()).unwrap();
        assert_eq!(f.q, CMatrix::identity(4));
        assert_eq!(f.r, CMatrix::identity(4));
    }

    #[test]
    fn qr_of_positive_diagonal() {
        let a = rows(&[&[(2.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (3.0, 0.0)]]);
        let f = gram_schmidt_qr(&a, &mut OpCount::new()).unwrap();
        assert_eq!(f.q, CMatrix::identity(2));
        assert_eq!(f.r, a);
    }

    #[test]
    fn qr_counts_at_eight_users() {
        let g = random_gramian(8, 8, 0.1, 3);
        let mut acc = OpCount::new();
        gram_schmidt_qr(&g, &mut acc).unwrap();
        assert_eq!(acc.real_mul, 2176);
        assert_eq!(acc.sqrt, 8);
        assert_eq!(acc.reciprocal, 8);
    }

    #[test]
    fn qr_rejects_dependent_columns() {
        let a = rows(&[&[(1.0, 0.0), (2.0, 0.0)], &[(1.0, 1.0), (2.0, 2.0)]]);
        assert!(matches!(
            gram_schmidt_qr(&a, &mut OpCount::new()),
            Err(Error::NearSingular { column: 1, .. })
        ));
    }

    #[test]
    fn cholesky_examples() {
        let f = cholesky(&CMatrix::identity(5), &mut OpCount::new()).unwrap();
        assert_eq!(f.l, CMatrix::identity(5));
        for (u, expected) in [(8, 392), (16, 2960), (32, 22816)] {
            let mut acc = OpCount::new();
            cholesky(&random_gramian(u + 4, u, 0.5, u as u64), &mut acc).unwrap();
            assert_eq!(acc.real_mul, expected, "U={u}");
            assert_eq!(acc.sqrt, u as u64);
            assert_eq!(acc.reciprocal, u as u64);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite_and_asymmetric() {
        let indefinite = rows(&[&[(1.0, 0.0), (2.0, 0.0)], &[(2.0, 0.0), (1.0, 0.0)]]);
        assert!(matches!(
            cholesky(&indefinite, &mut OpCount::new()),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
        let asym = rows(&[&[(2.0, 0.0), (1.0, 0.0)], &[(0.0, 0.0), (2.0, 0.0)]]);
        assert!(matches!(
            cholesky(&asym, &mut OpCount::new()),
            Err(Error::NotHermitian(_))
        ));
        assert!(matches!(
            ldl(&indefinite, &mut OpCount::new()),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn ldl_examples() {
        let f = ldl(&CMatrix::identity(3), &mut OpCount::new()).unwrap();
        assert_eq!(f.l, CMatrix::identity(3));
        assert_eq!(f.d, vec![1.0; 3]);

        let a = rows(&[&[(4.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (9.0, 0.0)]]);
        let f = ldl(&a, &mut OpCount::new()).unwrap();
        assert_eq!(f.l, CMatrix::identity(2));
        assert_eq!(f.d, vec![4.0, 9.0]);

        let g = random_gramian(12, 8, 0.3, 77);
        let f = ldl(&g, &mut OpCount::new()).unwrap();
        assert!(f.reconstruct().rel_diff(&g) <= 1e-10);
        for i in 0..8 {
            assert_eq!(f.l[(i, i)], ONE);
            for j in i + 1..8 {
                assert_eq!(f.l[(i, j)], ZERO);
            }
        }
    }

    #[test]
    fn ldl_counts_match_table_values() {
        for (u, expected) in [(8u64, 560u64), (16, 3680), (32, 25792)] {
            let mut acc = OpCount::new();
            ldl(&random_gramian(u as usize * 2, u as usize, 0.5, u), &mut acc).unwrap();
            assert_eq!(acc.real_mul, expected);
            assert_eq!(acc.sqrt, 0);
            assert_eq!(acc.reciprocal, u);
        }
    }

    #[test]
    fn counts_match_closed_forms_for_all_sizes() {
        for u in 2..=64usize {
            let g = random_gramian(u + 2, u, 1.0, 1000 + u as u64);
            let mut qr = OpCount::new();
            gram_schmidt_qr(&g, &mut qr).unwrap();
            let mut ch = OpCount::new();
            cholesky(&g, &mut ch).unwrap();
            let mut ld = OpCount::new();
            ldl(&g, &mut ld).unwrap();
            let u = u as u64;
            assert_eq!(qr.real_mul, qr_rm(u), "QR U={u}");
            assert_eq!(ch.real_mul, chol_rm(u), "Cholesky U={u}");
            assert_eq!(ld.real_mul, ldl_rm(u), "LDL U={u}");
        }
    }

    #[test]
    fn reconstruction_over_random_gramians() {
        let sizes = [2usize, 4, 8, 16, 32];
        for trial in 0..1000u64 {
            let u = sizes[(trial % 5) as usize];
            let g = random_gramian(u + u / 2 + 1, u, 0.05 + (trial % 7) as f64 * 0.1, trial);
            let qr = gram_schmidt_qr(&g, &mut OpCount::new()).unwrap();
            let ch = cholesky(&g, &mut OpCount::new()).unwrap();
            let ld = ldl(&g, &mut OpCount::new()).unwrap();
            assert!(qr.reconstruct().rel_diff(&g) <= 1e-10);
            let qhq = mul_uncounted(&qr.q.hermitian(), &qr.q);
            assert!(qhq.minus(&CMatrix::identity(u)).frobenius() / (u as f64).sqrt() <= 1e-10);
            assert!(ch.reconstruct().rel_diff(&g) <= 1e-10);
            assert!(ld.reconstruct().rel_diff(&g) <= 1e-10);
        }
    }

    #[test]
    fn factor_structure() {
        let g = random_gramian(24, 16, 0.2, 5);
        let qr = gram_schmidt_qr(&g, &mut OpCount::new()).unwrap();
        let ch = cholesky(&g, &mut OpCount::new()).unwrap();
        for i in 0..16 {
            assert!(qr.r[(i, i)].im == 0.0 && qr.r[(i, i)].re > 0.0);
            assert!(ch.l[(i, i)].im == 0.0 && ch.l[(i, i)].re > 0.0);
            for j in 0..i {
                assert_eq!(qr.r[(i, j)], ZERO);
                assert_eq!(ch.l[(j, i)], ZERO);
            }
        }
    }

    #[test]
    fn cholesky_is_scaled_ldl() {
        for seed in 0..20 {
            let g = random_gramian(20, 12, 0.4, seed);
            let ch = cholesky(&g, &mut OpCount::new()).unwrap();
            let ld = ldl(&g, &mut OpCount::new()).unwrap();
            for i in 0..12 {
                for j in 0..12 {
                    let scaled = ld.l[(i, j)] * ld.d[j].sqrt();
                    assert!((ch.l[(i, j)] - scaled).norm() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn triangular_hand_solves() {
        let b = vector(&[(0.5, -1.0), (2.0, 3.0), (1.0, 0.0)]);
        assert_eq!(forward_sub(&CMatrix::identity(3), &b, &mut OpCount::new()).unwrap(), b);
        assert_eq!(backward_sub(&CMatrix::identity(3), &b, &mut OpCount::new()).unwrap(), b);

        let l = rows(&[&[(2.0, 0.0), (0.0, 0.0)], &[(1.0, 0.0), (1.0, 0.0)]]);
        let z = forward_sub(&l, &vector(&[(2.0, 0.0), (2.0, 0.0)]), &mut OpCount::new()).unwrap();
        assert_eq!(z, vector(&[(1.0, 0.0), (1.0, 0.0)]));

        let u = rows(&[&[(1.0, 0.0), (1.0, 0.0)], &[(0.0, 0.0), (2.0, 0.0)]]);
        let x = backward_sub(&u, &vector(&[(3.0, 0.0), (2.0, 0.0)]), &mut OpCount::new()).unwrap();
        assert_eq!(x, vector(&[(2.0, 0.0), (1.0, 0.0)]));
    }

    #[test]
    fn triangular_residuals_random() {
        for seed in 0..10 {
            let m = random_matrix(16, 16, seed);
            // well-conditioned triangles: dominant complex diagonal
            let lower = CMatrix::from_fn(16, 16, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Greater => m[(i, j)],
                std::cmp::Ordering::Equal => m[(i, j)] + c(4.0, 1.0),
                std::cmp::Ordering::Less => ZERO,
            });
            let upper = lower.hermitian();
            let b = random_matrix(16, 1, seed + 100).col(0);

            let z = forward_sub(&lower, &b, &mut OpCount::new()).unwrap();
            let r = matvec(&lower, &z, &mut OpCount::new()).unwrap().minus(&b);
            assert!(r.norm() / b.norm() <= 1e-10);

            let x = backward_sub(&upper, &b, &mut OpCount::new()).unwrap();
            let r = matvec(&upper, &x, &mut OpCount::new()).unwrap().minus(&b);
            assert!(r.norm() / b.norm() <= 1e-10);
        }
    }

    #[test]
    fn singular_triangle_rejected() {
        let l = rows(&[&[(1.0, 0.0), (0.0, 0.0)], &[(1.0, 0.0), (0.0, 0.0)]]);
        let b = vector(&[(1.0, 0.0), (1.0, 0.0)]);
        assert_eq!(
            forward_sub(&l, &b, &mut OpCount::new()),
            Err(Error::SingularTriangular { index: 1 })
        );
        assert!(forward_sub(&l, &CVector::zeros(3), &mut OpCount::new()).is_err());
    }

    #[test]
    fn invert_direct_cases() {
        assert_eq!(invert_direct(&CMatrix::identity(3)).unwrap(), CMatrix::identity(3));
        let d = rows(&[&[(2.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (4.0, 0.0)]]);
        let inv = invert_direct(&d).unwrap();
        assert_eq!(inv, rows(&[&[(0.5, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (0.25, 0.0)]]));

        let g = random_gramian(12, 8, 0.1, 42);
        let inv = invert_direct(&g).unwrap();
        let residual = mul_uncounted(&g, &inv).minus(&CMatrix::identity(8)).frobenius();
        assert!(residual <= 1e-9);

        let singular = rows(&[&[(1.0, 0.0), (2.0, 0.0)], &[(2.0, 0.0), (4.0, 0.0)]]);
        assert!(matches!(invert_direct(&singular), Err(Error::Singular(_))));
    }

    #[test]
    fn chained_solves_match_direct_inverse() {
        for seed in 0..50 {
            let u = 4 + (seed as usize % 13);
            let g = random_gramian(2 * u, u, 0.3, seed);
            let b = random_matrix(u, 1, seed + 500).col(0);
            let expected = matvec(&invert_direct(&g).unwrap(), &b, &mut OpCount::new()).unwrap();

            let ch = cholesky(&g, &mut OpCount::new()).unwrap();
            let z = forward_sub(&ch.l, &b, &mut OpCount::new()).unwrap();
            let x = backward_sub(&ch.l.hermitian(), &z, &mut OpCount::new()).unwrap();
            assert!(x.minus(&expected).norm() / expected.norm() <= 1e-8);

            let ld = ldl(&g, &mut OpCount::new()).unwrap();
            let mut z = forward_sub_unit(&ld.l, &b, &mut OpCount::new()).unwrap();
            for (zi, di) in z.as_mut_slice().iter_mut().zip(&ld.d) {
                *zi /= *di;
            }
            let x = backward_sub_unit(&ld.l.hermitian(), &z, &mut OpCount::new()).unwrap();
            assert!(x.minus(&expected).norm() / expected.norm() <= 1e-8);
        }
    }
}
