//! Dense complex vectors and matrices with explicit operation counting.
//!
//! Every arithmetic routine that participates in a complexity comparison takes
//! an [`OpCount`] accumulator and charges it according to a fixed convention:
//!
//! | operation                  | real multiplications |
//! |----------------------------|----------------------|
//! | complex x complex          | 4                    |
//! | real x complex             | 2                    |
//! | real x real                | 1                    |
//! | `|z|^2` (norm contribution)| 4 (one complex mult) |
//! | conjugation, negation      | 0                    |
//!
//! Square roots and reciprocals are tallied separately. Helpers without an
//! accumulator argument (norms, differences, `hermitian`) are uncounted and
//! intended for bookkeeping, residual checks and test oracles.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Index, IndexMut};

use crate::error::{Error, Result};

pub type Complex = num_complex::Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

/// Tally of arithmetic operations for one algorithm invocation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpCount {
    pub sqrt: u64,
    pub reciprocal: u64,
    pub real_mul: u64,
    pub add: u64,
    pub sub: u64,
}

impl OpCount {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Add for OpCount {
    type Output = OpCount;

    fn add(self, rhs: OpCount) -> OpCount {
        OpCount {
            sqrt: self.sqrt + rhs.sqrt,
            reciprocal: self.reciprocal + rhs.reciprocal,
            real_mul: self.real_mul + rhs.real_mul,
            add: self.add + rhs.add,
            sub: self.sub + rhs.sub,
        }
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        *self = *self + rhs;
    }
}

impl Sum for OpCount {
    fn sum<I: Iterator<Item = OpCount>>(iter: I) -> Self {
        iter.fold(OpCount::default(), |a, b| a + b)
    }
}

impl fmt::Display for OpCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "sqrt={} recip={} mul={} add={} sub={}",
            self.sqrt, self.reciprocal, self.real_mul, self.add, self.sub
        )
    }
}

/// Real-multiplication weights of the two mixed-type scalar products.
///
/// Closed-form complexity expressions are linear in the number of complex and
/// real-complex products, so a convention maps structural counts to a
/// real-multiplication figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convention {
    pub complex_mul: u64,
    pub real_complex_mul: u64,
}

impl Convention {
    /// The hardware-unit convention used throughout this crate.
    pub const STANDARD: Convention = Convention {
        complex_mul: 4,
        real_complex_mul: 2,
    };

    pub fn real_mul(&self, complex_muls: u64, real_complex_muls: u64) -> u64 {
        self.complex_mul * complex_muls + self.real_complex_mul * real_complex_muls
    }
}

impl Default for Convention {
    fn default() -> Self {
        Self::STANDARD
    }
}

// --- counted scalar kernels ---

/// Complex product, charged 4 real multiplications, 1 addition, 1 subtraction.
#[inline]
pub fn cmul(a: Complex, b: Complex, acc: &mut OpCount) -> Complex {
    acc.real_mul += 4;
    acc.add += 1;
    acc.sub += 1;
    Complex::new(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)
}

/// Real times complex, charged 2 real multiplications.
#[inline]
pub fn rcmul(r: f64, b: Complex, acc: &mut OpCount) -> Complex {
    acc.real_mul += 2;
    Complex::new(r * b.re, r * b.im)
}

#[inline]
pub fn rmul(a: f64, b: f64, acc: &mut OpCount) -> f64 {
    acc.real_mul += 1;
    a * b
}

/// `|a|^2`, charged as one complex multiplication.
#[inline]
pub fn abs_sq(a: Complex, acc: &mut OpCount) -> f64 {
    acc.real_mul += 4;
    acc.add += 1;
    acc.sub += 1;
    a.re * a.re + a.im * a.im
}

#[inline]
pub fn cadd(a: Complex, b: Complex, acc: &mut OpCount) -> Complex {
    acc.add += 2;
    a + b
}

#[inline]
pub fn csub(a: Complex, b: Complex, acc: &mut OpCount) -> Complex {
    acc.sub += 2;
    a - b
}

#[inline]
pub fn recip(x: f64, acc: &mut OpCount) -> f64 {
    acc.reciprocal += 1;
    1.0 / x
}

#[inline]
pub fn sqrt(x: f64, acc: &mut OpCount) -> f64 {
    acc.sqrt += 1;
    x.sqrt()
}

#[inline]
pub(crate) fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Non-finite outputs are only screened in debug builds; release trusts inputs.
#[inline]
pub(crate) fn check_finite<'a>(
    mut values: impl Iterator<Item = &'a Complex>,
    what: &'static str,
) -> Result<()> {
    if cfg!(debug_assertions) && !values.all(|z| finite(*z)) {
        return Err(Error::NonFinite(what));
    }
    Ok(())
}

// --- vectors ---

/// Dense complex vector with a length fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    elems: Vec<Complex>,
}

impl CVector {
    pub fn new(elems: Vec<Complex>) -> Self {
        assert!(!elems.is_empty(), "CVector must have at least one element");
        Self { elems }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![ZERO; n])
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Complex) -> Self {
        Self::new((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.elems
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex] {
        &mut self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex> {
        self.elems.iter()
    }

    pub fn into_vec(self) -> Vec<Complex> {
        self.elems
    }

    /// Euclidean norm (uncounted).
    pub fn norm(&self) -> f64 {
        self.elems.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `self - other` (uncounted).
    pub fn minus(&self, other: &CVector) -> CVector {
        assert_eq!(self.len(), other.len());
        CVector::new(self.iter().zip(other.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.elems.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<usize> for CVector {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.elems[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex {
        &mut self.elems[i]
    }
}

impl From<Vec<Complex>> for CVector {
    fn from(elems: Vec<Complex>) -> Self {
        CVector::new(elems)
    }
}

/// `Σ conj(a_k)·b_k`.
pub fn dot_h(a: &CVector, b: &CVector, acc: &mut OpCount) -> Result<Complex> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "dot_h: lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let out = dot_h_slices(a.as_slice(), b.as_slice(), acc);
    check_finite(std::iter::once(&out), "dot_h")?;
    Ok(out)
}

#[inline]
pub(crate) fn dot_h_slices(a: &[Complex], b: &[Complex], acc: &mut OpCount) -> Complex {
    let mut sum = ZERO;
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        let p = cmul(x.conj(), *y, acc);
        sum = if k == 0 { p } else { cadd(sum, p, acc) };
    }
    sum
}

/// `Σ |a_k|^2`, each element charged as one complex multiplication.
pub fn norm_sq(a: &CVector, acc: &mut OpCount) -> Result<f64> {
    let out = norm_sq_slice(a.as_slice(), acc);
    if cfg!(debug_assertions) && !out.is_finite() {
        return Err(Error::NonFinite("norm_sq"));
    }
    Ok(out)
}

#[inline]
pub(crate) fn norm_sq_slice(a: &[Complex], acc: &mut OpCount) -> f64 {
    let mut sum = 0.0;
    for (k, z) in a.iter().enumerate() {
        let p = abs_sq(*z, acc);
        if k > 0 {
            acc.add += 1;
        }
        sum += p;
    }
    sum
}

// --- matrices ---

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    elems: Vec<Complex>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, elems: Vec<Complex>) -> Result<Self> {
        if rows * cols != elems.len() || rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix from {} elements",
                rows,
                cols,
                elems.len()
            )));
        }
        Ok(Self { rows, cols, elems })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        Self {
            rows,
            cols,
            elems: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        assert!(rows > 0 && cols > 0);
        let mut elems = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                elems.push(f(i, j));
            }
        }
        Self { rows, cols, elems }
    }

    /// Builds a matrix from nested rows of `(re, im)` pairs.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, cols, rows.concat())
    }

    pub fn diag(values: &[Complex]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.elems
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex> {
        (i < self.rows && j < self.cols).then(|| self.elems[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        assert!(i < self.rows, "row {i} out of bounds");
        &self.elems[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> CVector {
        assert!(j < self.cols, "column {j} out of bounds");
        CVector::from_fn(self.rows, |i| self.elems[i * self.cols + j])
    }

    pub fn diagonal(&self) -> Vec<Complex> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose. Free under the counting convention.
    pub fn hermitian(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn frobenius(&self) -> f64 {
        self.elems.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.elems.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self - other` (uncounted).
    pub fn minus(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            elems: self
                .elems
                .iter()
                .zip(&other.elems)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            elems: self.elems.iter().map(|z| z * s).collect(),
        }
    }

    /// `‖A − Aᴴ‖_F / ‖A‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let scale = self.frobenius();
        if scale == 0.0 {
            return 0.0;
        }
        self.minus(&self.hermitian()).frobenius() / scale
    }

    /// Relative Frobenius distance `‖self − other‖ / ‖other‖`.
    pub fn rel_diff(&self, other: &CMatrix) -> f64 {
        let denom = other.frobenius().max(f64::MIN_POSITIVE);
        self.minus(other).frobenius() / denom
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds for {}x{}",
            self.rows,
            self.cols
        );
        &self.elems[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds for {}x{}",
            self.rows,
            self.cols
        );
        &mut self.elems[i * self.cols + j]
    }
}

pub fn hermitian(a: &CMatrix) -> CMatrix {
    a.hermitian()
}

/// Counted product `A·B`: `4·rows·inner·cols` real multiplications.
pub fn matmul(a: &CMatrix, b: &CMatrix, acc: &mut OpCount) -> Result<CMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "matmul: {}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = CMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut sum = ZERO;
            for k in 0..a.cols {
                let p = cmul(a[(i, k)], b[(k, j)], acc);
                sum = if k == 0 { p } else { cadd(sum, p, acc) };
            }
            out[(i, j)] = sum;
        }
    }
    check_finite(out.elems.iter(), "matmul")?;
    Ok(out)
}

/// Counted product `A·x`.
pub fn matvec(a: &CMatrix, x: &CVector, acc: &mut OpCount) -> Result<CVector> {
    if a.cols != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "matvec: {}x{} times length {}",
            a.rows,
            a.cols,
            x.len()
        )));
    }
    let out = CVector::from_fn(a.rows, |i| {
        let mut sum = ZERO;
        for (k, (aik, xk)) in a.row(i).iter().zip(x.iter()).enumerate() {
            let p = cmul(*aik, *xk, acc);
            sum = if k == 0 { p } else { cadd(sum, p, acc) };
        }
        sum
    });
    check_finite(out.iter(), "matvec")?;
    Ok(out)
}

/// Counted product `Aᴴ·x` without materializing `Aᴴ`.
pub fn matvec_h(a: &CMatrix, x: &CVector, acc: &mut OpCount) -> Result<CVector> {
    if a.rows != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "matvec_h: ({}x{})^H times length {}",
            a.rows,
            a.cols,
            x.len()
        )));
    }
    let out = CVector::from_fn(a.cols, |j| {
        let mut sum = ZERO;
        for k in 0..a.rows {
            let p = cmul(a[(k, j)].conj(), x[k], acc);
            sum = if k == 0 { p } else { cadd(sum, p, acc) };
        }
        sum
    });
    check_finite(out.iter(), "matvec_h")?;
    Ok(out)
}
