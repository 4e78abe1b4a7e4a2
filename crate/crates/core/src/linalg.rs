//! Dense complex linear algebra helpers shared by every solver.
//!
//! Everything here works on `DMatrix<Complex64>`. The matrices in this
//! problem are small (a handful to a few dozen rows), so the helpers favour
//! eigendecompositions and Cholesky factorizations over anything clever.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix used for channels, covariances and gradients.
pub type CMatrix = DMatrix<Complex64>;

/// Relative tolerance for Hermitian symmetry checks.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Relative tolerance for positive-semidefiniteness checks.
pub const PSD_TOL: f64 = 1e-9;

#[inline]
pub fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Builds a complex matrix from row-major real entries.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&v| re(v)))
}

/// Builds a complex matrix from row-major real and imaginary parts.
pub fn from_parts(rows: usize, cols: usize, real: &[f64], imag: &[f64]) -> CMatrix {
    assert_eq!(real.len(), rows * cols, "real part must have rows * cols entries");
    assert_eq!(imag.len(), rows * cols, "imaginary part must have rows * cols entries");
    CMatrix::from_row_iterator(rows, cols, real.iter().zip(imag).map(|(&a, &b)| Complex64::new(a, b)))
}

/// Diagonal matrix with real entries.
pub fn real_diag(values: &[f64]) -> CMatrix {
    let mut m = zeros(values.len(), values.len());
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = re(v);
    }
    m
}

pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Frobenius norm.
#[inline]
pub fn frob(a: &CMatrix) -> f64 {
    a.norm()
}

/// `‖A − Aᴴ‖_F / max(1, ‖A‖_F)`.
pub fn hermitian_asymmetry(a: &CMatrix) -> f64 {
    if !a.is_square() {
        return f64::INFINITY;
    }
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            acc += (a[(i, j)] - a[(j, i)].conj()).norm_sqr();
        }
    }
    acc.sqrt() / frob(a).max(1.0)
}

/// `(A + Aᴴ) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * re(0.5)
}

/// Checks Hermitian symmetry within [`HERMITIAN_TOL`].
pub fn ensure_hermitian(a: &CMatrix) -> Result<()> {
    if !is_finite(a) {
        return Err(Error::NonFinite);
    }
    let asym = hermitian_asymmetry(a);
    if asym > HERMITIAN_TOL {
        return Err(Error::NotHermitian(asym));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEig {
    /// `U diag(f(λ)) Uᴴ`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        reconstruct(&self.vectors, &mapped)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of the Hermitian part of `a`.
pub fn eigh(a: &CMatrix) -> HermitianEig {
    let n = a.nrows();
    if n == 0 {
        return HermitianEig { values: Vec::new(), vectors: zeros(0, 0) };
    }
    if n == 1 {
        return HermitianEig { values: vec![a[(0, 0)].re], vectors: identity(1) };
    }
    let eig = hermitian_part(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEig { values, vectors }
}

/// `U diag(values) Uᴴ`.
pub fn reconstruct(vectors: &CMatrix, values: &[f64]) -> CMatrix {
    let mut scaled = vectors.clone();
    for (j, &v) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(v);
    }
    let mut out = scaled * vectors.adjoint();
    // Symmetrize away round-off so downstream Hermitian checks stay tight.
    let n = out.nrows();
    for i in 0..n {
        out[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            let avg = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
            out[(i, j)] = avg;
            out[(j, i)] = avg.conj();
        }
    }
    out
}

pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    eigh(a).min()
}

/// PSD within the relative tolerance `λ_min ≥ −PSD_TOL · max(1, ‖A‖_F)`.
pub fn is_psd(a: &CMatrix) -> bool {
    min_eigenvalue(a) >= -PSD_TOL * frob(a).max(1.0)
}

/// Principal square root of a Hermitian PSD matrix; negative eigenvalues are clamped to zero.
pub fn psd_sqrt(a: &CMatrix) -> CMatrix {
    eigh(a).map(|v| v.max(0.0).sqrt())
}

/// Projection onto the PSD cone (negative eigenvalues clamped).
pub fn psd_part(a: &CMatrix) -> CMatrix {
    eigh(a).map(|v| v.max(0.0))
}

/// `A^{-1/2}` for a Hermitian positive definite matrix; eigenvalues below `floor` are an error.
pub fn inv_sqrt_pd(a: &CMatrix, floor: f64) -> Result<CMatrix> {
    let eig = eigh(a);
    if eig.min() < floor {
        return Err(Error::Singular(eig.min()));
    }
    Ok(eig.map(|v| 1.0 / v.sqrt()))
}

/// `A^{-1}` for a Hermitian positive definite matrix via EVD; eigenvalues below `floor` are an error.
pub fn inv_pd_eig(a: &CMatrix, floor: f64) -> Result<CMatrix> {
    let eig = eigh(a);
    if eig.min() < floor {
        return Err(Error::Singular(eig.min()));
    }
    Ok(eig.map(|v| 1.0 / v))
}

// The complex Cholesky happily takes square roots of negative pivots, so the
// factor's diagonal is checked explicitly.
fn cholesky(a: &CMatrix) -> Result<nalgebra::Cholesky<Complex64, nalgebra::Dyn>> {
    let singular = || Error::Singular(min_eigenvalue(a));
    let chol = hermitian_part(a).cholesky().ok_or_else(singular)?;
    let l = chol.l_dirty();
    let ok = (0..a.nrows()).all(|i| {
        let d = l[(i, i)];
        d.re > 0.0 && d.re.is_finite() && d.im.abs() <= 1e-12 * d.re
    });
    if ok {
        Ok(chol)
    } else {
        Err(singular())
    }
}

/// Log-determinant and inverse of a Hermitian positive definite matrix via Cholesky.
pub fn logdet_inverse_hpd(a: &CMatrix) -> Result<(f64, CMatrix)> {
    let n = a.nrows();
    if n == 0 {
        return Ok((0.0, zeros(0, 0)));
    }
    let chol = cholesky(a)?;
    let l = chol.l_dirty();
    let logdet = 2.0 * (0..n).map(|i| l[(i, i)].re.ln()).sum::<f64>();
    Ok((logdet, chol.inverse()))
}

/// Log-determinant of a Hermitian positive definite matrix.
pub fn logdet_hpd(a: &CMatrix) -> Result<f64> {
    let n = a.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let chol = cholesky(a)?;
    let l = chol.l_dirty();
    Ok(2.0 * (0..n).map(|i| l[(i, i)].re.ln()).sum::<f64>())
}

/// `Re tr(Aᴴ B)`, the real Frobenius inner product.
pub fn inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

/// `Re tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

pub fn trace_re(a: &CMatrix) -> f64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)].re).sum()
}

/// `A X Aᴴ`.
pub fn congruence(a: &CMatrix, x: &CMatrix) -> CMatrix {
    a * x * a.adjoint()
}

/// Orthonormal basis (under `Re tr(AᴴB)`) of the real vector space of n×n Hermitian matrices.
///
/// The ordering is: diagonal units, then for each `i < j` the symmetric real
/// element followed by the antisymmetric imaginary one.
pub fn hermitian_basis(n: usize) -> Vec<CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::with_capacity(n * n);
    for i in 0..n {
        let mut e = zeros(n, n);
        e[(i, i)] = re(1.0);
        basis.push(e);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut sym = zeros(n, n);
            sym[(i, j)] = re(s);
            sym[(j, i)] = re(s);
            basis.push(sym);
            let mut skew = zeros(n, n);
            skew[(i, j)] = Complex64::new(0.0, s);
            skew[(j, i)] = Complex64::new(0.0, -s);
            basis.push(skew);
        }
    }
    basis
}

/// Stacks `top` over `bottom` (same column count).
pub fn vstack(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    assert_eq!(top.ncols(), bottom.ncols());
    let mut out = zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    out
}
