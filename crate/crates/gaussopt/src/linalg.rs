//! Dense linear-algebra helpers shared across the crate.
//!
//! Matrix functions (log, sqrt, tanh of non-symmetric real matrices) are
//! evaluated through a complex eigendecomposition, applying the scalar
//! function on the spectrum and reassembling. The matrices this crate feeds
//! in are similar to normal matrices (orthogonal, symplectic-positive or
//! anti-symmetric products), so the eigenbasis is well conditioned; a
//! residual check guards the reassembly anyway.

use ndarray::prelude::*;
use ndarray_linalg::{Determinant, Eig, Eigh, Inverse, QR, UPLO};
use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Largest absolute entry, the ‖·‖_max norm used by most defect checks.
pub fn max_abs(a: &Array2<f64>) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn max_abs_c(a: &Array2<C64>) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.norm()))
}

pub fn fro_norm(a: &Array2<f64>) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Frobenius inner product ⟨A, B⟩ = Σ A_ij B_ij.
pub fn fro_dot(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn eye(n: usize) -> Array2<f64> {
    Array2::eye(n)
}

pub fn to_complex(a: &Array2<f64>) -> Array2<C64> {
    a.mapv(|x| C64::new(x, 0.0))
}

/// Real part of a complex matrix, failing if the imaginary residue is large.
pub fn real_part_checked(a: &Array2<C64>, tol: f64, what: &str) -> Result<Array2<f64>> {
    let imag = a.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    let scale = max_abs_c(a).max(1.0);
    if imag > tol * scale {
        return Err(Error::Numerical(format!(
            "{what}: imaginary residue {imag:.3e} exceeds {:.3e}",
            tol * scale
        )));
    }
    Ok(a.mapv(|z| z.re))
}

/// Eigendecomposition of a general real matrix.
pub fn eig_real(a: &Array2<f64>) -> Result<(Array1<C64>, Array2<C64>)> {
    let (vals, vecs) = a.eig()?;
    Ok((vals, vecs))
}

/// Eigendecomposition of a complex Hermitian matrix (ascending eigenvalues),
/// returning V with A = V diag(λ) V†. The eigenvector matrix coming back from
/// the LAPACK binding is conjugated relative to that convention in row-major
/// storage, which is undone here.
pub fn eigh_c(a: &Array2<C64>) -> Result<(Array1<f64>, Array2<C64>)> {
    let (vals, vecs) = a.eigh(UPLO::Lower)?;
    Ok((vals, vecs.mapv(|z| z.conj())))
}

pub fn eigh_real(a: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let (vals, vecs) = a.eigh(UPLO::Lower)?;
    Ok((vals, vecs))
}

pub fn inv_real(a: &Array2<f64>) -> Result<Array2<f64>> {
    Ok(a.inv()?)
}

pub fn inv_c(a: &Array2<C64>) -> Result<Array2<C64>> {
    Ok(a.inv()?)
}

/// f(A) for a real matrix A through its complex eigendecomposition.
///
/// The result must be real (the scalar function has to be compatible with the
/// conjugation symmetry of the spectrum); a residual check enforces this.
pub fn matfun_real(a: &Array2<f64>, f: impl Fn(C64) -> C64, what: &str) -> Result<Array2<f64>> {
    let fa = matfun_real_complex_result(a, f)?;
    real_part_checked(&fa, 1e-8, what)
}

/// f(A) for a real matrix A, keeping the complex result.
pub fn matfun_real_complex_result(
    a: &Array2<f64>,
    f: impl Fn(C64) -> C64,
) -> Result<Array2<C64>> {
    let (vals, vecs) = eig_real(a)?;
    let fvals = vals.mapv(&f);
    apply_in_eigenbasis(&vecs, &fvals)
}

/// f(A) for a complex matrix A through its eigendecomposition.
pub fn matfun_c(a: &Array2<C64>, f: impl Fn(C64) -> C64) -> Result<Array2<C64>> {
    let (vals, vecs) = a.eig()?;
    let fvals = vals.mapv(&f);
    apply_in_eigenbasis(&vecs, &fvals)
}

fn apply_in_eigenbasis(vecs: &Array2<C64>, fvals: &Array1<C64>) -> Result<Array2<C64>> {
    let vinv = vecs.inv().map_err(|_| {
        Error::Numerical("eigenvector matrix is singular; matrix may be defective".into())
    })?;
    let mut scaled = vecs.clone();
    for (j, mut col) in scaled.columns_mut().into_iter().enumerate() {
        let fv = fvals[j];
        col.mapv_inplace(|x| x * fv);
    }
    Ok(scaled.dot(&vinv))
}

/// Matrix exponential of a real matrix by scaling-and-squaring Padé(6).
pub fn expm_real(a: &Array2<f64>) -> Array2<f64> {
    let n = a.nrows();
    let norm = a.iter().map(|x| x.abs()).fold(0.0f64, f64::max) * n as f64;
    let s = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let a_scaled = a.mapv(|x| x * 0.5f64.powi(s));

    // Pade(6,6) on the scaled matrix.
    let c = [
        1.0,
        1.0 / 2.0,
        5.0 / 44.0,
        1.0 / 66.0,
        1.0 / 792.0,
        1.0 / 15840.0,
        1.0 / 665280.0,
    ];
    let mut term = Array2::eye(n);
    let mut num = Array2::eye(n).mapv(|x: f64| x * c[0]);
    let mut den = num.clone();
    for (k, ck) in c.iter().enumerate().skip(1) {
        term = term.dot(&a_scaled);
        num = num + term.mapv(|x| x * ck);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        den = den + term.mapv(|x| x * ck * sign);
    }
    let mut m = den
        .inv()
        .expect("Pade denominator is well conditioned after scaling")
        .dot(&num);
    for _ in 0..s {
        m = m.dot(&m);
    }
    m
}

/// Principal matrix logarithm of a real matrix with spectrum off the branch
/// cut, via eigendecomposition.
pub fn logm_real(a: &Array2<f64>, what: &str) -> Result<Array2<f64>> {
    matfun_real(a, |z| z.ln(), what)
}

/// Principal square root of a real matrix via eigendecomposition.
pub fn sqrtm_real(a: &Array2<f64>, what: &str) -> Result<Array2<f64>> {
    matfun_real(a, |z| z.sqrt(), what)
}

/// Moore-Penrose pseudo-inverse of a real antisymmetric matrix with a
/// singular-value cutoff, through the Hermitian eigendecomposition of iA.
pub fn pinv_antisymmetric(a: &Array2<f64>, cutoff: f64) -> Result<Array2<f64>> {
    let h = a.mapv(|x| C64::new(0.0, x)); // iA, Hermitian
    let (vals, vecs) = eigh_c(&h)?;
    let scale = vals.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let inv_vals: Array1<C64> = vals.mapv(|v| {
        if v.abs() > cutoff * scale {
            C64::new(1.0 / v, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    // pinv(A) = pinv(-i (iA)) = i pinv(iA) = i V diag(1/v) V†
    let mut scaled = vecs.clone();
    for (j, mut col) in scaled.columns_mut().into_iter().enumerate() {
        let f = inv_vals[j];
        col.mapv_inplace(|x| x * f);
    }
    let pinv_h = scaled.dot(&conj_t(&vecs));
    let pinv = pinv_h.mapv(|z| z * C64::new(0.0, 1.0));
    real_part_checked(&pinv, 1e-9, "antisymmetric pseudo-inverse")
}

pub fn conj_t(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}

/// ‖M F Mᵀ − F‖_max, the defect of M with respect to a bilinear form F.
pub fn form_defect(m: &Array2<f64>, form: &Array2<f64>) -> f64 {
    let d = m.dot(form).dot(&m.t()) - form;
    max_abs(&d)
}

/// 1-norm condition estimate ‖A‖₁ ‖A⁻¹‖₁.
pub fn cond_1(a: &Array2<f64>, a_inv: &Array2<f64>) -> f64 {
    one_norm(a) * one_norm(a_inv)
}

fn one_norm(a: &Array2<f64>) -> f64 {
    let mut best = 0.0f64;
    for col in a.columns() {
        best = best.max(col.iter().map(|x| x.abs()).sum());
    }
    best
}

/// Haar-distributed orthogonal matrix from a QR factorization with the sign
/// convention fixed by the R diagonal.
pub fn haar_orthogonal(gauss: &Array2<f64>) -> Array2<f64> {
    let (q, r) = gauss.qr().expect("QR of a random matrix");
    let mut q = q;
    for (j, mut col) in q.columns_mut().into_iter().enumerate() {
        if r[[j, j]] < 0.0 {
            col.mapv_inplace(|x| -x);
        }
    }
    q
}

/// Determinant sign of a real matrix.
pub fn det_sign(a: &Array2<f64>) -> f64 {
    a.det().map(|d| d.signum()).unwrap_or(0.0)
}

/// Symmetric part (A + Aᵀ)/2.
pub fn sym_part(a: &Array2<f64>) -> Array2<f64> {
    (a + &a.t()) / 2.0
}

/// Antisymmetric part (A − Aᵀ)/2.
pub fn antisym_part(a: &Array2<f64>) -> Array2<f64> {
    (a - &a.t()) / 2.0
}
