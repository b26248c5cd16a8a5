//! Dense complex matrix kernels: null spaces, pseudo-inverses, orthonormal
//! bases and Hermitian eigenvectors, all with a deterministic sign convention.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{IaError, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative singular-value cutoff used by every rank decision.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Below this the largest singular value is treated as zero.
const ZERO_FLOOR: f64 = 1e-280;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a matrix from real row-major entries.
pub fn from_real_rows(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    assert_eq!(data.len(), rows * cols);
    ComplexMatrix::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn frobenius(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_sq(a: &ComplexMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

pub fn is_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Stacks blocks top to bottom. All blocks must share a column count.
pub fn vstack(blocks: &[&ComplexMatrix], cols: usize) -> ComplexMatrix {
    let rows = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack column mismatch");
        out.view_mut((r, 0), (b.nrows(), cols)).copy_from(*b);
        r += b.nrows();
    }
    out
}

/// Concatenates blocks left to right. All blocks must share a row count.
pub fn hstack(blocks: &[&ComplexMatrix], rows: usize) -> ComplexMatrix {
    let cols = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let mut k = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, k), (rows, b.ncols())).copy_from(*b);
        k += b.ncols();
    }
    out
}

/// Rotates each column so its first significant entry is real and positive.
pub fn canonicalize_columns(a: &mut ComplexMatrix) {
    for mut col in a.column_iter_mut() {
        let peak = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            continue;
        }
        if let Some(lead) = col.iter().find(|z| z.norm() > 1e-8 * peak).copied() {
            let phase = lead.conj() / lead.norm();
            col.iter_mut().for_each(|z| *z *= phase);
        }
    }
}

/// Thin SVD with singular values sorted in descending order.
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    svd_parts(a, true)
}

/// Sorted SVD; `u` is left empty unless `want_u`.
fn svd_parts(a: &ComplexMatrix, want_u: bool) -> Svd {
    let p = a.nrows().min(a.ncols());
    if p == 0 {
        return Svd {
            u: ComplexMatrix::zeros(a.nrows(), 0),
            sigma: Vec::new(),
            v: ComplexMatrix::zeros(a.ncols(), 0),
        };
    }
    let dec = a.clone().svd(want_u, true);
    let v_t = dec.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]).then(i.cmp(&j)));
    let sigma = order.iter().map(|&i| dec.singular_values[i]).collect();
    let u = match dec.u {
        Some(u) => ComplexMatrix::from_fn(a.nrows(), p, |r, k| u[(r, order[k])]),
        None => ComplexMatrix::zeros(a.nrows(), 0),
    };
    let v = ComplexMatrix::from_fn(a.ncols(), p, |r, k| v_t[(order[k], r)].conj());
    Svd { u, sigma, v }
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut sigma: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    sigma.sort_by(|x, y| y.total_cmp(x));
    sigma
}

fn rank_of(sigma: &[f64], tol: f64) -> usize {
    let top = sigma.first().copied().unwrap_or(0.0);
    if top <= ZERO_FLOOR {
        return 0;
    }
    sigma.iter().filter(|&&s| s > tol * top).count()
}

/// Number of singular values above `tol` times the largest one.
pub fn numerical_rank(a: &ComplexMatrix, tol: f64) -> usize {
    rank_of(&singular_values(a), tol)
}

/// Number of singular values above an absolute threshold.
pub fn rank_above(a: &ComplexMatrix, threshold: f64) -> usize {
    singular_values(a).iter().filter(|&&s| s > threshold).count()
}

/// Orthonormal basis of the right null space of `a`.
pub fn null_space_basis(a: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let (r, cols) = a.shape();
    if cols == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    // Pad wide matrices so the thin SVD still yields a complete right basis.
    let padded;
    let square = if r < cols {
        padded = vstack(&[a, &ComplexMatrix::zeros(cols - r, cols)], cols);
        &padded
    } else {
        a
    };
    let dec = svd_parts(square, false);
    let rank = rank_of(&dec.sigma, tol);
    let mut basis = dec.v.columns(rank, cols - rank).into_owned();
    canonicalize_columns(&mut basis);
    basis
}

/// Null-space basis truncated to `width` columns.
pub fn null_space_width(a: &ComplexMatrix, width: usize, tol: f64) -> Result<ComplexMatrix> {
    let basis = null_space_basis(a, tol);
    if basis.ncols() < width {
        return Err(IaError::EmptyNullSpace { requested: width, available: basis.ncols() });
    }
    Ok(basis.columns(0, width).into_owned())
}

/// Moore-Penrose pseudo-inverse.
pub fn pseudo_inverse(a: &ComplexMatrix) -> ComplexMatrix {
    let dec = svd(a);
    let rank = rank_of(&dec.sigma, DEFAULT_TOL);
    let mut out = ComplexMatrix::zeros(a.ncols(), a.nrows());
    for k in 0..rank {
        let scaled = dec.v.column(k) * c(1.0 / dec.sigma[k], 0.0);
        out += scaled * dec.u.column(k).adjoint();
    }
    out
}

/// Orthonormal basis for the column space of `a`.
pub fn orthonormal_basis(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dec = svd(a);
    let rank = rank_of(&dec.sigma, DEFAULT_TOL);
    if rank == 0 {
        return Err(IaError::ZeroMatrix);
    }
    let mut q = dec.u.columns(0, rank).into_owned();
    canonicalize_columns(&mut q);
    Ok(q)
}

/// Orthonormalizes the columns of a full column rank matrix, keeping its span.
pub fn orthonormalize_columns(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let q = orthonormal_basis(a)?;
    if q.ncols() < a.ncols() {
        return Err(IaError::SingularConstruction(format!(
            "matrix with {} columns has rank {}",
            a.ncols(),
            q.ncols()
        )));
    }
    Ok(q)
}

/// Scales every column to unit Euclidean norm.
pub fn normalize_columns(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut out = a.clone();
    for mut col in out.column_iter_mut() {
        let n = col.norm();
        if n <= ZERO_FLOOR {
            return Err(IaError::ZeroMatrix);
        }
        col.iter_mut().for_each(|z| *z /= n);
    }
    Ok(out)
}

fn check_hermitian(s: &ComplexMatrix) -> Result<()> {
    if !s.is_square() {
        return Err(IaError::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let skew = frobenius(&(s - s.adjoint()));
    let rel = skew / frobenius(s).max(1.0);
    if rel > 1e-10 {
        return Err(IaError::NotHermitian(rel));
    }
    Ok(())
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
pub fn hermitian_eigen(s: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(s)?;
    let n = s.nrows();
    let sym = (s + s.adjoint()) * c(0.5, 0.0);
    let dec = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| dec.eigenvalues[i].total_cmp(&dec.eigenvalues[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| dec.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::from_fn(n, n, |r, k| dec.eigenvectors[(r, order[k])]);
    canonicalize_columns(&mut vectors);
    Ok((values, vectors))
}

/// Eigenvectors of the `q` smallest eigenvalues of a Hermitian matrix.
pub fn smallest_eigvecs(s: &ComplexMatrix, q: usize) -> Result<ComplexMatrix> {
    check_hermitian(s)?;
    if q > s.nrows() {
        return Err(IaError::DimensionMismatch(format!(
            "requested {q} eigenvectors of a {n}x{n} matrix",
            n = s.nrows()
        )));
    }
    let (_, vectors) = hermitian_eigen(s)?;
    Ok(vectors.columns(0, q).into_owned())
}
