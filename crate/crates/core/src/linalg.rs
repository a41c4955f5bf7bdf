//! Dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

/// Default cap on the 1-norm condition number of a conjugator.
pub const DEFAULT_COND_CAP: f64 = 1e12;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Matrix unit `E_ij` (1-based, as in the usual notation).
pub fn matrix_unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(i - 1, j - 1)] = c64(1.0, 0.0);
    m
}

/// Builds a matrix from real row-major entries.
pub fn real_matrix(n: usize, rows: &[f64]) -> CMat {
    CMat::from_row_iterator(n, n, rows.iter().map(|&x| c64(x, 0.0)))
}

pub fn diag(entries: &[Complex64]) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

pub fn frobenius(m: &CMat) -> f64 {
    m.norm()
}

pub fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn det2(m: &CMat) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Inverse by LU with partial pivoting, rejecting singular input and input
/// whose 1-norm condition number exceeds `cond_cap`.
pub fn checked_inverse(s: &CMat, cond_cap: f64) -> Result<CMat> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "conjugator is {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    let inv = s.clone().lu().try_inverse().ok_or(Error::Singular)?;
    let cond = one_norm(s) * one_norm(&inv);
    if !cond.is_finite() || cond > cond_cap {
        return Err(Error::IllConditioned { cond, cap: cond_cap });
    }
    Ok(inv)
}

pub fn condition_number(s: &CMat) -> f64 {
    match s.clone().lu().try_inverse() {
        Some(inv) => one_norm(s) * one_norm(&inv),
        None => f64::INFINITY,
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Count of singular values above `rel_tol` times the largest.
pub fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let sv = singular_values(m);
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&s| s > rel_tol * top).count(),
        _ => 0,
    }
}

/// Orthonormal basis (as columns) of the numerical null space of `m`, using
/// a singular-value threshold relative to the largest singular value.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let (rows, cols) = m.shape();
    // pad wide systems so the SVD returns a full set of right vectors
    let padded = if rows < cols {
        let mut p = CMat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| top == 0.0 || svd.singular_values[i] <= rel_tol * top)
        .collect();
    let mut out = CMat::zeros(cols, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        for r in 0..cols {
            out[(r, j)] = v_t[(i, r)].conj();
        }
    }
    out
}

/// Orthonormal basis for the column span of `m`: left singular vectors with
/// singular value above `rel_tol` times the largest.
pub fn column_span(m: &CMat, rel_tol: f64) -> CMat {
    if m.ncols() == 0 {
        return CMat::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested left singular vectors");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| top > 0.0 && svd.singular_values[i] > rel_tol * top)
        .collect();
    let mut out = CMat::zeros(m.nrows(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &u.column(i));
    }
    out
}

/// Eigenvalues of a square complex matrix via the Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    nalgebra::Schur::new(m.clone())
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .unwrap_or_default()
}

/// A unit eigenvector for (approximate) eigenvalue `lambda`: the right
/// singular vector of `m - lambda I` with the smallest singular value.
pub fn eigenvector(m: &CMat, lambda: Complex64) -> nalgebra::DVector<Complex64> {
    let n = m.nrows();
    let shifted = m - identity(n) * lambda;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    nalgebra::DVector::from_iterator(n, v_t.row(imin).iter().map(|x| x.conj()))
}

/// Flattens a matrix to a column vector in row-major order.
pub fn vec_row_major(m: &CMat) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_iterator(m.nrows() * m.ncols(), m.transpose().iter().copied())
}

pub fn unvec_row_major(v: &[Complex64], n: usize) -> CMat {
    CMat::from_row_slice(n, n, v)
}
