//! Sparse complex operators on truncated mode spaces and the few dense
//! routines (norms, Hermitian spectra, numerical rank) run on their blocks.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64;

pub type Op = CsrMatrix<Complex64>;

/// Builds a CSR operator, summing duplicate entries and dropping exact zeros.
pub fn op_from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Op {
    let mut coo = CooMatrix::new(rows, cols);
    for (r, c, v) in entries {
        if v != Complex64::new(0.0, 0.0) {
            coo.push(r, c, v);
        }
    }
    CsrMatrix::from(&coo)
}

pub fn identity(n: usize) -> Op {
    op_from_triplets(n, n, (0..n).map(|i| (i, i, Complex64::new(1.0, 0.0))))
}

pub fn zero(rows: usize, cols: usize) -> Op {
    CsrMatrix::zeros(rows, cols)
}

pub fn adjoint(a: &Op) -> Op {
    op_from_triplets(a.ncols(), a.nrows(), a.triplet_iter().map(|(r, c, v)| (c, r, v.conj())))
}

pub fn scale(a: &Op, z: Complex64) -> Op {
    op_from_triplets(a.nrows(), a.ncols(), a.triplet_iter().map(|(r, c, v)| (r, c, v * z)))
}

pub fn add(a: &Op, b: &Op) -> Op {
    op_from_triplets(
        a.nrows(),
        a.ncols(),
        a.triplet_iter()
            .map(|(r, c, v)| (r, c, *v))
            .chain(b.triplet_iter().map(|(r, c, v)| (r, c, *v))),
    )
}

pub fn sub(a: &Op, b: &Op) -> Op {
    add(a, &scale(b, Complex64::new(-1.0, 0.0)))
}

pub fn mul(a: &Op, b: &Op) -> Op {
    a * b
}

pub fn commutator(a: &Op, b: &Op) -> Op {
    sub(&mul(a, b), &mul(b, a))
}

pub fn anticommutator(a: &Op, b: &Op) -> Op {
    add(&mul(a, b), &mul(b, a))
}

pub fn frobenius(a: &Op) -> f64 {
    a.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus; zero for an empty operator.
pub fn max_abs(a: &Op) -> f64 {
    a.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn apply(a: &Op, v: &DVector<Complex64>) -> DVector<Complex64> {
    DVector::from_iterator(
        a.nrows(),
        a.row_iter()
            .map(|row| row.col_indices().iter().zip(row.values()).map(|(&c, x)| x * v[c]).sum()),
    )
}

pub fn to_dense(a: &Op) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(a.nrows(), a.ncols());
    for (r, c, v) in a.triplet_iter() {
        m[(r, c)] += v;
    }
    m
}

/// Dense block `a[rows, cols]`; only the listed CSR rows are visited.
pub fn restrict(a: &Op, rows: &[usize], cols: &[usize]) -> DMatrix<Complex64> {
    let mut cpos = vec![usize::MAX; a.ncols()];
    for (j, &c) in cols.iter().enumerate() {
        cpos[c] = j;
    }
    let mut m = DMatrix::zeros(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        let row = a.row(r);
        for (&c, v) in row.col_indices().iter().zip(row.values()) {
            if cpos[c] != usize::MAX {
                m[(i, cpos[c])] += v;
            }
        }
    }
    m
}

/// Frobenius norm of the columns in `cols`.
pub fn frobenius_on_cols(a: &Op, cols: &[usize]) -> f64 {
    let mut keep = vec![false; a.ncols()];
    for &c in cols {
        keep[c] = true;
    }
    a.triplet_iter()
        .filter(|(_, c, _)| keep[*c])
        .map(|(_, _, v)| v.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Largest dense block handed to the SVD; bigger restrictions use Lanczos
/// on `AᴴA`.
pub const DENSE_NORM_LIMIT: usize = 40_000;
/// Krylov dimension cap for [`norm_on_cols`].
pub const LANCZOS_STEPS: usize = 400;

/// `‖a|_cols‖₂`, the norm of `a` restricted to the columns in `cols`.
pub fn norm_on_cols(a: &Op, cols: &[usize]) -> f64 {
    if a.nrows() * cols.len() <= DENSE_NORM_LIMIT {
        let rows: Vec<usize> = (0..a.nrows()).collect();
        return spectral_norm(&restrict(a, &rows, cols));
    }
    let mut keep = vec![usize::MAX; a.ncols()];
    for (j, &c) in cols.iter().enumerate() {
        keep[c] = j;
    }
    let entries: Vec<(usize, usize, Complex64)> = a
        .triplet_iter()
        .filter(|(_, c, _)| keep[*c] != usize::MAX)
        .map(|(r, c, v)| (r, keep[c], *v))
        .collect();
    let m = op_from_triplets(a.nrows(), cols.len(), entries);
    lanczos_top(&m, &adjoint(&m)).sqrt()
}

/// Largest eigenvalue of `mᴴm` by Lanczos with full reorthogonalization,
/// from a fixed start vector.
fn lanczos_top(m: &Op, mh: &Op) -> f64 {
    let n = m.ncols();
    let start = DVector::from_fn(n, |i, _| Complex64::new(1.0 + (i % 7) as f64 * 0.1, (i % 3) as f64 * 0.05));
    let mut basis: Vec<DVector<Complex64>> = vec![&start / Complex64::new(start.norm(), 0.0)];
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut last = 0.0;
    for step in 0..LANCZOS_STEPS.min(n) {
        let q = &basis[step];
        let mut w = apply(mh, &apply(m, q));
        let a = q.dotc(&w).re;
        alpha.push(a);
        for b in &basis {
            let proj = b.dotc(&w);
            w -= b * proj;
        }
        let top = tridiagonal_top(&alpha, &beta);
        let bn = w.norm();
        if bn <= 1e-14 * top.max(f64::MIN_POSITIVE) || (step >= 8 && (top - last).abs() <= 1e-15 * top) {
            return top;
        }
        last = top;
        beta.push(bn);
        basis.push(w / Complex64::new(bn, 0.0));
    }
    tridiagonal_top(&alpha, &beta)
}

fn tridiagonal_top(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j || j + 1 == i {
            beta[i.min(j)]
        } else {
            0.0
        }
    });
    t.symmetric_eigenvalues().iter().copied().fold(0.0, f64::max)
}

/// Operator 2-norm via singular values.
pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().iter().copied().fold(0.0, f64::max)
}

/// Sorted eigenvalues of a Hermitian matrix (the Hermitian part is used).
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Orthonormal basis (as columns) of the eigenvalue-one space of a Hermitian
/// projector.
pub fn projector_range(p: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = p.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let h = (p + p.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    DMatrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])])
}

/// Numerical rank and right null vectors of `m` with singular value at most
/// `tol · σ_max`.
pub fn numerical_kernel(m: &DMatrix<Complex64>, tol: f64) -> (usize, Vec<DVector<Complex64>>) {
    let cols = m.ncols();
    if cols == 0 {
        return (0, Vec::new());
    }
    // Pad to at least as many rows as columns so V is complete.
    let mut a = m.clone();
    if a.nrows() < cols {
        a = a.resize_vertically(cols, Complex64::new(0.0, 0.0));
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = tol * smax.max(1.0);
    let mut kernel = Vec::new();
    let mut rank = 0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cut {
            rank += 1;
        } else {
            kernel.push(v_t.row(i).adjoint());
        }
    }
    (rank, kernel)
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn commutator_of_shift_and_diagonal() {
        let d = op_from_triplets(3, 3, (0..3).map(|i| (i, i, c(i as f64))));
        let s = op_from_triplets(3, 3, [(1, 0, c(1.0)), (2, 1, c(1.0))]);
        let k = commutator(&d, &s);
        assert_eq!(spectral_norm(&to_dense(&k)), 1.0);
        assert_eq!(frobenius(&commutator(&d, &d)), 0.0);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(2.0), c(2.0)]);
        let (rank, ker) = numerical_kernel(&m, 1e-10);
        assert_eq!(rank, 1);
        assert_eq!(ker.len(), 1);
        assert!((&m * &ker[0]).norm() < 1e-12);
    }

    #[test]
    fn projector_range_dimension() {
        let p = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.5), c(0.5), c(0.5)]);
        assert_eq!(projector_range(&p).ncols(), 1);
        assert_eq!(hermitian_eigenvalues(&p).len(), 2);
    }

    #[test]
    fn slope_of_a_power_law() {
        let x: Vec<f64> = (1..10).map(|i| (i as f64).ln()).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((fit_slope(&x, &y) - 2.0).abs() < 1e-12);
    }
}
