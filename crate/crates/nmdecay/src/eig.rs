//! Thin bindings to the system LAPACK symmetric eigensolvers and to dgemm.
//!
//! Storage is column-major throughout so buffers can be handed to Fortran
//! routines directly. Dimensions stay far below `i32::MAX`.

use crate::{Error, Result};

/// Column-major matrix of f64.
#[derive(Clone, Debug, PartialEq)]
pub struct ColMat {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl ColMat {
    pub fn zeros(n_rows: usize, n_cols: usize) -> ColMat {
        ColMat {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn from_vec(n_rows: usize, n_cols: usize, data: Vec<f64>) -> ColMat {
        assert_eq!(data.len(), n_rows * n_cols);
        ColMat {
            n_rows,
            n_cols,
            data,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + j * self.n_rows]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i + j * self.n_rows] = x;
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.n_rows..(j + 1) * self.n_rows]
    }

    /// Copy of row `i`. Rows are strided, so this gathers `n_cols` elements.
    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.n_cols).map(|j| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

extern "C" {
    fn dstevd_(
        jobz: *const u8,
        n: *const i32,
        d: *mut f64,
        e: *mut f64,
        z: *mut f64,
        ldz: *const i32,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
    fn dsyevd_(
        jobz: *const u8,
        uplo: *const u8,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
    fn dgemm_(
        transa: *const u8,
        transb: *const u8,
        m: *const i32,
        n: *const i32,
        k: *const i32,
        alpha: *const f64,
        a: *const f64,
        lda: *const i32,
        b: *const f64,
        ldb: *const i32,
        beta: *const f64,
        c: *mut f64,
        ldc: *const i32,
    );
}

fn lapack_err(routine: &str, info: i32) -> Error {
    Error::Numerical(format!("LAPACK {routine} returned info = {info}"))
}

/// Eigendecomposition of a symmetric tridiagonal matrix by divide and
/// conquer. Returns eigenvalues in ascending order and the orthonormal
/// eigenvector matrix, one eigenvector per column.
pub fn eigh_tridiagonal(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, ColMat)> {
    let n = diag.len();
    assert!(n >= 1 && off.len() == n - 1);
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    // dstevd reads n-1 off-diagonal entries; keep the pointer valid for n = 1.
    e.push(0.0);
    let mut z = ColMat::zeros(n, n);
    let ni = n as i32;
    let lwork = (1 + 4 * n + n * n) as i32;
    let liwork = (3 + 5 * n) as i32;
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    let mut info = 0i32;
    unsafe {
        dstevd_(
            b"V".as_ptr(),
            &ni,
            d.as_mut_ptr(),
            e.as_mut_ptr(),
            z.data_mut().as_mut_ptr(),
            &ni,
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(lapack_err("dstevd", info));
    }
    Ok((d, z))
}

/// Eigendecomposition of a dense symmetric matrix by divide and conquer.
/// Only the lower triangle of `a` is referenced.
pub fn eigh_dense(a: &ColMat) -> Result<(Vec<f64>, ColMat)> {
    let n = a.n_rows();
    assert_eq!(n, a.n_cols());
    let mut z = a.clone();
    let mut w = vec![0.0f64; n];
    let ni = n as i32;
    let lwork = (1 + 6 * n + 2 * n * n) as i32;
    let liwork = (3 + 5 * n) as i32;
    let mut work = vec![0.0f64; lwork as usize];
    let mut iwork = vec![0i32; liwork as usize];
    let mut info = 0i32;
    unsafe {
        dsyevd_(
            b"V".as_ptr(),
            b"L".as_ptr(),
            &ni,
            z.data_mut().as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    if info != 0 {
        return Err(lapack_err("dsyevd", info));
    }
    Ok((w, z))
}

/// C = A * B^T through dgemm; `b` is passed in row-of-C-per-row form so its
/// columns can be filled contiguously by the caller.
pub fn matmul_nt(a: &ColMat, b: &ColMat) -> ColMat {
    assert_eq!(a.n_cols(), b.n_cols());
    let m = a.n_rows() as i32;
    let n = b.n_rows() as i32;
    let k = a.n_cols() as i32;
    let mut c = ColMat::zeros(a.n_rows(), b.n_rows());
    let alpha = 1.0;
    let beta = 0.0;
    unsafe {
        dgemm_(
            b"N".as_ptr(),
            b"T".as_ptr(),
            &m,
            &n,
            &k,
            &alpha,
            a.data().as_ptr(),
            &m,
            b.data().as_ptr(),
            &n,
            &beta,
            c.data_mut().as_mut_ptr(),
            &m,
        );
    }
    c
}

/// C = A * B through dgemm.
pub fn matmul(a: &ColMat, b: &ColMat) -> ColMat {
    assert_eq!(a.n_cols(), b.n_rows());
    let m = a.n_rows() as i32;
    let n = b.n_cols() as i32;
    let k = a.n_cols() as i32;
    let mut c = ColMat::zeros(a.n_rows(), b.n_cols());
    let alpha = 1.0;
    let beta = 0.0;
    unsafe {
        dgemm_(
            b"N".as_ptr(),
            b"N".as_ptr(),
            &m,
            &n,
            &k,
            &alpha,
            a.data().as_ptr(),
            &m,
            b.data().as_ptr(),
            &k,
            &beta,
            c.data_mut().as_mut_ptr(),
            &m,
        );
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tridiagonal_dimer() {
        let (w, z) = eigh_tridiagonal(&[0.0, 0.0], &[-1.0]).unwrap();
        assert_abs_diff_eq!(w[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w[1], 1.0, epsilon = 1e-14);
        for k in 0..2 {
            let v = z.column(k);
            assert_abs_diff_eq!(v[0] * v[0] + v[1] * v[1], 1.0, epsilon = 1e-14);
        }
        // Ground state of the bond is the even combination.
        let g = z.column(0);
        assert_abs_diff_eq!(g[0] * g[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn single_site() {
        let (w, z) = eigh_tridiagonal(&[0.7], &[]).unwrap();
        assert_abs_diff_eq!(w[0], 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(z.get(0, 0).abs(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dense_matches_tridiagonal() {
        // Pseudo-random tridiagonal matrix, diagonalized both ways.
        let n = 60;
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n - 1];
        let mut x = 0.37f64;
        let mut next = || {
            x = (x * 997.0 + 0.123).fract();
            x - 0.5
        };
        for d in diag.iter_mut() {
            *d = next();
        }
        for o in off.iter_mut() {
            *o = next();
        }
        let (wt, zt) = eigh_tridiagonal(&diag, &off).unwrap();
        let mut a = ColMat::zeros(n, n);
        for i in 0..n {
            a.set(i, i, diag[i]);
        }
        for i in 0..n - 1 {
            a.set(i + 1, i, off[i]);
            a.set(i, i + 1, off[i]);
        }
        let (wd, zd) = eigh_dense(&a).unwrap();
        for k in 0..n {
            assert_abs_diff_eq!(wt[k], wd[k], epsilon = 1e-12);
        }
        // Orthonormality of both eigenbases.
        for z in [&zt, &zd] {
            for k in 0..n {
                for l in k..n {
                    let dot: f64 = z
                        .column(k)
                        .iter()
                        .zip(z.column(l))
                        .map(|(a, b)| a * b)
                        .sum();
                    let want = if k == l { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(dot, want, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn matmul_small() {
        let a = ColMat::from_vec(2, 2, vec![1.0, 3.0, 2.0, 4.0]); // [[1,2],[3,4]]
        let b = ColMat::from_vec(2, 2, vec![5.0, 7.0, 6.0, 8.0]); // [[5,6],[7,8]]
        let c = matmul(&a, &b);
        assert_abs_diff_eq!(c.get(0, 0), 19.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.get(0, 1), 22.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.get(1, 0), 43.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.get(1, 1), 50.0, epsilon = 1e-15);
    }

    #[test]
    fn matmul_nt_matches_explicit_transpose() {
        let a = ColMat::from_vec(2, 3, vec![1.0, 4.0, 2.0, 5.0, 3.0, 6.0]);
        let b = ColMat::from_vec(4, 3, (0..12).map(|i| i as f64 * 0.5 - 2.0).collect());
        let mut bt = ColMat::zeros(3, 4);
        for i in 0..4 {
            for j in 0..3 {
                bt.set(j, i, b.get(i, j));
            }
        }
        let c1 = matmul_nt(&a, &b);
        let c2 = matmul(&a, &bt);
        assert_eq!(c1.n_rows(), 2);
        assert_eq!(c1.n_cols(), 4);
        for i in 0..2 {
            for j in 0..4 {
                assert_abs_diff_eq!(c1.get(i, j), c2.get(i, j), epsilon = 1e-15);
            }
        }
    }
}
