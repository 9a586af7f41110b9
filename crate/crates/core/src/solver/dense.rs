//! Small dense kernels on column-major slices.

/// `C = alpha * A * B + beta * C` with column-major `A` (`m x k`), `B`
/// (`k x n`) and `C` (`m x n`), each stored contiguously.
pub(crate) fn gemm(m: usize, k: usize, n: usize, alpha: f64, a: &[f64], b: &[f64], beta: f64, c: &mut [f64]) {
    assert!(a.len() >= m * k && b.len() >= k * n && c.len() >= m * n, "gemm operand too short");
    if m == 0 || n == 0 {
        return;
    }
    // SAFETY: the slices cover the strided extents asserted above and `c`
    // does not alias `a` or `b` (it is borrowed mutably).
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.as_ptr(),
            1,
            m as isize,
            b.as_ptr(),
            1,
            k as isize,
            beta,
            c.as_mut_ptr(),
            1,
            m as isize,
        );
    }
}

/// `y += alpha * A * x` for a square column-major `A` of size `n`.
#[inline]
pub(crate) fn matvec_acc(a: &[f64], n: usize, x: &[f64], alpha: f64, y: &mut [f64]) {
    debug_assert!(a.len() == n * n && x.len() == n && y.len() == n);
    for (col, &xj) in a.chunks_exact(n).zip(x) {
        let s = alpha * xj;
        for (yi, &aij) in y.iter_mut().zip(col) {
            *yi += aij * s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn gemm_matches_nalgebra() {
        let a = DMatrix::from_fn(5, 3, |i, j| (i * 3 + j) as f64 * 0.5 - 1.0);
        let b = DMatrix::from_fn(3, 4, |i, j| (i as f64 - j as f64).sin());
        let mut c = DMatrix::from_element(5, 4, 1.0);
        gemm(5, 3, 4, 2.0, a.as_slice(), b.as_slice(), 0.5, c.as_mut_slice());
        let expect = &a * &b * 2.0 + DMatrix::from_element(5, 4, 0.5);
        assert!((c - expect).abs().max() < 1e-14);
    }

    #[test]
    fn matvec_matches_nalgebra() {
        let a = DMatrix::from_fn(4, 4, |i, j| 1.0 / (1 + i + j) as f64);
        let x = [1.0, -2.0, 0.5, 3.0];
        let mut y = [1.0; 4];
        matvec_acc(a.as_slice(), 4, &x, -1.0, &mut y);
        let expect = -(&a * nalgebra::DVector::from_column_slice(&x)).add_scalar(-1.0);
        for i in 0..4 {
            assert!((y[i] - expect[i]).abs() < 1e-14);
        }
    }
}
