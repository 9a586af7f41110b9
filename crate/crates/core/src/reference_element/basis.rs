//! Orthonormal polynomial bases on the reference interval, triangle and
//! tetrahedron, plus Gauss-Jacobi rules on the interval.
//!
//! Jacobi polynomials are normalised to unit L2 norm under their weight, so
//! the simplex products below are orthonormal on the bi-unit simplices.

use nalgebra::{DMatrix, SymmetricEigen};

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Squared norm of the classical Jacobi polynomial of degree zero.
fn gamma0(alpha: u32, beta: u32) -> f64 {
    let ab = f64::from(alpha + beta);
    2f64.powf(ab + 1.0) / (ab + 1.0) * factorial(alpha) * factorial(beta) / factorial(alpha + beta)
}

/// Orthonormal Jacobi polynomial `P_n^{(alpha,beta)}` evaluated at `x`.
pub fn jacobi_p(x: f64, alpha: u32, beta: u32, n: u32) -> f64 {
    let (a, b) = (f64::from(alpha), f64::from(beta));
    let g0 = gamma0(alpha, beta);
    let p0 = 1.0 / g0.sqrt();
    if n == 0 {
        return p0;
    }
    let g1 = (a + 1.0) * (b + 1.0) / (a + b + 3.0) * g0;
    let p1 = ((a + b + 2.0) * x / 2.0 + (a - b) / 2.0) / g1.sqrt();
    if n == 1 {
        return p1;
    }
    let mut a_old = 2.0 / (2.0 + a + b) * ((a + 1.0) * (b + 1.0) / (a + b + 3.0)).sqrt();
    let (mut prev, mut cur) = (p0, p1);
    for i in 1..n {
        let i = f64::from(i);
        let h1 = 2.0 * i + a + b;
        let a_new = 2.0 / (h1 + 2.0)
            * ((i + 1.0) * (i + 1.0 + a + b) * (i + 1.0 + a) * (i + 1.0 + b)
                / (h1 + 1.0)
                / (h1 + 3.0))
                .sqrt();
        let b_new = -(a * a - b * b) / h1 / (h1 + 2.0);
        let next = (-a_old * prev + (x - b_new) * cur) / a_new;
        prev = cur;
        cur = next;
        a_old = a_new;
    }
    cur
}

/// Derivative of [`jacobi_p`] with respect to `x`.
pub fn grad_jacobi_p(x: f64, alpha: u32, beta: u32, n: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nn = f64::from(n);
    (nn * (nn + f64::from(alpha + beta) + 1.0)).sqrt() * jacobi_p(x, alpha + 1, beta + 1, n - 1)
}

/// Gauss-Jacobi rule with `n` points for the weight `(1-x)^alpha (1+x)^beta`.
///
/// Computed with the Golub-Welsch eigenvalue method; nodes ascending.
pub fn gauss_jacobi(alpha: u32, beta: u32, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "a Gauss rule needs at least one point");
    let (a, b) = (f64::from(alpha), f64::from(beta));
    if n == 1 {
        return (vec![-(a - b) / (a + b + 2.0)], vec![gamma0(alpha, beta)]);
    }
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let h1 = 2.0 * i as f64 + a + b;
        jac[(i, i)] = if i == 0 && (a + b).abs() < 1e-14 {
            0.0
        } else {
            -(a * a - b * b) / (h1 + 2.0) / h1
        };
        if i + 1 < n {
            let k = (i + 1) as f64;
            let off = 2.0 / (h1 + 2.0)
                * (k * (k + a + b) * (k + a) * (k + b) / (h1 + 1.0) / (h1 + 3.0)).sqrt();
            jac[(i, i + 1)] = off;
            jac[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let g0 = gamma0(alpha, beta);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2) * g0))
        .collect();
    pairs.sort_by(|l, r| l.0.total_cmp(&r.0));
    pairs.into_iter().unzip()
}

/// Gauss-Lobatto nodes of the Jacobi weight, `n + 1` points including +-1.
pub fn gauss_lobatto_nodes(alpha: u32, beta: u32, n: usize) -> Vec<f64> {
    assert!(n > 0);
    if n == 1 {
        return vec![-1.0, 1.0];
    }
    let (interior, _) = gauss_jacobi(alpha + 1, beta + 1, n - 1);
    let mut x = Vec::with_capacity(n + 1);
    x.push(-1.0);
    x.extend(interior);
    x.push(1.0);
    x
}

/// Exponents `(i, j, k)` of the tetrahedral basis in the canonical ordering.
pub fn tet_basis_indices(order: usize) -> Vec<(u32, u32, u32)> {
    let p = order as u32;
    let mut idx = Vec::new();
    for i in 0..=p {
        for j in 0..=(p - i) {
            for k in 0..=(p - i - j) {
                idx.push((i, j, k));
            }
        }
    }
    idx
}

/// Exponents `(i, j)` of the triangle basis.
pub fn tri_basis_indices(order: usize) -> Vec<(u32, u32)> {
    let p = order as u32;
    let mut idx = Vec::new();
    for i in 0..=p {
        for j in 0..=(p - i) {
            idx.push((i, j));
        }
    }
    idx
}

/// Map reference-tetrahedron coordinates to the collapsed cube.
pub fn rst_to_abc(r: f64, s: f64, t: f64) -> (f64, f64, f64) {
    let a = if (s + t).abs() > 1e-14 {
        2.0 * (1.0 + r) / (-s - t) - 1.0
    } else {
        -1.0
    };
    let b = if (t - 1.0).abs() > 1e-14 {
        2.0 * (1.0 + s) / (1.0 - t) - 1.0
    } else {
        -1.0
    };
    (a, b, t)
}

/// Orthonormal Koornwinder-Dubiner polynomial on the reference tetrahedron.
pub fn simplex3d(r: f64, s: f64, t: f64, (i, j, k): (u32, u32, u32)) -> f64 {
    let (a, b, c) = rst_to_abc(r, s, t);
    let h1 = jacobi_p(a, 0, 0, i);
    let h2 = jacobi_p(b, 2 * i + 1, 0, j);
    let h3 = jacobi_p(c, 2 * (i + j) + 2, 0, k);
    2.0 * std::f64::consts::SQRT_2
        * h1
        * h2
        * (1.0 - b).powi(i as i32)
        * h3
        * (1.0 - c).powi((i + j) as i32)
}

/// Gradient `(d/dr, d/ds, d/dt)` of [`simplex3d`].
pub fn grad_simplex3d(r: f64, s: f64, t: f64, (i, j, k): (u32, u32, u32)) -> [f64; 3] {
    let (a, b, c) = rst_to_abc(r, s, t);
    let fa = jacobi_p(a, 0, 0, i);
    let dfa = grad_jacobi_p(a, 0, 0, i);
    let gb = jacobi_p(b, 2 * i + 1, 0, j);
    let dgb = grad_jacobi_p(b, 2 * i + 1, 0, j);
    let hc = jacobi_p(c, 2 * (i + j) + 2, 0, k);
    let dhc = grad_jacobi_p(c, 2 * (i + j) + 2, 0, k);
    let half_b = 0.5 * (1.0 - b);
    let half_c = 0.5 * (1.0 - c);
    let ii = i as i32;
    let ij = (i + j) as i32;

    let mut dr = dfa * gb * hc;
    if i > 0 {
        dr *= half_b.powi(ii - 1);
    }
    if i + j > 0 {
        dr *= half_c.powi(ij - 1);
    }

    let mut ds = 0.5 * (1.0 + a) * dr;
    let mut tmp = dgb * half_b.powi(ii);
    if i > 0 {
        tmp += -0.5 * f64::from(i) * gb * half_b.powi(ii - 1);
    }
    if i + j > 0 {
        tmp *= half_c.powi(ij - 1);
    }
    tmp = fa * tmp * hc;
    ds += tmp;

    let mut dt = 0.5 * (1.0 + a) * dr + 0.5 * (1.0 + b) * tmp;
    let mut tmp = dhc * half_c.powi(ij);
    if i + j > 0 {
        tmp -= 0.5 * f64::from(i + j) * hc * half_c.powi(ij - 1);
    }
    tmp = fa * gb * tmp * half_b.powi(ii);
    dt += tmp;

    let scale = 2f64.powf(f64::from(2 * i + j) + 1.5);
    [dr * scale, ds * scale, dt * scale]
}

/// Orthonormal Dubiner polynomial on the reference triangle
/// with vertices (-1,-1), (1,-1), (-1,1).
pub fn simplex2d(r: f64, s: f64, (i, j): (u32, u32)) -> f64 {
    let a = if (s - 1.0).abs() > 1e-14 {
        2.0 * (1.0 + r) / (1.0 - s) - 1.0
    } else {
        -1.0
    };
    let h1 = jacobi_p(a, 0, 0, i);
    let h2 = jacobi_p(s, 2 * i + 1, 0, j);
    std::f64::consts::SQRT_2 * h1 * h2 * (1.0 - s).powi(i as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_matches_known_nodes() {
        let (x, w) = gauss_jacobi(0, 0, 2);
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-14 && (x[1] - r).abs() < 1e-14);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_jacobi_integrates_weighted_polynomials() {
        // int_{-1}^{1} (1-x)^2 x^4 dx = 2/5 + 2/7 = 24/35
        let (x, w) = gauss_jacobi(2, 0, 3);
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((q - 24.0 / 35.0).abs() < 1e-13, "{q}");
    }

    #[test]
    fn jacobi_polynomials_are_orthonormal() {
        let (x, w) = gauss_jacobi(3, 0, 12);
        for m in 0..6 {
            for n in 0..6 {
                let ip: f64 = x
                    .iter()
                    .zip(&w)
                    .map(|(&x, &w)| w * jacobi_p(x, 3, 0, m) * jacobi_p(x, 3, 0, n))
                    .sum();
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-12, "({m},{n}) -> {ip}");
            }
        }
    }

    #[test]
    fn grad_jacobi_matches_finite_differences() {
        let h = 1e-6;
        for n in 0..6 {
            for &x in &[-0.7, -0.1, 0.35, 0.9] {
                let fd = (jacobi_p(x + h, 1, 0, n) - jacobi_p(x - h, 1, 0, n)) / (2.0 * h);
                assert!((fd - grad_jacobi_p(x, 1, 0, n)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn simplex_gradient_matches_finite_differences() {
        let h = 1e-6;
        let pts = [[-0.5, -0.4, -0.3], [0.1, -0.8, -0.6], [-0.9, 0.2, -0.7], [-0.6, -0.6, 0.1]];
        for idx in tet_basis_indices(4) {
            for p in pts {
                let g = grad_simplex3d(p[0], p[1], p[2], idx);
                for d in 0..3 {
                    let mut hi = p;
                    let mut lo = p;
                    hi[d] += h;
                    lo[d] -= h;
                    let fd = (simplex3d(hi[0], hi[1], hi[2], idx) - simplex3d(lo[0], lo[1], lo[2], idx))
                        / (2.0 * h);
                    assert!((fd - g[d]).abs() < 1e-5 * (1.0 + fd.abs()), "{idx:?} d{d}: {fd} vs {}", g[d]);
                }
            }
        }
    }
}
