//! Warp-and-blend interpolation nodes on the reference tetrahedron.

use super::basis::gauss_lobatto_nodes;

/// Blend exponents tuned for a small Lebesgue constant, indexed by order - 1.
const ALPHA_OPT: [f64; 15] = [
    0.0, 0.0, 0.0, 0.1002, 1.1332, 1.5608, 1.3413, 1.2577, 1.1603, 1.10153, 0.6080, 0.4523,
    0.8856, 0.8717, 0.9655,
];

const TOL: f64 = 1e-10;

type Vec3 = [f64; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn normalize(a: Vec3) -> Vec3 {
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    scale(a, 1.0 / n)
}

/// One-dimensional warp from equispaced to Gauss-Lobatto nodes, evaluated at `r`.
fn warp_1d(order: usize, gl: &[f64], r: f64) -> f64 {
    let eq: Vec<f64> = (0..=order)
        .map(|i| -1.0 + 2.0 * (order - i) as f64 / order as f64)
        .collect();
    let mut warp = 0.0;
    for i in 0..=order {
        let mut d = gl[i] - eq[i];
        for j in 1..order {
            if i != j {
                d *= (r - eq[j]) / (eq[i] - eq[j]);
            }
        }
        if i != 0 {
            d = -d / (eq[i] - eq[0]);
        }
        if i != order {
            d /= eq[i] - eq[order];
        }
        warp += d;
    }
    warp
}

/// Tangential warp on an equilateral face from its three barycentric coordinates.
fn face_shift(order: usize, alpha: f64, gl: &[f64], l1: f64, l2: f64, l3: f64) -> (f64, f64) {
    let w1 = 4.0 * warp_1d(order, gl, l3 - l2) * l2 * l3 * (1.0 + (alpha * l1).powi(2));
    let w2 = 4.0 * warp_1d(order, gl, l1 - l3) * l1 * l3 * (1.0 + (alpha * l2).powi(2));
    let w3 = 4.0 * warp_1d(order, gl, l2 - l1) * l1 * l2 * (1.0 + (alpha * l3).powi(2));
    let (c2, s2) = ((2.0 * std::f64::consts::PI / 3.0).cos(), (2.0 * std::f64::consts::PI / 3.0).sin());
    let (c4, s4) = ((4.0 * std::f64::consts::PI / 3.0).cos(), (4.0 * std::f64::consts::PI / 3.0).sin());
    (w1 + c2 * w2 + c4 * w3, s2 * w2 + s4 * w3)
}

/// Interpolation nodes of order `order` in reference coordinates (r, s, t).
pub fn warp_blend_nodes(order: usize) -> Vec<Vec3> {
    assert!(order >= 1);
    let alpha = ALPHA_OPT.get(order - 1).copied().unwrap_or(1.0);
    let n = order as f64;

    // Equispaced nodes on the reference tetrahedron.
    let mut equi = Vec::new();
    for k in 0..=order {
        for j in 0..=(order - k) {
            for i in 0..=(order - k - j) {
                equi.push([
                    -1.0 + 2.0 * i as f64 / n,
                    -1.0 + 2.0 * j as f64 / n,
                    -1.0 + 2.0 * k as f64 / n,
                ]);
            }
        }
    }

    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let v1 = [-1.0, -1.0 / s3, -1.0 / s6];
    let v2 = [1.0, -1.0 / s3, -1.0 / s6];
    let v3 = [0.0, 2.0 / s3, -1.0 / s6];
    let v4 = [0.0, 0.0, 3.0 / s6];
    let mid = |a: Vec3, b: Vec3| scale([a[0] + b[0], a[1] + b[1], a[2] + b[2]], 0.5);
    let t1 = [
        normalize(sub(v2, v1)),
        normalize(sub(v2, v1)),
        normalize(sub(v3, v2)),
        normalize(sub(v3, v1)),
    ];
    let t2 = [
        normalize(sub(v3, mid(v1, v2))),
        normalize(sub(v4, mid(v1, v2))),
        normalize(sub(v4, mid(v2, v3))),
        normalize(sub(v4, mid(v1, v3))),
    ];
    let gl = {
        let mut x = gauss_lobatto_nodes(0, 0, order);
        x.iter_mut().for_each(|v| *v = -*v);
        x
    };

    let mut out = Vec::with_capacity(equi.len());
    for [r, s, t] in equi {
        let l1 = (1.0 + t) / 2.0;
        let l2 = (1.0 + s) / 2.0;
        let l3 = -(1.0 + r + s + t) / 2.0;
        let l4 = (1.0 + r) / 2.0;
        let mut xyz = [0.0; 3];
        for d in 0..3 {
            xyz[d] = l3 * v1[d] + l4 * v2[d] + l2 * v3[d] + l1 * v4[d];
        }
        let mut shift = [0.0; 3];
        for face in 0..4 {
            let (la, lb, lc, ld) = match face {
                0 => (l1, l2, l3, l4),
                1 => (l2, l1, l3, l4),
                2 => (l3, l1, l4, l2),
                _ => (l4, l1, l3, l2),
            };
            let (w1, w2) = face_shift(order, alpha, &gl, lb, lc, ld);
            let mut blend = lb * lc * ld;
            let denom = (lb + 0.5 * la) * (lc + 0.5 * la) * (ld + 0.5 * la);
            if denom > TOL {
                blend = (1.0 + (alpha * la).powi(2)) * blend / denom;
            }
            let on_face = la < TOL
                && (usize::from(lb > TOL) + usize::from(lc > TOL) + usize::from(ld > TOL)) < 3;
            for d in 0..3 {
                let face_warp = w1 * t1[face][d] + w2 * t2[face][d];
                if on_face {
                    shift[d] = face_warp;
                } else {
                    shift[d] += blend * face_warp;
                }
            }
        }
        for d in 0..3 {
            xyz[d] += shift[d];
        }
        out.push(equilateral_to_rst(xyz, [v1, v2, v3, v4]));
    }
    out
}

fn equilateral_to_rst(x: Vec3, [v1, v2, v3, v4]: [Vec3; 4]) -> Vec3 {
    // x = 0.5 * (v2 + v3 + v4 - v1) + A [r s t]^T with A columns 0.5 (v_i - v1).
    let mut rhs = [0.0; 3];
    for d in 0..3 {
        rhs[d] = x[d] - 0.5 * (v2[d] + v3[d] + v4[d] - v1[d]);
    }
    let a = nalgebra::Matrix3::from_columns(&[
        nalgebra::Vector3::from(scale(sub(v2, v1), 0.5)),
        nalgebra::Vector3::from(scale(sub(v3, v1), 0.5)),
        nalgebra::Vector3::from(scale(sub(v4, v1), 0.5)),
    ]);
    let rst = a
        .lu()
        .solve(&nalgebra::Vector3::from(rhs))
        .expect("equilateral tetrahedron map is invertible");
    [rst[0], rst[1], rst[2]]
}
