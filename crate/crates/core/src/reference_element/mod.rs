//! Element-independent operators on the reference tetrahedron
//! with vertices (-1,-1,-1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
//!
//! The nodal basis is the Lagrange basis on warp-and-blend nodes, built from
//! the orthonormal Koornwinder-Dubiner basis through the Vandermonde matrix.
//! All matrices are dense and column-major (nalgebra's layout).

pub mod basis;
pub mod nodes;
pub mod quadrature;
mod quadrature_tables;

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;

pub use quadrature::{build_quadrature, QuadratureRule, REFERENCE_VOLUME};

use crate::error::{Error, Result};
use basis::{grad_simplex3d, simplex2d, simplex3d, tet_basis_indices, tri_basis_indices};

/// Highest order with a quadrature table.
pub const MAX_ORDER: usize = 5;

/// Local vertex indices of each face, in the face ordering used throughout.
pub const FACE_VERTICES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [1, 2, 3], [0, 2, 3]];

pub fn n_nodes(order: usize) -> usize {
    (order + 1) * (order + 2) * (order + 3) / 6
}

pub fn n_face_nodes(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

#[derive(Debug, Clone)]
pub struct ReferenceOperators {
    pub order: usize,
    pub n_nodes: usize,
    pub n_face_nodes: usize,
    pub nodes: Vec<[f64; 3]>,
    /// `V(j, i) = phi_i(r_j)`.
    pub vandermonde: DMatrix<f64>,
    pub vandermonde_inv: DMatrix<f64>,
    pub mass: DMatrix<f64>,
    pub mass_inv: DMatrix<f64>,
    /// Nodal differentiation matrices `D_r, D_s, D_t`.
    pub diff: [DMatrix<f64>; 3],
    /// `[D_r; D_s; D_t]` stacked into a `3 N_p x N_p` block.
    pub diff_stacked: DMatrix<f64>,
    /// `S^u = M D_u`.
    pub stiffness: [DMatrix<f64>; 3],
    /// Volume node indices lying on each face.
    pub face_nodes: [Vec<usize>; 4],
    /// Face mass matrices embedded in an `N_p x 4 N_fp` block.
    pub face_mass: DMatrix<f64>,
    /// `M^{-1}` times the face mass block.
    pub lift: DMatrix<f64>,
    pub quad: QuadratureRule,
    /// `V_q = V_I V^{-1}` (`N_q x N_p`).
    pub interp_to_quad: DMatrix<f64>,
    /// `P_q = M^{-1} V_q^T W` (`N_p x N_q`).
    pub project_from_quad: DMatrix<f64>,
}

/// Orthonormal-basis Vandermonde matrix at arbitrary reference points.
pub fn vandermonde_at(order: usize, points: &[[f64; 3]]) -> DMatrix<f64> {
    let idx = tet_basis_indices(order);
    DMatrix::from_fn(points.len(), idx.len(), |q, i| {
        let [r, s, t] = points[q];
        simplex3d(r, s, t, idx[i])
    })
}

fn grad_vandermonde(order: usize, points: &[[f64; 3]]) -> [DMatrix<f64>; 3] {
    let idx = tet_basis_indices(order);
    let grads: Vec<Vec<[f64; 3]>> = points
        .iter()
        .map(|&[r, s, t]| idx.iter().map(|&ijk| grad_simplex3d(r, s, t, ijk)).collect())
        .collect();
    std::array::from_fn(|d| DMatrix::from_fn(points.len(), idx.len(), |q, i| grads[q][i][d]))
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

pub fn build_reference_operators(order: usize) -> Result<ReferenceOperators> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(Error::UnsupportedOrder {
            order,
            reason: format!("supported orders are 1 to {MAX_ORDER}"),
        });
    }
    let np = n_nodes(order);
    let nfp = n_face_nodes(order);
    let nodes = nodes::warp_blend_nodes(order);
    debug_assert_eq!(nodes.len(), np);

    let v = vandermonde_at(order, &nodes);
    let cond = condition_number(&v);
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::Config(format!(
            "interpolation nodes of order {order} give a singular Vandermonde matrix (cond {cond:e})"
        )));
    }
    let v_inv = v
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Config("singular Vandermonde matrix".into()))?;
    let mass_inv = &v * v.transpose();
    let mass = v_inv.transpose() * &v_inv;

    let vgrad = grad_vandermonde(order, &nodes);
    let diff: [DMatrix<f64>; 3] = std::array::from_fn(|d| &vgrad[d] * &v_inv);
    let stiffness: [DMatrix<f64>; 3] = std::array::from_fn(|d| &mass * &diff[d]);
    let mut diff_stacked = DMatrix::zeros(3 * np, np);
    for d in 0..3 {
        diff_stacked.view_mut((d * np, 0), (np, np)).copy_from(&diff[d]);
    }

    let face_nodes = face_node_indices(&nodes);
    for (f, ids) in face_nodes.iter().enumerate() {
        if ids.len() != nfp {
            return Err(Error::Config(format!(
                "face {f} carries {} nodes, expected {nfp}",
                ids.len()
            )));
        }
    }

    let tri_idx = tri_basis_indices(order);
    let mut face_mass = DMatrix::zeros(np, 4 * nfp);
    for (f, ids) in face_nodes.iter().enumerate() {
        let v2 = DMatrix::from_fn(nfp, nfp, |a, i| {
            let [r, s, t] = nodes[ids[a]];
            let (x, y) = match f {
                0 => (r, s),
                1 => (r, t),
                _ => (s, t),
            };
            simplex2d(x, y, tri_idx[i])
        });
        let m2 = (&v2 * v2.transpose())
            .try_inverse()
            .ok_or_else(|| Error::Config(format!("singular face Vandermonde on face {f}")))?;
        for (a, &row) in ids.iter().enumerate() {
            for b in 0..nfp {
                face_mass[(row, f * nfp + b)] = m2[(a, b)];
            }
        }
    }
    let lift = &v * (v.transpose() * &face_mass);

    let quad = build_quadrature(order)?;
    let vi = vandermonde_at(order, &quad.points);
    let interp_to_quad = &vi * &v_inv;
    let mut vq_t_w = interp_to_quad.transpose();
    for (q, w) in quad.weights.iter().enumerate() {
        vq_t_w.column_mut(q).scale_mut(*w);
    }
    let project_from_quad = &mass_inv * vq_t_w;

    Ok(ReferenceOperators {
        order,
        n_nodes: np,
        n_face_nodes: nfp,
        nodes,
        vandermonde: v,
        vandermonde_inv: v_inv,
        mass,
        mass_inv,
        diff,
        diff_stacked,
        stiffness,
        face_nodes,
        face_mass,
        lift,
        quad,
        interp_to_quad,
        project_from_quad,
    })
}

fn face_node_indices(nodes: &[[f64; 3]]) -> [Vec<usize>; 4] {
    const TOL: f64 = 1e-10;
    let select = |pred: &dyn Fn(&[f64; 3]) -> bool| -> Vec<usize> {
        nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| pred(n))
            .map(|(i, _)| i)
            .collect()
    };
    [
        select(&|n| (1.0 + n[2]).abs() < TOL),
        select(&|n| (1.0 + n[1]).abs() < TOL),
        select(&|n| (1.0 + n[0] + n[1] + n[2]).abs() < TOL),
        select(&|n| (1.0 + n[0]).abs() < TOL),
    ]
}

impl ReferenceOperators {
    pub fn n_quad(&self) -> usize {
        self.quad.n_points()
    }

    /// Point values at the quadrature nodes of a nodal coefficient vector.
    pub fn interpolate_to_quad(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        if coeffs.len() != self.n_nodes {
            return Err(Error::Contract(format!(
                "expected {} nodal coefficients, got {}",
                self.n_nodes,
                coeffs.len()
            )));
        }
        let mut out = vec![0.0; self.n_quad()];
        for (q, o) in out.iter_mut().enumerate() {
            *o = (0..self.n_nodes).map(|j| self.interp_to_quad[(q, j)] * coeffs[j]).sum();
        }
        Ok(out)
    }

    /// Nodal coefficients of the L2 projection of quadrature-point values.
    pub fn project_from_quad(&self, values: &[f64]) -> Result<Vec<f64>> {
        if values.len() != self.n_quad() {
            return Err(Error::Contract(format!(
                "expected {} quadrature values, got {}",
                self.n_quad(),
                values.len()
            )));
        }
        let mut out = vec![0.0; self.n_nodes];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..self.n_quad()).map(|q| self.project_from_quad[(i, q)] * values[q]).sum();
        }
        Ok(out)
    }

    /// Rows of Lagrange basis values at arbitrary reference points (`n x N_p`).
    pub fn lagrange_at(&self, points: &[[f64; 3]]) -> DMatrix<f64> {
        vandermonde_at(self.order, points) * &self.vandermonde_inv
    }

    /// Write every operator as a CSV matrix into `dir`.
    pub fn write_csv(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let named: Vec<(&str, &DMatrix<f64>)> = vec![
            ("vandermonde", &self.vandermonde),
            ("mass", &self.mass),
            ("mass_inv", &self.mass_inv),
            ("stiffness_r", &self.stiffness[0]),
            ("stiffness_s", &self.stiffness[1]),
            ("stiffness_t", &self.stiffness[2]),
            ("lift", &self.lift),
            ("interp_to_quad", &self.interp_to_quad),
            ("project_from_quad", &self.project_from_quad),
        ];
        for (name, m) in named {
            let mut f = std::io::BufWriter::new(std::fs::File::create(
                dir.join(format!("p{}_{name}.csv", self.order)),
            )?);
            for i in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:e}", m[(i, j)])).collect();
                writeln!(f, "{}", row.join(","))?;
            }
        }
        let mut f = std::io::BufWriter::new(std::fs::File::create(
            dir.join(format!("p{}_quadrature.csv", self.order)),
        )?);
        writeln!(f, "r,s,t,weight")?;
        for (p, w) in self.quad.points.iter().zip(&self.quad.weights) {
            writeln!(f, "{:e},{:e},{:e},{:e}", p[0], p[1], p[2], w)?;
        }
        Ok(())
    }
}
