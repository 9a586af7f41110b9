use super::Mesh;
use crate::error::{Error, Result};
use crate::reference_element::{ReferenceOperators, REFERENCE_VOLUME};

/// Affine-map factors of every element.
#[derive(Debug, Clone)]
pub struct GeometricFactors {
    /// Volume ratio `J_k = |Omega_k| / |reference|`.
    pub jacobian: Vec<f64>,
    /// Rows are the physical gradients of r, s and t: `[[rx, ry, rz], [sx, ..], [tx, ..]]`.
    pub inv_map: Vec<[[f64; 3]; 3]>,
    /// Outward unit normal per face.
    pub face_normals: Vec<[[f64; 3]; 4]>,
    /// Surface Jacobian over volume Jacobian, per face.
    pub face_scale: Vec<[f64; 4]>,
    /// Physical coordinates of the interpolation nodes, per element.
    pub node_coords: Vec<Vec<[f64; 3]>>,
    /// Radius of the inscribed sphere, per element.
    pub inradius: Vec<f64>,
}

/// Physical point of reference coordinates `rst` in an element with vertices `v`.
pub fn map_to_physical(v: &[[f64; 3]; 4], rst: [f64; 3]) -> [f64; 3] {
    let [r, s, t] = rst;
    let l = [-(1.0 + r + s + t) / 2.0, (1.0 + r) / 2.0, (1.0 + s) / 2.0, (1.0 + t) / 2.0];
    std::array::from_fn(|d| (0..4).map(|i| l[i] * v[i][d]).sum())
}

/// Reference coordinates of a physical point (inverse affine map).
pub fn map_to_reference(v: &[[f64; 3]; 4], inv: &[[f64; 3]; 3], x: [f64; 3]) -> [f64; 3] {
    let dx: [f64; 3] = std::array::from_fn(|d| x[d] - v[0][d]);
    std::array::from_fn(|i| -1.0 + (0..3).map(|d| inv[i][d] * dx[d]).sum::<f64>())
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

pub fn geometric_factors(mesh: &Mesh, ops: &ReferenceOperators) -> Result<GeometricFactors> {
    let n = mesh.n_elements();
    let mut g = GeometricFactors {
        jacobian: Vec::with_capacity(n),
        inv_map: Vec::with_capacity(n),
        face_normals: Vec::with_capacity(n),
        face_scale: Vec::with_capacity(n),
        node_coords: Vec::with_capacity(n),
        inradius: Vec::with_capacity(n),
    };
    for k in 0..n {
        let v = mesh.element_vertices(k);
        // Columns of d x / d (r, s, t).
        let cols: [[f64; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|d| 0.5 * (v[i + 1][d] - v[0][d])));
        let c12 = cross(cols[1], cols[2]);
        let jac = cols[0][0] * c12[0] + cols[0][1] * c12[1] + cols[0][2] * c12[2];
        if !(jac > 0.0) {
            return Err(Error::InvertedElement {
                element: k,
                jacobian: jac,
            });
        }
        // Rows of the inverse are the cross products of the other two columns.
        let c20 = cross(cols[2], cols[0]);
        let c01 = cross(cols[0], cols[1]);
        let inv = [c12, c20, c01].map(|row| row.map(|x| x / jac));
        let grad_r = inv[0];
        let grad_s = inv[1];
        let grad_t = inv[2];
        let raw = [
            grad_t.map(|x| -x),
            grad_s.map(|x| -x),
            std::array::from_fn(|d| grad_r[d] + grad_s[d] + grad_t[d]),
            grad_r.map(|x| -x),
        ];
        let scale = raw.map(norm);
        let normals: [[f64; 3]; 4] = std::array::from_fn(|f| raw[f].map(|x| x / scale[f]));

        let area_sum: f64 = (0..4)
            .map(|f| {
                let ids = crate::reference_element::FACE_VERTICES[f];
                let a: [f64; 3] = std::array::from_fn(|d| v[ids[1]][d] - v[ids[0]][d]);
                let b: [f64; 3] = std::array::from_fn(|d| v[ids[2]][d] - v[ids[0]][d]);
                0.5 * norm(cross(a, b))
            })
            .sum();
        let volume = jac * REFERENCE_VOLUME;

        g.jacobian.push(jac);
        g.inv_map.push(inv);
        g.face_normals.push(normals);
        g.face_scale.push(scale);
        g.node_coords.push(ops.nodes.iter().map(|&rst| map_to_physical(&v, rst)).collect());
        g.inradius.push(3.0 * volume / area_sum);
    }
    Ok(g)
}
