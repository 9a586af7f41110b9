//! Face-node connectivity: which volume node of which element supplies the
//! exterior trace at every face node.

use crate::error::{Error, Result};
use crate::mesh::{BoundaryTag, GeometricFactors, Mesh};
use crate::reference_element::ReferenceOperators;

/// How the exterior trace of a face is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum FaceKind {
    /// Neighbor trace (interior or periodic face).
    Coupled,
    /// Perfect electric conductor mirror.
    Pec,
    /// Neighbor trace corrected by the incident field. `jump_sign` is the
    /// sign with which the incident field enters `[u] = u^- - u^+`: `-1` on
    /// the total-field side, `+1` on the scattered-field side.
    Injection { jump_sign: f64 },
}

#[derive(Debug, Clone)]
pub(crate) struct FaceMaps {
    pub kind: Vec<[FaceKind; 4]>,
    /// Neighbor element per face (equal to the element itself on PEC faces).
    pub neighbor: Vec<[usize; 4]>,
    /// `[element][face][face node]`: node index inside the neighbor element.
    pub exterior_node: Vec<u32>,
    /// Plane of the injection faces, if any.
    pub injection_z: Option<f64>,
}

pub(crate) fn build_face_maps(mesh: &Mesh, ops: &ReferenceOperators, geom: &GeometricFactors) -> Result<FaceMaps> {
    let k_total = mesh.n_elements();
    if mesh.face_neighbors.len() != k_total {
        return Err(Error::Connectivity("mesh has no face connectivity; connect it first".into()));
    }
    let nfp = ops.n_face_nodes;
    let mut kind = Vec::with_capacity(k_total);
    let mut neighbor = Vec::with_capacity(k_total);
    let mut exterior_node = vec![0u32; k_total * 4 * nfp];
    let mut injection_z: Option<f64> = None;

    for k in 0..k_total {
        let mut kinds = [FaceKind::Pec; 4];
        let mut nbrs = [k; 4];
        let edge = mesh.max_edge(k);
        for f in 0..4 {
            let link = mesh.face_neighbors[k][f];
            let ext = &mut exterior_node[(k * 4 + f) * nfp..(k * 4 + f + 1) * nfp];
            let (k2, f2) = match (link.tag, link.neighbor) {
                (BoundaryTag::Pec, _) => {
                    for (j, slot) in ext.iter_mut().enumerate() {
                        *slot = ops.face_nodes[f][j] as u32;
                    }
                    continue;
                }
                (_, Some(pair)) => pair,
                (tag, None) => {
                    return Err(Error::Connectivity(format!(
                        "element {k} face {f} is tagged {tag:?} but has no neighbor trace"
                    )))
                }
            };
            kinds[f] = match link.tag {
                BoundaryTag::InjectionPlane => {
                    let z_face = mesh.face_centroid(k, f)[2];
                    match injection_z {
                        Some(z) if (z - z_face).abs() > 1e-9 * edge => {
                            return Err(Error::Config("injection faces do not lie on a single plane z = const".into()))
                        }
                        _ => injection_z = Some(z_face),
                    }
                    let total_side = mesh.centroid(k)[2] > z_face;
                    FaceKind::Injection {
                        jump_sign: if total_side { -1.0 } else { 1.0 },
                    }
                }
                _ => FaceKind::Coupled,
            };
            nbrs[f] = k2;

            // One period shift per face, from the face centroids; node
            // positions are then matched exactly. (Reducing each node modulo
            // the period would confuse opposite edges of one-cell-wide boxes.)
            let (c_here, c_there) = (mesh.face_centroid(k, f), mesh.face_centroid(k2, f2));
            let shift: [f64; 3] = std::array::from_fn(|d| match mesh.periods[d] {
                Some(period) => ((c_here[d] - c_there[d]) / period).round() * period,
                None => 0.0,
            });
            let here = &geom.node_coords[k];
            let there = &geom.node_coords[k2];
            for (j, slot) in ext.iter_mut().enumerate() {
                let x = here[ops.face_nodes[f][j]];
                let mut best = (f64::INFINITY, 0);
                for &n2 in &ops.face_nodes[f2] {
                    let y = there[n2];
                    let d2: f64 = (0..3).map(|d| (x[d] - y[d] - shift[d]).powi(2)).sum();
                    if d2 < best.0 {
                        best = (d2, n2);
                    }
                }
                if best.0.sqrt() > 1e-12 * edge.max(mesh.max_edge(k2)) {
                    return Err(Error::Connectivity(format!(
                        "face nodes of element {k} face {f} do not match element {k2} face {f2} (gap {:e})",
                        best.0.sqrt()
                    )));
                }
                *slot = best.1 as u32;
            }
        }
        kind.push(kinds);
        neighbor.push(nbrs);
    }
    Ok(FaceMaps {
        kind,
        neighbor,
        exterior_node,
        injection_z,
    })
}
