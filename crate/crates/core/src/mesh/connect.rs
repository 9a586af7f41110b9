use std::collections::HashMap;

use super::{dist, Axis, BoundaryTag, Mesh};
use crate::error::{Error, Result};
use crate::reference_element::FACE_VERTICES;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceConnection {
    /// `(element, face)` across this face; `None` on physical boundaries.
    pub neighbor: Option<(usize, usize)>,
    pub tag: BoundaryTag,
}

impl FaceConnection {
    pub const PEC: FaceConnection = FaceConnection {
        neighbor: None,
        tag: BoundaryTag::Pec,
    };
}

fn face_key(mesh: &Mesh, k: usize, f: usize) -> [usize; 3] {
    let mut key = FACE_VERTICES[f].map(|i| mesh.elements[k][i]);
    key.sort_unstable();
    key
}

/// Pair interior faces, identify periodic faces across `periodic_axes`
/// (x and/or y) and tag everything else as PEC.
pub fn connect_mesh(mut mesh: Mesh, periodic_axes: &[Axis]) -> Result<Mesh> {
    if periodic_axes.contains(&Axis::Z) {
        return Err(Error::Config("periodicity is supported along x and y only".into()));
    }
    let n = mesh.n_elements();
    let mut links = vec![[FaceConnection::PEC; 4]; n];
    let mut open: HashMap<[usize; 3], (usize, usize)> = HashMap::with_capacity(2 * n);
    for k in 0..n {
        for f in 0..4 {
            let key = face_key(&mesh, k, f);
            match open.remove(&key) {
                Some((k2, f2)) => {
                    links[k][f] = FaceConnection {
                        neighbor: Some((k2, f2)),
                        tag: BoundaryTag::Interior,
                    };
                    links[k2][f2] = FaceConnection {
                        neighbor: Some((k, f)),
                        tag: BoundaryTag::Interior,
                    };
                }
                None => {
                    open.insert(key, (k, f));
                }
            }
        }
    }
    let mut boundary: Vec<(usize, usize)> = open.into_values().collect();
    boundary.sort_unstable();

    let bounds = mesh.bounds;
    let size = (0..3).map(|d| bounds[1][d] - bounds[0][d]).fold(0.0, f64::max);
    let tol = 1e-9 * size;
    let on_plane = |c: [f64; 3], d: usize, side: usize| (c[d] - bounds[side][d]).abs() < tol;

    // Every unmatched face must sit on the bounding box, otherwise the mesh has
    // a hanging node or a hole.
    for &(k, f) in &boundary {
        let c = mesh.face_centroid(k, f);
        let on_box = (0..3).any(|d| on_plane(c, d, 0) || on_plane(c, d, 1));
        if !on_box {
            return Err(Error::Geometry(format!(
                "non-conforming mesh: unmatched interior face on element {k} face {f} at ({:.6e}, {:.6e}, {:.6e})",
                c[0], c[1], c[2]
            )));
        }
    }

    mesh.periods = [None; 3];
    for &axis in periodic_axes {
        let d = axis.index();
        let period = bounds[1][d] - bounds[0][d];
        let tag = match axis {
            Axis::X => BoundaryTag::PeriodicX,
            _ => BoundaryTag::PeriodicY,
        };
        let lower: Vec<(usize, usize)> = boundary
            .iter()
            .copied()
            .filter(|&(k, f)| on_plane(mesh.face_centroid(k, f), d, 0))
            .collect();
        let mut upper: Vec<(usize, usize, [f64; 3])> = boundary
            .iter()
            .copied()
            .filter(|&(k, f)| on_plane(mesh.face_centroid(k, f), d, 1))
            .map(|(k, f)| (k, f, mesh.face_centroid(k, f)))
            .collect();
        if lower.len() != upper.len() {
            let (k, f) = lower.first().copied().unwrap_or((upper[0].0, upper[0].1));
            return Err(Error::UnmatchedPeriodicFace {
                element: k,
                face: f,
                centroid: mesh.face_centroid(k, f),
            });
        }
        for (k, f) in lower {
            let mut c = mesh.face_centroid(k, f);
            c[d] += period;
            let pos = upper
                .iter()
                .position(|&(_, _, cu)| dist(c, cu) < tol)
                .ok_or(Error::UnmatchedPeriodicFace {
                    element: k,
                    face: f,
                    centroid: mesh.face_centroid(k, f),
                })?;
            let (k2, f2, _) = upper.swap_remove(pos);
            check_congruent(&mesh, (k, f), (k2, f2), d, period, 1e-12 * size)?;
            links[k][f] = FaceConnection {
                neighbor: Some((k2, f2)),
                tag,
            };
            links[k2][f2] = FaceConnection {
                neighbor: Some((k, f)),
                tag,
            };
        }
        mesh.periods[d] = Some(period);
    }

    mesh.face_neighbors = links;
    Ok(mesh)
}

fn check_congruent(
    mesh: &Mesh,
    (k1, f1): (usize, usize),
    (k2, f2): (usize, usize),
    d: usize,
    period: f64,
    tol: f64,
) -> Result<()> {
    let a = FACE_VERTICES[f1].map(|i| mesh.vertices[mesh.elements[k1][i]]);
    let b = FACE_VERTICES[f2].map(|i| mesh.vertices[mesh.elements[k2][i]]);
    for mut p in a {
        p[d] += period;
        let best = b.iter().map(|&q| dist(p, q)).fold(f64::INFINITY, f64::min);
        if best > tol {
            return Err(Error::UnmatchedPeriodicFace {
                element: k1,
                face: f1,
                centroid: mesh.face_centroid(k1, f1),
            });
        }
    }
    Ok(())
}

/// Tag every interior face lying on the plane `z = z0` as an injection face.
///
/// Fails unless the plane is an exact union of element faces spanning the
/// full cross-section of the box.
pub fn tag_injection_plane(mesh: &mut Mesh, z0: f64) -> Result<usize> {
    if !mesh.is_connected() {
        return Err(Error::Connectivity("mesh must be connected before tagging".into()));
    }
    let size = (0..3).map(|d| mesh.bounds[1][d] - mesh.bounds[0][d]).fold(0.0, f64::max);
    let tol = 1e-9 * size;
    let mut area = 0.0;
    let mut count = 0;
    for k in 0..mesh.n_elements() {
        let v = mesh.element_vertices(k);
        let above = v.iter().any(|p| p[2] > z0 + tol);
        let below = v.iter().any(|p| p[2] < z0 - tol);
        if above && below {
            return Err(Error::Config(format!(
                "injection plane z = {z0} cuts through element {k}; it must be a union of element faces"
            )));
        }
        for f in 0..4 {
            let fv = FACE_VERTICES[f].map(|i| v[i]);
            if fv.iter().all(|p| (p[2] - z0).abs() < tol) {
                let link = &mut mesh.face_neighbors[k][f];
                if link.neighbor.is_some() {
                    link.tag = BoundaryTag::InjectionPlane;
                    count += 1;
                    if v.iter().any(|p| p[2] > z0 + tol) {
                        area += triangle_area(fv);
                    }
                }
            }
        }
    }
    let cross = (mesh.bounds[1][0] - mesh.bounds[0][0]) * (mesh.bounds[1][1] - mesh.bounds[0][1]);
    if count == 0 || (area - cross).abs() > 1e-9 * cross {
        return Err(Error::Config(format!(
            "injection plane z = {z0} is not a complete union of element faces"
        )));
    }
    Ok(count)
}

fn triangle_area(p: [[f64; 3]; 3]) -> f64 {
    let a: [f64; 3] = std::array::from_fn(|d| p[1][d] - p[0][d]);
    let b: [f64; 3] = std::array::from_fn(|d| p[2][d] - p[0][d]);
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    0.5 * (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_box_mesh, BoxMeshSpec, MeshStyle};

    fn box_mesh(extent: [f64; 3], h: f64, style: MeshStyle) -> Mesh {
        build_box_mesh(&BoxMeshSpec {
            origin: [0.0; 3],
            extent,
            target_edge: h,
            style,
            layer_planes: vec![],
        })
        .unwrap()
    }

    #[test]
    fn single_hex_tags_all_exterior_faces() {
        let m = connect_mesh(box_mesh([1.0; 3], 1.0, MeshStyle::Layered), &[]).unwrap();
        let pec = m.face_neighbors.iter().flatten().filter(|c| c.neighbor.is_none()).count();
        assert_eq!(pec, 12);
        // Six tets have 24 faces: 12 on the cube surface, 12 shared pairwise.
        let interior = m.face_neighbors.iter().flatten().filter(|c| c.neighbor.is_some()).count();
        assert_eq!(pec + interior, 24);
    }

    #[test]
    fn periodic_box_pairs_every_side_face() {
        for style in [MeshStyle::Paved, MeshStyle::Layered] {
            let m = connect_mesh(box_mesh([0.012, 0.012, 0.6], 0.004, style), &[Axis::X, Axis::Y]).unwrap();
            let bounds = m.bounds;
            for k in 0..m.n_elements() {
                for f in 0..4 {
                    let c = m.face_neighbors[k][f];
                    let z = m.face_centroid(k, f)[2];
                    let on_z_wall = (z - bounds[0][2]).abs() < 1e-12 || (z - bounds[1][2]).abs() < 1e-12;
                    assert_eq!(c.neighbor.is_none(), on_z_wall);
                }
            }
        }
    }

    #[test]
    fn adjacency_is_an_involution() {
        let m = connect_mesh(box_mesh([0.012, 0.012, 0.02], 0.004, MeshStyle::Paved), &[Axis::X, Axis::Y]).unwrap();
        for k in 0..m.n_elements() {
            for f in 0..4 {
                if let Some((k2, f2)) = m.face_neighbors[k][f].neighbor {
                    assert_eq!(m.face_neighbors[k2][f2].neighbor, Some((k, f)));
                    assert_eq!(m.face_neighbors[k2][f2].tag, m.face_neighbors[k][f].tag);
                }
            }
        }
    }

    #[test]
    fn periodic_faces_translate_exactly() {
        let m = connect_mesh(box_mesh([0.012, 0.012, 0.02], 0.004, MeshStyle::Paved), &[Axis::X]).unwrap();
        for k in 0..m.n_elements() {
            for f in 0..4 {
                let c = m.face_neighbors[k][f];
                if c.tag == BoundaryTag::PeriodicX {
                    let (k2, f2) = c.neighbor.unwrap();
                    let a = m.face_centroid(k, f);
                    let b = m.face_centroid(k2, f2);
                    assert!(((b[0] - a[0]).abs() - 0.012).abs() < 1e-15);
                    assert!((b[1] - a[1]).abs() < 1e-15 && (b[2] - a[2]).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn injection_plane_must_be_face_aligned() {
        let mut m = connect_mesh(
            build_box_mesh(&BoxMeshSpec {
                origin: [0.0, 0.0, -0.02],
                extent: [0.012, 0.012, 0.04],
                target_edge: 0.004,
                style: MeshStyle::Paved,
                layer_planes: vec![0.0],
            })
            .unwrap(),
            &[Axis::X, Axis::Y],
        )
        .unwrap();
        assert_eq!(tag_injection_plane(&mut m, 0.0).unwrap(), 2 * 18);
        assert!(tag_injection_plane(&mut m, 0.006).is_err());
    }

    #[test]
    fn z_periodicity_is_rejected() {
        assert!(connect_mesh(box_mesh([1.0; 3], 1.0, MeshStyle::Paved), &[Axis::Z]).is_err());
    }
}
