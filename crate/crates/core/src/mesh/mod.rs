//! Structured tetrahedral box meshes, connectivity and geometric factors.
//!
//! Boxes are built from a hexahedral lattice, each hexahedron split into six
//! tetrahedra sharing one main diagonal (Kuhn subdivision). The split is
//! mirrored in every axis on odd lattice indices, which keeps the mesh
//! conforming across cells and across periodic boundaries.
//!
//! The paved style additionally displaces lattice vertices along z by a fixed
//! pseudo-random amount, so element faces inside the box are not parallel to
//! any z-plane except the ones listed as fixed planes. The layered style keeps
//! every lattice z-plane flat, so each listed plane is an exact union of faces.

mod connect;
mod geometry;
mod io;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use connect::{connect_mesh, tag_injection_plane, FaceConnection};
pub use geometry::{geometric_factors, map_to_physical, map_to_reference, GeometricFactors};
pub use io::{read_mesh_file, write_mesh_file};

use crate::error::{Error, Result};
use crate::reference_element::FACE_VERTICES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshStyle {
    Paved,
    Layered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    Pec,
    PeriodicX,
    PeriodicY,
    InjectionPlane,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionTag {
    Interior,
    Pml,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Relative amplitude of the paved-style z displacement, as a fraction of the
/// smaller adjacent lattice spacing. Must stay below 1/2 to keep volumes positive.
pub const PAVED_JITTER: f64 = 0.25;

const PAVED_SEED: u64 = 0x5eed_0f_9a7ed;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxMeshSpec {
    /// Lower corner (m).
    pub origin: [f64; 3],
    /// Edge lengths of the box (m).
    pub extent: [f64; 3],
    /// Target lattice spacing (m).
    pub target_edge: f64,
    pub style: MeshStyle,
    /// z-coordinates that must be lattice planes. Kept flat in both styles.
    pub layer_planes: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub elements: Vec<[usize; 4]>,
    /// Per element and face; empty until [`connect_mesh`] runs.
    pub face_neighbors: Vec<[FaceConnection; 4]>,
    pub region_tags: Vec<RegionTag>,
    pub style: MeshStyle,
    /// Flat z-planes guaranteed to be unions of element faces.
    pub layer_planes: Vec<f64>,
    /// Lattice plane coordinates per axis (before any paved displacement).
    pub lattice: [Vec<f64>; 3],
    /// Axis-aligned bounding box, `[lower, upper]`.
    pub bounds: [[f64; 3]; 2],
    /// Period vector length per axis, set by [`connect_mesh`].
    pub periods: [Option<f64>; 3],
}

fn subdivide(lo: f64, hi: f64, breaks: &[f64], h: f64) -> Vec<f64> {
    let mut knots = vec![lo];
    knots.extend(breaks.iter().copied());
    knots.push(hi);
    let mut planes = vec![lo];
    for w in knots.windows(2) {
        let len = w[1] - w[0];
        let n = ((len / h) - 1e-6).ceil().max(1.0) as usize;
        for i in 1..=n {
            planes.push(if i == n {
                w[1]
            } else {
                w[0] + len * i as f64 / n as f64
            });
        }
    }
    planes
}

pub fn build_box_mesh(spec: &BoxMeshSpec) -> Result<Mesh> {
    let h = spec.target_edge;
    if !(h > 0.0) {
        return Err(Error::Config("target edge must be positive".into()));
    }
    if spec.extent.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::Config("box extents must be positive".into()));
    }
    if spec.extent.iter().any(|&e| h > e * (1.0 + 1e-9)) {
        return Err(Error::Config(format!(
            "target edge {h} exceeds a box extent {:?}",
            spec.extent
        )));
    }
    let lo = spec.origin;
    let hi = [lo[0] + spec.extent[0], lo[1] + spec.extent[1], lo[2] + spec.extent[2]];
    let tol = 1e-9 * spec.extent[2];
    for w in spec.layer_planes.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Config("layer planes must be strictly increasing".into()));
        }
    }
    if spec.layer_planes.iter().any(|&z| z <= lo[2] + tol || z >= hi[2] - tol) {
        return Err(Error::Config(format!(
            "layer planes must lie strictly inside z in ({}, {})",
            lo[2], hi[2]
        )));
    }

    let lattice = [
        subdivide(lo[0], hi[0], &[], h),
        subdivide(lo[1], hi[1], &[], h),
        subdivide(lo[2], hi[2], &spec.layer_planes, h),
    ];
    let [nx, ny, nz] = [lattice[0].len() - 1, lattice[1].len() - 1, lattice[2].len() - 1];
    let vid = |i: usize, j: usize, k: usize| (k * (ny + 1) + j) * (nx + 1) + i;

    // Paved displacement: periodic in x and y so periodic faces stay congruent.
    let fixed_k: Vec<bool> = (0..=nz)
        .map(|k| {
            k == 0
                || k == nz
                || spec
                    .layer_planes
                    .iter()
                    .any(|&z| (z - lattice[2][k]).abs() <= tol)
        })
        .collect();
    let mut dz = vec![0.0; (nz + 1) * ny * nx];
    if spec.style == MeshStyle::Paved {
        let mut rng = ChaCha8Rng::seed_from_u64(PAVED_SEED);
        for k in 0..=nz {
            for j in 0..ny {
                for i in 0..nx {
                    let u: f64 = rng.random_range(-1.0..=1.0);
                    if !fixed_k[k] {
                        let below = lattice[2][k] - lattice[2][k - 1];
                        let above = lattice[2][k + 1] - lattice[2][k];
                        dz[(k * ny + j) * nx + i] = PAVED_JITTER * below.min(above) * u;
                    }
                }
            }
        }
    }

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                let shift = dz[(k * ny + j % ny) * nx + i % nx];
                vertices.push([lattice[0][i], lattice[1][j], lattice[2][k] + shift]);
            }
        }
    }

    const PATHS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut elements = Vec::with_capacity(6 * nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let base = [i, j, k];
                let corner = |bits: [usize; 3]| {
                    let c: [usize; 3] = std::array::from_fn(|d| base[d] + (bits[d] ^ (base[d] & 1)));
                    vid(c[0], c[1], c[2])
                };
                for path in PATHS {
                    let mut bits = [0usize; 3];
                    let mut tet = [corner(bits), 0, 0, 0];
                    for (step, &axis) in path.iter().enumerate() {
                        bits[axis] = 1;
                        tet[step + 1] = corner(bits);
                    }
                    if signed_volume(&vertices, &tet) < 0.0 {
                        tet.swap(2, 3);
                    }
                    elements.push(tet);
                }
            }
        }
    }

    let n_el = elements.len();
    let mesh = Mesh {
        vertices,
        elements,
        face_neighbors: Vec::new(),
        region_tags: vec![RegionTag::Interior; n_el],
        style: spec.style,
        layer_planes: spec.layer_planes.clone(),
        lattice,
        bounds: [lo, hi],
        periods: [None; 3],
    };
    mesh.check_volumes()?;
    Ok(mesh)
}

pub fn signed_volume(vertices: &[[f64; 3]], tet: &[usize; 4]) -> f64 {
    let p0 = vertices[tet[0]];
    let e: [[f64; 3]; 3] = std::array::from_fn(|i| {
        let p = vertices[tet[i + 1]];
        [p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]]
    });
    (e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
        + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]))
        / 6.0
}

impl Mesh {
    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn element_vertices(&self, k: usize) -> [[f64; 3]; 4] {
        self.elements[k].map(|v| self.vertices[v])
    }

    pub fn centroid(&self, k: usize) -> [f64; 3] {
        let v = self.element_vertices(k);
        std::array::from_fn(|d| v.iter().map(|p| p[d]).sum::<f64>() / 4.0)
    }

    pub fn face_centroid(&self, k: usize, f: usize) -> [f64; 3] {
        let v = self.element_vertices(k);
        let ids = FACE_VERTICES[f];
        std::array::from_fn(|d| ids.iter().map(|&i| v[i][d]).sum::<f64>() / 3.0)
    }

    pub fn volume(&self, k: usize) -> f64 {
        signed_volume(&self.vertices, &self.elements[k])
    }

    /// Largest distance between vertices of element `k`.
    pub fn max_edge(&self, k: usize) -> f64 {
        let v = self.element_vertices(k);
        let mut m: f64 = 0.0;
        for a in 0..4 {
            for b in (a + 1)..4 {
                m = m.max(dist(v[a], v[b]));
            }
        }
        m
    }

    pub fn check_volumes(&self) -> Result<()> {
        let scale = (0..3).map(|d| self.bounds[1][d] - self.bounds[0][d]).fold(0.0, f64::max);
        for k in 0..self.n_elements() {
            let vol = self.volume(k);
            if !(vol > 1e-14 * scale.powi(3)) {
                return Err(Error::InvertedElement {
                    element: k,
                    jacobian: vol / crate::reference_element::REFERENCE_VOLUME,
                });
            }
        }
        Ok(())
    }

    /// Indices of elements tagged as PML.
    pub fn pml_elements(&self) -> Vec<usize> {
        (0..self.n_elements())
            .filter(|&k| self.region_tags[k] == RegionTag::Pml)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.face_neighbors.len() == self.n_elements()
    }
}

pub(crate) fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

pub(crate) fn compute_bounds(vertices: &[[f64; 3]]) -> [[f64; 3]; 2] {
    let mut b = [[f64::INFINITY; 3], [f64::NEG_INFINITY; 3]];
    for v in vertices {
        for d in 0..3 {
            b[0][d] = b[0][d].min(v[d]);
            b[1][d] = b[1][d].max(v[d]);
        }
    }
    b
}
