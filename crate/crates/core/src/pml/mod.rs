//! Stretched-coordinate PML: conductivity/stretch profiles, the diagonal
//! tensor coefficients of the auxiliary-variable update, coefficient sampling
//! strategies, and per-element operators in direct and weight-adjusted form.
//!
//! For each Cartesian component `u` with `(u, v, w)` cyclic,
//!
//! ```text
//! a_uu = k_v k_w / k_u
//! b_uu = (s_v k_w + s_w k_v - a_uu s_u) / (k_u e0)
//! c_uu = s_v s_w / e0^2 - b_uu s_u / e0
//! d_uu = s_u / (k_u e0)
//! ```
//!
//! where `s` is the conductivity profile and `k` the real stretch.

mod direct;
mod waa;

use serde::{Deserialize, Serialize};

pub use direct::{DirectPmlOperators, FusedOperator};
pub use waa::WaaPmlOperators;

use crate::error::{Error, Result};
use crate::mesh::{map_to_physical, Mesh, MeshStyle, RegionTag};
use crate::reference_element::ReferenceOperators;

/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 8.8541878128e-12;
/// Vacuum permeability (H/m).
pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Speed of light in vacuum (m/s).
pub fn c0() -> f64 {
    1.0 / (EPS0 * MU0).sqrt()
}

/// Wave impedance of vacuum (ohm).
pub fn eta0() -> f64 {
    (MU0 / EPS0).sqrt()
}

/// One absorbing layer on one side of one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmlLayer {
    /// Coordinate of the interface with the computation domain (m).
    pub interface: f64,
    /// Layer thickness (m).
    pub thickness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StretchProfile {
    /// Conductivity scale (S/m).
    pub sigma_max: f64,
    /// Maximum real stretch, at least 1.
    pub kappa_max: f64,
    /// Polynomial grading order of both profiles.
    pub order: f64,
    /// Layer below the domain (`u < interface`), per axis.
    pub lower: [Option<PmlLayer>; 3],
    /// Layer above the domain (`u > interface`), per axis.
    pub upper: [Option<PmlLayer>; 3],
}

impl StretchProfile {
    /// Layers at both z ends, none along x and y.
    pub fn z_slab(sigma_max: f64, kappa_max: f64, order: f64, lower_z: f64, upper_z: f64, thickness: f64) -> Self {
        Self {
            sigma_max,
            kappa_max,
            order,
            lower: [None, None, Some(PmlLayer { interface: lower_z, thickness })],
            upper: [None, None, Some(PmlLayer { interface: upper_z, thickness })],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_max >= 0.0) || !self.sigma_max.is_finite() {
            return Err(Error::Config(format!("sigma_max must be non-negative, got {}", self.sigma_max)));
        }
        if !(self.kappa_max >= 1.0) || !self.kappa_max.is_finite() {
            return Err(Error::Config(format!("kappa_max must be at least 1, got {}", self.kappa_max)));
        }
        if !(self.order >= 0.0) {
            return Err(Error::Config(format!("profile order must be non-negative, got {}", self.order)));
        }
        for d in 0..3 {
            for layer in [self.lower[d], self.upper[d]].into_iter().flatten() {
                if !(layer.thickness > 0.0) {
                    return Err(Error::Config("PML thickness must be positive".into()));
                }
            }
            if let (Some(lo), Some(hi)) = (self.lower[d], self.upper[d]) {
                if !(lo.interface < hi.interface) {
                    return Err(Error::Config("lower PML interface must lie below the upper one".into()));
                }
            }
        }
        Ok(())
    }

    /// Normalised depth into the PML along `axis`, in `[0, 1]`; zero inside the domain.
    pub fn depth(&self, u: f64, axis: usize) -> f64 {
        let mut depth: f64 = 0.0;
        if let Some(l) = self.lower[axis] {
            if u < l.interface {
                depth = depth.max((l.interface - u) / l.thickness);
            }
        }
        if let Some(l) = self.upper[axis] {
            if u > l.interface {
                depth = depth.max((u - l.interface) / l.thickness);
            }
        }
        depth.min(1.0)
    }

    /// True if `x` lies strictly inside any layer.
    pub fn contains(&self, x: [f64; 3]) -> bool {
        (0..3).any(|d| self.depth(x[d], d) > 0.0)
    }
}

/// Conductivity (S/m) and real stretch at coordinate `u` along `axis`.
pub fn eval_profile(profile: &StretchProfile, u: f64, axis: usize) -> (f64, f64) {
    let depth = profile.depth(u, axis);
    if depth == 0.0 {
        return (0.0, 1.0);
    }
    let ramp = depth.powf(profile.order);
    (profile.sigma_max * ramp, 1.0 + (profile.kappa_max - 1.0) * ramp)
}

/// The five diagonal tensors of the auxiliary-variable update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorCoefficients {
    pub a: [f64; 3],
    /// 1/s
    pub b: [f64; 3],
    /// 1/s^2
    pub c: [f64; 3],
    /// 1/s
    pub d: [f64; 3],
    pub inv_kappa: [f64; 3],
}

pub fn tensor_coefficients(sigma: [f64; 3], kappa: [f64; 3]) -> TensorCoefficients {
    let mut t = TensorCoefficients {
        a: [0.0; 3],
        b: [0.0; 3],
        c: [0.0; 3],
        d: [0.0; 3],
        inv_kappa: [0.0; 3],
    };
    for u in 0..3 {
        let v = (u + 1) % 3;
        let w = (u + 2) % 3;
        let a = kappa[v] * kappa[w] / kappa[u];
        let b = (sigma[v] * kappa[w] + sigma[w] * kappa[v] - a * sigma[u]) / (kappa[u] * EPS0);
        t.a[u] = a;
        t.b[u] = b;
        t.c[u] = sigma[v] * sigma[w] / (EPS0 * EPS0) - b * sigma[u] / EPS0;
        t.d[u] = sigma[u] / (kappa[u] * EPS0);
        t.inv_kappa[u] = 1.0 / kappa[u];
    }
    t
}

/// How coefficients are sampled inside an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingStrategy {
    /// One value per element and axis, taken at the node deepest in the PML.
    ElementConstantFarthestNode,
    /// One value per mesh layer, taken on the layer's outer lattice plane.
    LayeredOutermost,
    /// Pointwise evaluation at every sample location.
    SmoothlyVarying,
}

/// Where coefficient samples are placed in each element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleLocations {
    Nodes,
    QuadPoints,
}

/// Index of coefficient `alpha` in the per-component sample blocks.
pub const COEF_A: usize = 0;
pub const COEF_B: usize = 1;
pub const COEF_C: usize = 2;
pub const COEF_D: usize = 3;
pub const COEF_INV_KAPPA: usize = 4;

/// Sampled coefficients on the PML elements of a mesh.
///
/// Layout: `[pml element][component u][coefficient a, b, c, d, 1/kappa][sample]`.
#[derive(Debug, Clone)]
pub struct PmlCoefficients {
    pub strategy: SamplingStrategy,
    pub locations: SampleLocations,
    pub n_samples: usize,
    /// Mesh index of each PML element, ascending.
    pub elements: Vec<usize>,
    pub data: Vec<f64>,
}

impl PmlCoefficients {
    /// Samples of coefficient `alpha` for component `u` of the `i`-th PML element.
    pub fn samples(&self, i: usize, u: usize, alpha: usize) -> &[f64] {
        let n = self.n_samples;
        let start = ((i * 3 + u) * 5 + alpha) * n;
        &self.data[start..start + n]
    }

    /// All 15 blocks of the `i`-th PML element.
    pub fn element_block(&self, i: usize) -> &[f64] {
        let len = 15 * self.n_samples;
        &self.data[i * len..(i + 1) * len]
    }

    /// True if every coefficient block is constant across the element's samples.
    pub fn is_element_constant(&self, i: usize) -> bool {
        self.element_block(i)
            .chunks(self.n_samples)
            .all(|c| c.iter().all(|&x| x == c[0]))
    }
}

/// Tag every element with a vertex strictly inside a layer as PML.
pub fn tag_pml_region(mesh: &mut Mesh, profile: &StretchProfile) {
    for k in 0..mesh.n_elements() {
        let inside = mesh.element_vertices(k).iter().any(|&v| profile.contains(v));
        mesh.region_tags[k] = if inside { RegionTag::Pml } else { RegionTag::Interior };
    }
}

/// Sample locations of element `k` in physical coordinates.
fn physical_locations(mesh: &Mesh, ops: &ReferenceOperators, k: usize, locations: SampleLocations) -> Vec<[f64; 3]> {
    let v = mesh.element_vertices(k);
    let reference = match locations {
        SampleLocations::Nodes => &ops.nodes,
        SampleLocations::QuadPoints => &ops.quad.points,
    };
    reference.iter().map(|&r| map_to_physical(&v, r)).collect()
}

/// Lattice slab `[lo, hi]` along `axis` that contains `x`.
fn layer_bounds(mesh: &Mesh, axis: usize, x: f64) -> Result<(f64, f64)> {
    let planes = &mesh.lattice[axis];
    let i = planes.partition_point(|&p| p <= x);
    if i == 0 || i >= planes.len() {
        return Err(Error::Geometry(format!("coordinate {x} lies outside the lattice along axis {axis}")));
    }
    Ok((planes[i - 1], planes[i]))
}

/// Coefficient samples of one element as `[u][alpha][sample]`.
pub fn sample_element(
    mesh: &Mesh,
    profile: &StretchProfile,
    strategy: SamplingStrategy,
    locations: SampleLocations,
    ops: &ReferenceOperators,
    k: usize,
) -> Result<Vec<f64>> {
    let points = physical_locations(mesh, ops, k, locations);
    let n = points.len();
    // (sigma, kappa) per axis per sample.
    let mut sk: Vec<[(f64, f64); 3]> = Vec::with_capacity(n);
    match strategy {
        SamplingStrategy::SmoothlyVarying => {
            for p in &points {
                sk.push(std::array::from_fn(|d| eval_profile(profile, p[d], d)));
            }
        }
        SamplingStrategy::ElementConstantFarthestNode => {
            let nodes = physical_locations(mesh, ops, k, SampleLocations::Nodes);
            let per_axis: [(f64, f64); 3] = std::array::from_fn(|d| {
                let deepest = nodes
                    .iter()
                    .max_by(|a, b| profile.depth(a[d], d).total_cmp(&profile.depth(b[d], d)))
                    .expect("elements have nodes");
                eval_profile(profile, deepest[d], d)
            });
            sk.resize(n, per_axis);
        }
        SamplingStrategy::LayeredOutermost => {
            if mesh.style != MeshStyle::Layered {
                return Err(Error::Config(
                    "layered-outermost sampling requires a layered mesh".into(),
                ));
            }
            let c = mesh.centroid(k);
            let mut per_axis = [(0.0, 1.0); 3];
            for (d, slot) in per_axis.iter_mut().enumerate() {
                let (lo, hi) = layer_bounds(mesh, d, c[d])?;
                let outer = if profile.depth(lo, d) > profile.depth(hi, d) { lo } else { hi };
                *slot = eval_profile(profile, outer, d);
            }
            sk.resize(n, per_axis);
        }
    }
    let mut out = vec![0.0; 15 * n];
    for (q, s) in sk.iter().enumerate() {
        let t = tensor_coefficients(s.map(|x| x.0), s.map(|x| x.1));
        for u in 0..3 {
            let vals = [t.a[u], t.b[u], t.c[u], t.d[u], t.inv_kappa[u]];
            for (alpha, val) in vals.into_iter().enumerate() {
                out[(u * 5 + alpha) * n + q] = val;
            }
        }
    }
    Ok(out)
}

/// Sample coefficients on every PML-tagged element.
pub fn sample_coefficients(
    mesh: &Mesh,
    profile: &StretchProfile,
    strategy: SamplingStrategy,
    locations: SampleLocations,
    ops: &ReferenceOperators,
) -> Result<PmlCoefficients> {
    profile.validate()?;
    if strategy == SamplingStrategy::LayeredOutermost && mesh.style != MeshStyle::Layered {
        return Err(Error::Config("layered-outermost sampling requires a layered mesh".into()));
    }
    let elements = mesh.pml_elements();
    let n_samples = match locations {
        SampleLocations::Nodes => ops.n_nodes,
        SampleLocations::QuadPoints => ops.n_quad(),
    };
    let mut data = Vec::with_capacity(elements.len() * 15 * n_samples);
    for &k in &elements {
        data.extend(sample_element(mesh, profile, strategy, locations, ops, k)?);
    }
    Ok(PmlCoefficients {
        strategy,
        locations,
        n_samples,
        elements,
        data,
    })
}

/// Check the well-posedness conditions `a > 0` and `kappa >= 1` on a sample block.
pub(crate) fn check_samples(block: &[f64], n: usize, element: usize) -> Result<()> {
    for u in 0..3 {
        let a = &block[(u * 5 + COEF_A) * n..(u * 5 + COEF_A + 1) * n];
        let ik = &block[(u * 5 + COEF_INV_KAPPA) * n..(u * 5 + COEF_INV_KAPPA + 1) * n];
        if let Some(x) = a.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::Coefficient(format!("a = {x} on element {element}, component {u}; must be positive")));
        }
        if let Some(x) = ik.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
            return Err(Error::Coefficient(format!(
                "1/kappa = {x} on element {element}, component {u}; kappa must be at least 1"
            )));
        }
    }
    Ok(())
}
