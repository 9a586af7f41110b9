//! Semi-discrete DG Maxwell operator with PML, plane-wave injection and
//! low-storage Runge–Kutta time stepping.
//!
//! Field storage is element-major: `[element][Ex, Ey, Ez, Hx, Hy, Hz][node]`,
//! so the nodal values of all elements form one `N_p x 6K` column-major
//! matrix and the volume derivatives and surface lift are single products.
//! Auxiliary variables live only on PML elements, laid out as
//! `[pml element][PEx, PEy, PEz, PHx, PHy, PHz][node]`.

mod dense;
mod faces;
mod source;

use serde::{Deserialize, Serialize};

pub use source::GaussianPulse;

use crate::error::{Error, Result};
use crate::mesh::{geometric_factors, map_to_reference, GeometricFactors, Mesh, RegionTag};
use crate::pml::{
    check_samples, sample_coefficients, DirectPmlOperators, PmlCoefficients, SampleLocations, SamplingStrategy,
    StretchProfile, WaaPmlOperators, COEF_A, COEF_B, COEF_C, COEF_D, COEF_INV_KAPPA, EPS0, MU0,
};
use crate::reference_element::ReferenceOperators;
use dense::{gemm, matvec_acc};
use faces::{build_face_maps, FaceKind, FaceMaps};

/// Numerical flux on element faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FluxKind {
    Upwind,
    Central,
}

impl FluxKind {
    fn penalty(self) -> f64 {
        match self {
            FluxKind::Upwind => 1.0,
            FluxKind::Central => 0.0,
        }
    }
}

/// How the PML update is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PmlPath {
    /// One scalar coefficient set per element and component.
    #[serde(alias = "ec")]
    ElementConstant,
    /// Dense per-element matrices.
    Direct,
    /// Matrix-free weight-adjusted products.
    Waa,
}

/// Relative material parameters, one value per element.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Material {
    #[default]
    Vacuum,
    PerElement { eps_r: Vec<f64>, mu_r: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub flux: FluxKind,
    /// Courant factor in `dt = cfl * min r_in / (c p^2)`.
    pub cfl: f64,
    pub pml_path: PmlPath,
    pub material: Material,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            flux: FluxKind::Upwind,
            cfl: 0.5,
            pml_path: PmlPath::Waa,
            material: Material::Vacuum,
        }
    }
}

/// Scalar PML coefficients `[component][a, b, c, d, 1/kappa]` per element.
#[derive(Debug, Clone)]
pub struct ElementConstantPml {
    pub elements: Vec<usize>,
    pub coefficients: Vec<[[f64; 5]; 3]>,
}

impl ElementConstantPml {
    pub fn build(coeffs: &PmlCoefficients) -> Result<Self> {
        let n = coeffs.n_samples;
        let mut coefficients = Vec::with_capacity(coeffs.elements.len());
        for (i, &k) in coeffs.elements.iter().enumerate() {
            check_samples(coeffs.element_block(i), n, k)?;
            if !coeffs.is_element_constant(i) {
                return Err(Error::Config(format!(
                    "element-constant PML path needs constant coefficients, element {k} varies"
                )));
            }
            coefficients.push(std::array::from_fn(|u| std::array::from_fn(|alpha| coeffs.samples(i, u, alpha)[0])));
        }
        Ok(Self {
            elements: coeffs.elements.clone(),
            coefficients,
        })
    }
}

/// PML operators in the representation used by one of the update paths.
#[derive(Debug, Clone)]
pub enum PmlOperators {
    ElementConstant(ElementConstantPml),
    Direct(DirectPmlOperators),
    Waa(WaaPmlOperators),
}

impl PmlOperators {
    /// Sample `profile` on the PML-tagged elements of `mesh` and build the
    /// operators for `path`.
    pub fn from_profile(
        path: PmlPath,
        mesh: &Mesh,
        ops: &ReferenceOperators,
        profile: &StretchProfile,
        strategy: SamplingStrategy,
    ) -> Result<Self> {
        match path {
            PmlPath::ElementConstant => {
                if strategy == SamplingStrategy::SmoothlyVarying {
                    return Err(Error::Config(
                        "smoothly varying coefficients need the direct or weight-adjusted path".into(),
                    ));
                }
                let c = sample_coefficients(mesh, profile, strategy, SampleLocations::Nodes, ops)?;
                Ok(Self::ElementConstant(ElementConstantPml::build(&c)?))
            }
            PmlPath::Direct => {
                let c = sample_coefficients(mesh, profile, strategy, SampleLocations::Nodes, ops)?;
                let geom = geometric_factors(mesh, ops)?;
                Ok(Self::Direct(DirectPmlOperators::build(&c, &geom.jacobian, ops)?))
            }
            PmlPath::Waa => {
                let c = sample_coefficients(mesh, profile, strategy, SampleLocations::QuadPoints, ops)?;
                Ok(Self::Waa(WaaPmlOperators::build(&c, ops)?))
            }
        }
    }

    pub fn path(&self) -> PmlPath {
        match self {
            Self::ElementConstant(_) => PmlPath::ElementConstant,
            Self::Direct(_) => PmlPath::Direct,
            Self::Waa(_) => PmlPath::Waa,
        }
    }

    pub fn elements(&self) -> &[usize] {
        match self {
            Self::ElementConstant(p) => &p.elements,
            Self::Direct(p) => &p.elements,
            Self::Waa(p) => &p.elements,
        }
    }

    /// Floats stored per element-specific PML data (excluding shared operators).
    pub fn stored_floats(&self) -> usize {
        match self {
            Self::ElementConstant(p) => 15 * p.coefficients.len(),
            Self::Direct(p) => p.stored_floats(),
            Self::Waa(p) => p.stored_floats(),
        }
    }
}

/// Nodal unknowns at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub n_nodes: usize,
    /// `[element][Ex, Ey, Ez, Hx, Hy, Hz][node]`.
    pub fields: Vec<f64>,
    /// `[pml element][PEx, PEy, PEz, PHx, PHy, PHz][node]`.
    pub aux: Vec<f64>,
    pub time: f64,
}

impl FieldState {
    /// Nodal values of component `c` (0..3 = E, 3..6 = H) on element `k`.
    pub fn component(&self, k: usize, c: usize) -> &[f64] {
        let np = self.n_nodes;
        &self.fields[(k * 6 + c) * np..(k * 6 + c + 1) * np]
    }

    pub fn component_mut(&mut self, k: usize, c: usize) -> &mut [f64] {
        let np = self.n_nodes;
        &mut self.fields[(k * 6 + c) * np..(k * 6 + c + 1) * np]
    }

    /// Auxiliary component `c` (0..3 = P_E, 3..6 = P_H) of the `i`-th PML element.
    pub fn aux_component(&self, i: usize, c: usize) -> &[f64] {
        let np = self.n_nodes;
        &self.aux[(i * 6 + c) * np..(i * 6 + c + 1) * np]
    }

    pub fn max_abs(&self) -> f64 {
        self.fields.iter().chain(&self.aux).fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Point at which nodal fields are interpolated.
#[derive(Debug, Clone)]
pub struct Probe {
    pub point: [f64; 3],
    pub element: usize,
    basis: Vec<f64>,
}

/// Carpenter–Kennedy five-stage fourth-order low-storage coefficients.
const RK_A: [f64; 5] = [
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
];
const RK_B: [f64; 5] = [
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
];
const RK_C: [f64; 5] = [
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363266929.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
];

#[derive(Debug, Clone, Default)]
struct Work {
    deriv: Vec<f64>,
    flux: Vec<f64>,
    curl: Vec<f64>,
    rhs: Vec<f64>,
    rhs_aux: Vec<f64>,
    res: Vec<f64>,
    res_aux: Vec<f64>,
    /// Weight-adjusted path scratch: nodal and quadrature-point blocks.
    nodal_a: Vec<f64>,
    nodal_b: Vec<f64>,
    quad_a: Vec<f64>,
    quad_b: Vec<f64>,
    /// Direct path scratch.
    tmp: Vec<f64>,
}

/// Immutable discretization data.
#[derive(Debug, Clone)]
struct Discretization {
    mesh: Mesh,
    ops: ReferenceOperators,
    geom: GeometricFactors,
    config: SolverConfig,
    faces: FaceMaps,
    /// Per face: normal, `F_scale`, then the flux weights
    /// `Y+/(Y- + Y+)`, `alpha/(Y- + Y+)`, `Z+/(Z- + Z+)`, `alpha/(Z- + Z+)`.
    face_coef: Vec<[f64; 8]>,
    /// Per face node: offset of the exterior node's `E_x` in the field vector.
    gather: Vec<u32>,
    eps: Vec<f64>,
    mu: Vec<f64>,
    pml: Option<PmlOperators>,
    /// PML slot of each mesh element, `usize::MAX` outside the PML.
    pml_index: Vec<usize>,
    source: Option<GaussianPulse>,
}

/// DG Maxwell solver on a fixed mesh.
#[derive(Debug, Clone)]
pub struct Solver {
    d: Discretization,
    work: Work,
}

impl Solver {
    pub fn new(
        mesh: Mesh,
        ops: ReferenceOperators,
        config: SolverConfig,
        pml: Option<PmlOperators>,
        source: Option<GaussianPulse>,
    ) -> Result<Self> {
        if !(config.cfl > 0.0) {
            return Err(Error::Config(format!("cfl must be positive, got {}", config.cfl)));
        }
        let k_total = mesh.n_elements();
        let (eps, mu) = match &config.material {
            Material::Vacuum => (vec![EPS0; k_total], vec![MU0; k_total]),
            Material::PerElement { eps_r, mu_r } => {
                if eps_r.len() != k_total || mu_r.len() != k_total {
                    return Err(Error::Contract(format!(
                        "material arrays have {} / {} entries for {k_total} elements",
                        eps_r.len(),
                        mu_r.len()
                    )));
                }
                if eps_r.iter().chain(mu_r).any(|&v| !(v > 0.0)) {
                    return Err(Error::Config("relative permittivity and permeability must be positive".into()));
                }
                (eps_r.iter().map(|e| e * EPS0).collect(), mu_r.iter().map(|m| m * MU0).collect())
            }
        };
        let geom = geometric_factors(&mesh, &ops)?;
        let faces = build_face_maps(&mesh, &ops, &geom)?;

        let tagged = mesh.pml_elements();
        let mut pml_index = vec![usize::MAX; k_total];
        match &pml {
            Some(p) => {
                if p.path() != config.pml_path {
                    return Err(Error::Contract(format!(
                        "PML operators are built for {:?} but the configuration selects {:?}",
                        p.path(),
                        config.pml_path
                    )));
                }
                if p.elements() != tagged.as_slice() {
                    return Err(Error::Contract("PML operators do not cover the PML-tagged elements".into()));
                }
                let expected_len = match p {
                    PmlOperators::ElementConstant(_) => None,
                    PmlOperators::Direct(o) => Some((o.data.len(), 15 * ops.n_nodes * ops.n_nodes)),
                    PmlOperators::Waa(o) => Some((o.samples.len(), 15 * ops.n_quad())),
                };
                if let Some((len, per)) = expected_len {
                    if len != per * tagged.len() {
                        return Err(Error::Contract("PML operators were built for a different order".into()));
                    }
                }
            }
            None if !tagged.is_empty() => {
                return Err(Error::Contract(format!(
                    "{} elements are tagged PML but no PML operators were supplied",
                    tagged.len()
                )))
            }
            None => {}
        }
        for (i, &k) in tagged.iter().enumerate() {
            pml_index[k] = i;
        }

        let np = ops.n_nodes;
        let nfp = ops.n_face_nodes;
        let alpha = config.flux.penalty();
        let mut face_coef = Vec::with_capacity(4 * k_total);
        let mut gather = Vec::with_capacity(4 * nfp * k_total);
        for k in 0..k_total {
            let z_in = (mu[k] / eps[k]).sqrt();
            for f in 0..4 {
                let k2 = faces.neighbor[k][f];
                let z_out = (mu[k2] / eps[k2]).sqrt();
                let (y_in, y_out) = (1.0 / z_in, 1.0 / z_out);
                let n = geom.face_normals[k][f];
                face_coef.push([
                    n[0],
                    n[1],
                    n[2],
                    geom.face_scale[k][f],
                    y_out / (y_in + y_out),
                    alpha / (y_in + y_out),
                    z_out / (z_in + z_out),
                    alpha / (z_in + z_out),
                ]);
                for j in 0..nfp {
                    let n_ext = faces.exterior_node[(k * 4 + f) * nfp + j] as usize;
                    gather.push(u32::try_from(k2 * 6 * np + n_ext).map_err(|_| {
                        Error::Contract("mesh too large for 32-bit node offsets".into())
                    })?);
                }
            }
        }
        let d = Discretization {
            mesh,
            ops,
            geom,
            config,
            faces,
            face_coef,
            gather,
            eps,
            mu,
            pml,
            pml_index,
            source,
        };
        let kp = tagged.len();
        let nq = d.ops.n_quad();
        let waa = matches!(d.pml, Some(PmlOperators::Waa(_)));
        let work = Work {
            deriv: vec![0.0; 3 * np * 6 * k_total],
            flux: vec![0.0; 4 * nfp * 6 * k_total],
            curl: vec![0.0; np * 6 * k_total],
            rhs: vec![0.0; np * 6 * k_total],
            rhs_aux: vec![0.0; np * 6 * kp],
            res: vec![0.0; np * 6 * k_total],
            res_aux: vec![0.0; np * 6 * kp],
            nodal_a: vec![0.0; if waa { np * 12 * kp } else { 0 }],
            nodal_b: vec![0.0; if waa { np * 12 * kp } else { 0 }],
            quad_a: vec![0.0; if waa { nq * 12 * kp } else { 0 }],
            quad_b: vec![0.0; if waa { nq * 12 * kp } else { 0 }],
            tmp: vec![0.0; 2 * np],
        };
        Ok(Self { d, work })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.d.mesh
    }

    pub fn operators(&self) -> &ReferenceOperators {
        &self.d.ops
    }

    pub fn geometry(&self) -> &GeometricFactors {
        &self.d.geom
    }

    pub fn config(&self) -> &SolverConfig {
        &self.d.config
    }

    pub fn pml(&self) -> Option<&PmlOperators> {
        self.d.pml.as_ref()
    }

    pub fn source(&self) -> Option<&GaussianPulse> {
        self.d.source.as_ref()
    }

    /// Height of the injection plane, if the mesh has one.
    pub fn injection_z(&self) -> Option<f64> {
        self.d.faces.injection_z
    }

    pub fn n_pml_elements(&self) -> usize {
        self.d.pml.as_ref().map_or(0, |p| p.elements().len())
    }

    /// Zero fields at `t = 0`.
    pub fn zero_state(&self) -> FieldState {
        let np = self.d.ops.n_nodes;
        FieldState {
            n_nodes: np,
            fields: vec![0.0; np * 6 * self.d.mesh.n_elements()],
            aux: vec![0.0; np * 6 * self.n_pml_elements()],
            time: 0.0,
        }
    }

    /// State with `(E, H) = f(x)` at every node; auxiliary variables zero.
    pub fn interpolate<F>(&self, time: f64, f: F) -> FieldState
    where
        F: Fn([f64; 3]) -> [f64; 6],
    {
        let mut s = self.zero_state();
        s.time = time;
        let np = self.d.ops.n_nodes;
        for k in 0..self.d.mesh.n_elements() {
            for (n, &x) in self.d.geom.node_coords[k].iter().enumerate() {
                let v = f(x);
                for c in 0..6 {
                    s.fields[(k * 6 + c) * np + n] = v[c];
                }
            }
        }
        s
    }

    /// Total-field initial state at time `t`: the incident wave on every
    /// non-PML element above the injection plane, zero elsewhere.
    pub fn incident_state(&self, t: f64) -> Result<FieldState> {
        let (Some(src), Some(z0)) = (self.d.source, self.d.faces.injection_z) else {
            return Err(Error::Config("an incident state needs a source and an injection plane".into()));
        };
        let mut s = self.zero_state();
        s.time = t;
        let np = self.d.ops.n_nodes;
        for k in 0..self.d.mesh.n_elements() {
            if self.d.mesh.region_tags[k] == RegionTag::Pml || self.d.mesh.centroid(k)[2] < z0 {
                continue;
            }
            for (n, x) in self.d.geom.node_coords[k].iter().enumerate() {
                let (e, h) = src.incident(x[2], t);
                for c in 0..3 {
                    s.fields[(k * 6 + c) * np + n] = e[c];
                    s.fields[(k * 6 + 3 + c) * np + n] = h[c];
                }
            }
        }
        Ok(s)
    }

    /// Largest stable-by-rule time step: `cfl * min r_in / (c_max p^2)`.
    pub fn time_step(&self) -> f64 {
        let r_min = self.d.geom.inradius.iter().copied().fold(f64::INFINITY, f64::min);
        let c_max = self
            .d
            .eps
            .iter()
            .zip(&self.d.mu)
            .map(|(e, m)| 1.0 / (e * m).sqrt())
            .fold(0.0, f64::max);
        let p = self.d.ops.order.max(1) as f64;
        self.d.config.cfl * r_min / (c_max * p * p)
    }

    /// Discrete electromagnetic energy on the non-PML elements (J).
    pub fn energy(&self, state: &FieldState) -> f64 {
        let np = self.d.ops.n_nodes;
        let mass = self.d.ops.mass.as_slice();
        let mut total = 0.0;
        let mut mx = vec![0.0; np];
        for k in 0..self.d.mesh.n_elements() {
            if self.d.pml_index[k] != usize::MAX {
                continue;
            }
            let mut e_part = 0.0;
            let mut h_part = 0.0;
            for c in 0..6 {
                let x = state.component(k, c);
                mx.iter_mut().for_each(|v| *v = 0.0);
                matvec_acc(mass, np, x, 1.0, &mut mx);
                let q: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum();
                if c < 3 {
                    e_part += q;
                } else {
                    h_part += q;
                }
            }
            total += 0.5 * self.d.geom.jacobian[k] * (self.d.eps[k] * e_part + self.d.mu[k] * h_part);
        }
        total
    }

    /// Locate `point` and prepare interpolation weights.
    pub fn probe(&self, point: [f64; 3]) -> Result<Probe> {
        let tol = 1e-10;
        for k in 0..self.d.mesh.n_elements() {
            let v = self.d.mesh.element_vertices(k);
            let rst = map_to_reference(&v, &self.d.geom.inv_map[k], point);
            let inside = rst.iter().all(|&r| r >= -1.0 - tol) && rst[0] + rst[1] + rst[2] <= -1.0 + tol;
            if inside {
                let row = self.d.ops.lagrange_at(&[rst]);
                return Ok(Probe {
                    point,
                    element: k,
                    basis: row.iter().copied().collect(),
                });
            }
        }
        Err(Error::Geometry(format!(
            "probe point ({}, {}, {}) lies outside the mesh",
            point[0], point[1], point[2]
        )))
    }

    /// `(Ex, Ey, Ez, Hx, Hy, Hz)` at a probe.
    pub fn sample(&self, state: &FieldState, probe: &Probe) -> [f64; 6] {
        std::array::from_fn(|c| {
            state
                .component(probe.element, c)
                .iter()
                .zip(&probe.basis)
                .map(|(u, l)| u * l)
                .sum()
        })
    }

    /// Strong-form curls `[element][curl E (3), curl H (3)][node]`, flux included.
    pub fn curl(&mut self, state: &FieldState) -> Vec<f64> {
        self.d.curl_into(&state.fields, state.time, &mut self.work);
        self.work.curl.clone()
    }

    /// Time derivative of `state`, packaged with the same layout.
    pub fn rhs(&mut self, state: &FieldState) -> FieldState {
        self.d.rhs_into(&state.fields, &state.aux, state.time, &mut self.work);
        FieldState {
            n_nodes: state.n_nodes,
            fields: self.work.rhs.clone(),
            aux: self.work.rhs_aux.clone(),
            time: state.time,
        }
    }

    /// One low-storage Runge–Kutta step.
    pub fn step(&mut self, state: &mut FieldState, dt: f64) -> Result<()> {
        let t = state.time;
        let w = &mut self.work;
        for s in 0..5 {
            self.d.rhs_into(&state.fields, &state.aux, t + RK_C[s] * dt, w);
            for ((r, q), &f) in w.res.iter_mut().zip(state.fields.iter_mut()).zip(&w.rhs) {
                *r = RK_A[s] * *r + dt * f;
                *q += RK_B[s] * *r;
            }
            for ((r, q), &f) in w.res_aux.iter_mut().zip(state.aux.iter_mut()).zip(&w.rhs_aux) {
                *r = RK_A[s] * *r + dt * f;
                *q += RK_B[s] * *r;
            }
        }
        state.time = t + dt;
        self.check_finite(state)
    }

    fn check_finite(&self, state: &FieldState) -> Result<()> {
        let block = 6 * state.n_nodes;
        if let Some(pos) = state.fields.iter().position(|v| !v.is_finite()) {
            return Err(Error::Instability {
                time: state.time,
                element: pos / block,
            });
        }
        if let Some(pos) = state.aux.iter().position(|v| !v.is_finite()) {
            let element = self.d.pml.as_ref().map_or(0, |p| p.elements()[pos / block]);
            return Err(Error::Instability {
                time: state.time,
                element,
            });
        }
        Ok(())
    }
}

impl Discretization {
    /// Volume curls plus lifted surface fluxes into `work.curl`.
    fn curl_into(&self, q: &[f64], t: f64, w: &mut Work) {
        let np = self.ops.n_nodes;
        let nfp = self.ops.n_face_nodes;
        let k_total = self.mesh.n_elements();
        let cols = 6 * k_total;

        // [Dr; Ds; Dt] applied to every component of every element.
        gemm(3 * np, np, cols, 1.0, self.ops.diff_stacked.as_slice(), q, 0.0, &mut w.deriv);

        for ((inv, deriv), curl) in self
            .geom
            .inv_map
            .iter()
            .zip(w.deriv.chunks_exact(18 * np))
            .zip(w.curl.chunks_exact_mut(6 * np))
        {
            for (d, out) in deriv.chunks_exact(9 * np).zip(curl.chunks_exact_mut(3 * np)) {
                // d = [f_x; f_y; f_z], each [d/dr; d/ds; d/dt].
                let blk = |c: usize, r: usize| &d[(3 * c + r) * np..(3 * c + r + 1) * np];
                let (xr, xs, xt) = (blk(0, 0), blk(0, 1), blk(0, 2));
                let (yr, ys, yt) = (blk(1, 0), blk(1, 1), blk(1, 2));
                let (zr, zs, zt) = (blk(2, 0), blk(2, 1), blk(2, 2));
                let (ox, rest) = out.split_at_mut(np);
                let (oy, oz) = rest.split_at_mut(np);
                let [r, s, t] = inv;
                for n in 0..np {
                    let dy_z = r[1] * zr[n] + s[1] * zs[n] + t[1] * zt[n];
                    let dz_y = r[2] * yr[n] + s[2] * ys[n] + t[2] * yt[n];
                    let dz_x = r[2] * xr[n] + s[2] * xs[n] + t[2] * xt[n];
                    let dx_z = r[0] * zr[n] + s[0] * zs[n] + t[0] * zt[n];
                    let dx_y = r[0] * yr[n] + s[0] * ys[n] + t[0] * yt[n];
                    let dy_x = r[1] * xr[n] + s[1] * xs[n] + t[1] * xt[n];
                    ox[n] = dy_z - dz_y;
                    oy[n] = dz_x - dx_z;
                    oz[n] = dx_y - dy_x;
                }
            }
        }

        self.surface_flux(q, t, &mut w.flux);
        gemm(np, 4 * nfp, cols, -1.0, self.ops.lift.as_slice(), &w.flux, 1.0, &mut w.curl);
    }

    /// Scaled flux terms `F_scale * n x (u^- - u^*)` for both curls, laid out
    /// as `[element][curl E (3), curl H (3)][face][face node]`.
    fn surface_flux(&self, q: &[f64], t: f64, flux: &mut [f64]) {
        let np = self.ops.n_nodes;
        let nfp = self.ops.n_face_nodes;
        let stride = 4 * nfp;
        for (k, fl) in flux.chunks_exact_mut(6 * stride).enumerate() {
            let own = &q[k * 6 * np..(k + 1) * 6 * np];
            for f in 0..4 {
                let [nx, ny, nz, fs, ce, pe, ch, ph] = self.face_coef[k * 4 + f];
                let n = [nx, ny, nz];
                let kind = self.faces.kind[k][f];
                let incident = match (kind, self.source) {
                    (FaceKind::Injection { jump_sign }, Some(src)) => Some((jump_sign, src)),
                    _ => None,
                };
                let gather = &self.gather[(k * 4 + f) * nfp..(k * 4 + f + 1) * nfp];
                for (j, (&n_local, &g)) in self.ops.face_nodes[f].iter().zip(gather).enumerate() {
                    let g = g as usize;
                    let mut de = [0.0; 3];
                    let mut dh = [0.0; 3];
                    if kind == FaceKind::Pec {
                        for c in 0..3 {
                            de[c] = 2.0 * own[c * np + n_local];
                        }
                    } else {
                        for c in 0..3 {
                            de[c] = own[c * np + n_local] - q[g + c * np];
                            dh[c] = own[(3 + c) * np + n_local] - q[g + (3 + c) * np];
                        }
                    }
                    if let Some((sign, src)) = incident {
                        let (ei, hi) = src.incident(self.geom.node_coords[k][n_local][2], t);
                        for c in 0..3 {
                            de[c] += sign * ei[c];
                            dh[c] += sign * hi[c];
                        }
                    }
                    let n_x_de = cross(n, de);
                    let n_x_dh = cross(n, dh);
                    // n x (E^- - E^*) = n x (Y+ [E] + alpha n x [H]) / (Y- + Y+)
                    let fe = cross(n, std::array::from_fn(|c| ce * de[c] + pe * n_x_dh[c]));
                    // n x (H^- - H^*) = n x (Z+ [H] - alpha n x [E]) / (Z- + Z+)
                    let fh = cross(n, std::array::from_fn(|c| ch * dh[c] - ph * n_x_de[c]));
                    let slot = f * nfp + j;
                    for c in 0..3 {
                        fl[c * stride + slot] = fs * fe[c];
                        fl[(3 + c) * stride + slot] = fs * fh[c];
                    }
                }
            }
        }
    }

    fn rhs_into(&self, q: &[f64], aux: &[f64], t: f64, w: &mut Work) {
        self.curl_into(q, t, w);
        let np = self.ops.n_nodes;
        for k in 0..self.mesh.n_elements() {
            if self.pml_index[k] != usize::MAX {
                continue;
            }
            let (ie, im) = (1.0 / self.eps[k], 1.0 / self.mu[k]);
            let base = k * 6 * np;
            for i in 0..3 * np {
                w.rhs[base + i] = ie * w.curl[base + 3 * np + i];
                w.rhs[base + 3 * np + i] = -im * w.curl[base + i];
            }
        }
        match &self.pml {
            None => {}
            Some(PmlOperators::ElementConstant(p)) => self.rhs_pml_element_constant(p, q, aux, w),
            Some(PmlOperators::Direct(p)) => self.rhs_pml_direct(p, q, aux, w),
            Some(PmlOperators::Waa(p)) => self.rhs_pml_waa(p, q, aux, w),
        }
    }

    fn rhs_pml_element_constant(&self, p: &ElementConstantPml, q: &[f64], aux: &[f64], w: &mut Work) {
        let np = self.ops.n_nodes;
        for (i, &k) in p.elements.iter().enumerate() {
            let (ie, im) = (1.0 / self.eps[k], 1.0 / self.mu[k]);
            for u in 0..3 {
                let [a, b, c, d, ik] = p.coefficients[i][u];
                let e = (k * 6 + u) * np;
                let h = (k * 6 + 3 + u) * np;
                let pe = (i * 6 + u) * np;
                let ph = (i * 6 + 3 + u) * np;
                for n in 0..np {
                    w.rhs[h + n] = -(b * q[h + n] + c * aux[ph + n] + im * w.curl[e + n]) / a;
                    w.rhs[e + n] = -(b * q[e + n] + c * aux[pe + n] - ie * w.curl[h + n]) / a;
                    w.rhs_aux[ph + n] = ik * q[h + n] - d * aux[ph + n];
                    w.rhs_aux[pe + n] = ik * q[e + n] - d * aux[pe + n];
                }
            }
        }
    }

    fn rhs_pml_direct(&self, p: &DirectPmlOperators, q: &[f64], aux: &[f64], w: &mut Work) {
        use crate::pml::FusedOperator as Op;
        let np = self.ops.n_nodes;
        let mass = self.ops.mass.as_slice();
        for (i, &k) in p.elements.iter().enumerate() {
            let (ie, im) = (1.0 / self.eps[k], 1.0 / self.mu[k]);
            let jac = self.geom.jacobian[k];
            for u in 0..3 {
                let e = (k * 6 + u) * np;
                let h = (k * 6 + 3 + u) * np;
                let pe = (i * 6 + u) * np;
                let ph = (i * 6 + 3 + u) * np;
                // M_k C: the curl scaled back by the element mass matrix.
                let (mc_e, mc_h) = w.tmp.split_at_mut(np);
                mc_e.iter_mut().for_each(|v| *v = 0.0);
                mc_h.iter_mut().for_each(|v| *v = 0.0);
                matvec_acc(mass, np, &w.curl[h..h + np], jac * ie, mc_e);
                matvec_acc(mass, np, &w.curl[e..e + np], -jac * im, mc_h);

                let (t_a, t_b, t_c) = (p.slice(i, u, Op::InvMassA), p.slice(i, u, Op::B), p.slice(i, u, Op::C));
                let (t_d, t_k) = (p.slice(i, u, Op::D), p.slice(i, u, Op::InvKappa));

                let out_e = &mut w.rhs[e..e + np];
                out_e.iter_mut().for_each(|v| *v = 0.0);
                matvec_acc(t_a, np, mc_e, 1.0, out_e);
                matvec_acc(t_b, np, &q[e..e + np], -1.0, out_e);
                matvec_acc(t_c, np, &aux[pe..pe + np], -1.0, out_e);

                let out_h = &mut w.rhs[h..h + np];
                out_h.iter_mut().for_each(|v| *v = 0.0);
                matvec_acc(t_a, np, mc_h, 1.0, out_h);
                matvec_acc(t_b, np, &q[h..h + np], -1.0, out_h);
                matvec_acc(t_c, np, &aux[ph..ph + np], -1.0, out_h);

                let out_pe = &mut w.rhs_aux[pe..pe + np];
                out_pe.iter_mut().for_each(|v| *v = 0.0);
                matvec_acc(t_k, np, &q[e..e + np], 1.0, out_pe);
                matvec_acc(t_d, np, &aux[pe..pe + np], -1.0, out_pe);

                let out_ph = &mut w.rhs_aux[ph..ph + np];
                out_ph.iter_mut().for_each(|v| *v = 0.0);
                matvec_acc(t_k, np, &q[h..h + np], 1.0, out_ph);
                matvec_acc(t_d, np, &aux[ph..ph + np], -1.0, out_ph);
            }
        }
    }

    /// Batched matrix-free update: every PML element and component goes
    /// through the same four products with `V_q` and `P_q`.
    fn rhs_pml_waa(&self, p: &WaaPmlOperators, q: &[f64], aux: &[f64], w: &mut Work) {
        let np = self.ops.n_nodes;
        let nq = self.ops.n_quad();
        let kp = p.elements.len();
        if kp == 0 {
            return;
        }
        let vq = self.ops.interp_to_quad.as_slice();
        let pq = self.ops.project_from_quad.as_slice();
        let coef = |i: usize, u: usize, slot: usize| {
            let s = ((i * 3 + u) * 5 + slot) * nq;
            &p.samples[s..s + nq]
        };

        // Columns per (element, component): H, P_H, E, P_E.
        for (i, &k) in p.elements.iter().enumerate() {
            for u in 0..3 {
                let col = (i * 3 + u) * 4;
                let sources = [
                    &q[(k * 6 + 3 + u) * np..][..np],
                    &aux[(i * 6 + 3 + u) * np..][..np],
                    &q[(k * 6 + u) * np..][..np],
                    &aux[(i * 6 + u) * np..][..np],
                ];
                for (o, src) in sources.into_iter().enumerate() {
                    w.nodal_a[(col + o) * np..(col + o + 1) * np].copy_from_slice(src);
                }
            }
        }
        gemm(nq, np, 12 * kp, 1.0, vq, &w.nodal_a, 0.0, &mut w.quad_a);

        // Columns: b H + c P_H, b E + c P_E, H/kappa - d P_H, E/kappa - d P_E.
        for i in 0..kp {
            for u in 0..3 {
                let col = (i * 3 + u) * 4;
                let (b, c, d, ik) = (coef(i, u, COEF_B), coef(i, u, COEF_C), coef(i, u, COEF_D), coef(i, u, COEF_INV_KAPPA));
                let y = &w.quad_a[col * nq..(col + 4) * nq];
                let z = &mut w.quad_b[col * nq..(col + 4) * nq];
                for m in 0..nq {
                    let (yh, yph, ye, ype) = (y[m], y[nq + m], y[2 * nq + m], y[3 * nq + m]);
                    z[m] = b[m] * yh + c[m] * yph;
                    z[nq + m] = b[m] * ye + c[m] * ype;
                    z[2 * nq + m] = ik[m] * yh - d[m] * yph;
                    z[3 * nq + m] = ik[m] * ye - d[m] * ype;
                }
            }
        }
        gemm(np, nq, 12 * kp, 1.0, pq, &w.quad_b, 0.0, &mut w.nodal_b);

        // Auxiliary derivatives, and the bracketed terms of the field update
        // packed as two columns (H, E) per (element, component).
        for (i, &k) in p.elements.iter().enumerate() {
            let (ie, im) = (1.0 / self.eps[k], 1.0 / self.mu[k]);
            for u in 0..3 {
                let col = (i * 3 + u) * 4;
                let wb = &w.nodal_b[col * np..(col + 4) * np];
                w.rhs_aux[(i * 6 + 3 + u) * np..][..np].copy_from_slice(&wb[2 * np..3 * np]);
                w.rhs_aux[(i * 6 + u) * np..][..np].copy_from_slice(&wb[3 * np..4 * np]);
                let curl_e = &w.curl[(k * 6 + u) * np..][..np];
                let curl_h = &w.curl[(k * 6 + 3 + u) * np..][..np];
                let pair = (i * 3 + u) * 2;
                for n in 0..np {
                    w.nodal_a[pair * np + n] = wb[n] + im * curl_e[n];
                    w.nodal_a[(pair + 1) * np + n] = wb[np + n] - ie * curl_h[n];
                }
            }
        }
        gemm(nq, np, 6 * kp, 1.0, vq, &w.nodal_a[..6 * kp * np], 0.0, &mut w.quad_a[..6 * kp * nq]);
        for i in 0..kp {
            for u in 0..3 {
                let inv_a = coef(i, u, COEF_A);
                let pair = (i * 3 + u) * 2;
                for o in 0..2 {
                    for (v, ia) in w.quad_a[(pair + o) * nq..(pair + o + 1) * nq].iter_mut().zip(inv_a) {
                        *v *= ia;
                    }
                }
            }
        }
        gemm(np, nq, 6 * kp, -1.0, pq, &w.quad_a[..6 * kp * nq], 0.0, &mut w.nodal_b[..6 * kp * np]);
        for (i, &k) in p.elements.iter().enumerate() {
            for u in 0..3 {
                let pair = (i * 3 + u) * 2;
                w.rhs[(k * 6 + 3 + u) * np..][..np].copy_from_slice(&w.nodal_b[pair * np..(pair + 1) * np]);
                w.rhs[(k * 6 + u) * np..][..np].copy_from_slice(&w.nodal_b[(pair + 1) * np..(pair + 2) * np]);
            }
        }
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}
