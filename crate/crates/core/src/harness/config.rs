//! Experiment configuration for the normal-incidence reflection study.
//!
//! A configuration is a small TOML document with one table per concern:
//!
//! ```toml
//! [geometry]
//! width = [0.012, 0.012]   # transverse box size along x and y (m)
//! interface = 0.1          # PML interfaces at z = -interface and z = +interface (m)
//! pml_thickness = 0.016    # L_z (m)
//! target_edge = 0.004      # lattice spacing (m)
//!
//! [discretization]
//! order = 3
//! flux = "upwind"          # or "central"
//! cfl = 3.0
//! pml_path = "waa"         # "element-constant" (alias "ec"), "direct", "waa"
//! mesh = "paved"           # or "layered"
//!
//! [pml]
//! sigma_max = 2.0
//! sweep = [0.0, 0.5, 1.0]  # sigma_max values scanned by `sweep` and `converge`
//! kappa_max = 1.0
//! grading_order = 1.0      # p_sigma
//! sampling = "smoothly-varying"   # "element-constant-farthest-node", "layered-outermost"
//!
//! [excitation]
//! amplitude = 1.0          # E0 (V/m)
//! tau = 6.667e-11          # s
//! t0 = 1.00005e-9          # s
//!
//! [probes]
//! points = [[0.0013, 0.0021, -0.003]]   # the first point measures the reflection
//!
//! [output]
//! directory = "out"
//! every = 10               # trace CSV row cadence, in time steps
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::mesh::MeshStyle;
use crate::pml::{c0, SamplingStrategy};
use crate::reference_element::MAX_ORDER;
use crate::solver::{FluxKind, GaussianPulse, PmlPath};

/// Relative pulse level that delimits the pulse duration in the separation
/// check and the reflected-window start.
pub const SEPARATION_LEVEL: f64 = 1e-2;

/// Relative level of the incident pulse front allowed to have reached the
/// PML when the run starts from the analytic incident field.
pub const START_LEVEL: f64 = 1e-8;

/// Relative level of the last pulse reflected by the PEC backing at which
/// the run stops.
pub const END_LEVEL: f64 = 1e-1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// Transverse box size along x and y (m); both directions are periodic.
    pub width: [f64; 2],
    /// Distance `|z_0|` of the two PML interfaces from the injection plane (m).
    pub interface: f64,
    /// PML thickness `L_z` (m).
    pub pml_thickness: f64,
    /// Lattice spacing, i.e. the hexahedron edge before subdivision (m).
    pub target_edge: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationConfig {
    pub order: usize,
    pub flux: FluxKind,
    pub cfl: f64,
    pub pml_path: PmlPath,
    pub mesh: MeshStyle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmlConfig {
    /// Conductivity scale of a single run (S/m).
    pub sigma_max: f64,
    /// Values scanned by sweeps (S/m).
    pub sweep: Vec<f64>,
    pub kappa_max: f64,
    /// Grading order `p_sigma` of `sigma(z) = sigma_max ((|z| - z_0) / L)^p_sigma`.
    pub grading_order: f64,
    pub sampling: SamplingStrategy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    /// Probe points (m). The first one measures the reflected pulse.
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    /// Trace rows are written every `every` time steps.
    pub every: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometryConfig,
    pub discretization: DiscretizationConfig,
    pub pml: PmlConfig,
    pub excitation: GaussianPulse,
    pub probes: ProbeConfig,
    pub output: OutputConfig,
}

/// Built-in parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// 1.2 x 1.2 x 60 cm computation domain.
    Paper,
    /// 1.2 x 1.2 x 20 cm computation domain for quick runs.
    Ci,
}

/// The four PML configurations compared in the reflection study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Configuration {
    /// Element-constant coefficients on a mesh that ignores the interface.
    EcPaved,
    /// Element-constant coefficients on layers aligned with the interface.
    EcLayered,
    /// Smoothly varying coefficients, dense per-element operators.
    SvPaved,
    /// Smoothly varying coefficients, weight-adjusted operators.
    SvWaaPaved,
}

impl Configuration {
    pub const ALL: [Configuration; 4] = [Self::EcPaved, Self::EcLayered, Self::SvPaved, Self::SvWaaPaved];

    pub fn label(self) -> &'static str {
        match self {
            Self::EcPaved => "EC-paved",
            Self::EcLayered => "EC-layered",
            Self::SvPaved => "SV-paved",
            Self::SvWaaPaved => "SV-WAA-paved",
        }
    }

    /// Set the update path, mesh style and sampling strategy.
    pub fn apply(self, config: &mut ExperimentConfig) {
        let d = &mut config.discretization;
        let (path, mesh, sampling) = match self {
            Self::EcPaved => (PmlPath::ElementConstant, MeshStyle::Paved, SamplingStrategy::ElementConstantFarthestNode),
            Self::EcLayered => (PmlPath::ElementConstant, MeshStyle::Layered, SamplingStrategy::LayeredOutermost),
            Self::SvPaved => (PmlPath::Direct, MeshStyle::Paved, SamplingStrategy::SmoothlyVarying),
            Self::SvWaaPaved => (PmlPath::Waa, MeshStyle::Paved, SamplingStrategy::SmoothlyVarying),
        };
        d.pml_path = path;
        d.mesh = mesh;
        config.pml.sampling = sampling;
    }
}

/// Sampling strategy that goes with an update path on a mesh style.
pub fn default_sampling(path: PmlPath, mesh: MeshStyle) -> SamplingStrategy {
    match (path, mesh) {
        (PmlPath::ElementConstant, MeshStyle::Paved) => SamplingStrategy::ElementConstantFarthestNode,
        (PmlPath::ElementConstant, MeshStyle::Layered) => SamplingStrategy::LayeredOutermost,
        _ => SamplingStrategy::SmoothlyVarying,
    }
}

/// Start, split and end of a reflection run (s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    /// The run starts from the analytic incident field at this time.
    pub start: f64,
    /// Probe samples after this time belong to the reflected pulse.
    pub split: f64,
    pub end: f64,
}

impl ExperimentConfig {
    pub fn preset(preset: Preset) -> Self {
        let interface = match preset {
            Preset::Paper => 0.30,
            Preset::Ci => 0.10,
        };
        Self {
            geometry: GeometryConfig {
                width: [0.012, 0.012],
                interface,
                pml_thickness: 0.016,
                target_edge: 0.004,
            },
            discretization: DiscretizationConfig {
                order: 3,
                flux: FluxKind::Upwind,
                cfl: 3.0,
                pml_path: PmlPath::Waa,
                mesh: MeshStyle::Paved,
            },
            pml: PmlConfig {
                sigma_max: 2.0,
                sweep: vec![0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0],
                kappa_max: 1.0,
                grading_order: 1.0,
                sampling: SamplingStrategy::SmoothlyVarying,
            },
            excitation: GaussianPulse::standard(),
            probes: ProbeConfig {
                points: vec![[0.0013, 0.0021, -0.003]],
            },
            output: OutputConfig {
                directory: PathBuf::from("out"),
                every: 10,
            },
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(message) => Error::Config(format!("{}: {message}", path.display())),
            other => other,
        })
    }

    /// SHA-256 of the canonical TOML form, in hex.
    pub fn hash(&self) -> String {
        let canonical = self.to_toml().expect("configuration always serializes");
        Sha256::digest(canonical.as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    /// Copy with a different conductivity scale.
    pub fn with_sigma(&self, sigma_max: f64) -> Self {
        let mut c = self.clone();
        c.pml.sigma_max = sigma_max;
        c
    }

    /// Box lower corner and extents, PML included (m).
    pub fn box_bounds(&self) -> ([f64; 3], [f64; 3]) {
        let g = &self.geometry;
        let half = g.interface + g.pml_thickness;
        (
            [-g.width[0] / 2.0, -g.width[1] / 2.0, -half],
            [g.width[0], g.width[1], 2.0 * half],
        )
    }

    /// z-planes the lattice must contain: the injection plane, plus the PML
    /// interfaces on layered meshes.
    pub fn layer_planes(&self) -> Vec<f64> {
        match self.discretization.mesh {
            MeshStyle::Paved => vec![0.0],
            MeshStyle::Layered => vec![-self.geometry.interface, 0.0, self.geometry.interface],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let g = &self.geometry;
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !(g.width.iter().all(|&w| positive(w)) && positive(g.interface) && positive(g.pml_thickness) && positive(g.target_edge)) {
            return bad(format!("geometry lengths must be positive and finite: {g:?}"));
        }
        let layers = g.pml_thickness / g.target_edge;
        if (layers - layers.round()).abs() > 1e-9 * layers.max(1.0) || layers.round() < 1.0 {
            return bad(format!(
                "PML thickness {} is not an integral number of lattice layers of {}",
                g.pml_thickness, g.target_edge
            ));
        }
        let d = &self.discretization;
        if !(1..=MAX_ORDER).contains(&d.order) {
            return bad(format!("order {} outside 1..={MAX_ORDER}", d.order));
        }
        if !positive(d.cfl) {
            return bad(format!("cfl must be positive, got {}", d.cfl));
        }
        let p = &self.pml;
        let sigma_ok = |s: f64| s >= 0.0 && s.is_finite();
        if !sigma_ok(p.sigma_max) || !p.sweep.iter().all(|&s| sigma_ok(s)) {
            return bad("conductivities must be non-negative and finite".into());
        }
        if !(p.kappa_max >= 1.0 && p.kappa_max.is_finite()) {
            return bad(format!("kappa_max must be at least 1, got {}", p.kappa_max));
        }
        if !(p.grading_order >= 0.0 && p.grading_order.is_finite()) {
            return bad(format!("grading order must be non-negative, got {}", p.grading_order));
        }
        match (d.pml_path, p.sampling) {
            (PmlPath::ElementConstant, SamplingStrategy::SmoothlyVarying) => {
                return bad("the element-constant path needs an element-constant sampling strategy".into())
            }
            (_, SamplingStrategy::LayeredOutermost) if d.mesh != MeshStyle::Layered => {
                return bad("layered sampling needs a layered mesh".into())
            }
            _ => {}
        }
        let x = &self.excitation;
        if !(positive(x.amplitude) && positive(x.tau) && x.t0 >= 0.0 && x.t0.is_finite()) {
            return bad(format!("invalid excitation {x:?}"));
        }
        if self.probes.points.is_empty() {
            return bad("at least one probe point is required".into());
        }
        let (lo, ext) = self.box_bounds();
        for pt in &self.probes.points {
            let inside = (0..2).all(|a| pt[a] >= lo[a] && pt[a] <= lo[a] + ext[a]) && pt[2].abs() < g.interface;
            if !inside {
                return bad(format!("probe {pt:?} is outside the computation domain"));
            }
        }
        if self.output.every == 0 {
            return bad("output cadence must be at least one step".into());
        }
        self.time_window().map(|_| ())
    }

    /// Time window of a reflection run.
    ///
    /// Fails if the incident and reflected pulses overlap at the reflection
    /// probe, reporting the shortest interface distance that separates them.
    pub fn time_window(&self) -> Result<TimeWindow> {
        let g = &self.geometry;
        let pulse = &self.excitation;
        let c = c0();
        let zp = self.probes.points[0][2];
        let duration = 2.0 * pulse.half_width(SEPARATION_LEVEL);
        // Incident peak passes the probe at t0 + zp/c; the interface echo
        // returns at t0 + (2 z0 - zp)/c.
        let gap = 2.0 * (g.interface - zp) / c;
        if gap <= duration {
            let needed = duration * c / 2.0 + zp;
            return Err(Error::Config(format!(
                "domain too short: incident and reflected pulses overlap at the probe; \
                 the PML interface must be farther than {needed:.4} m from z = 0 (is {})",
                g.interface
            )));
        }
        let start = pulse.t0 + g.interface / c - pulse.half_width(START_LEVEL);
        let split = pulse.t0 + g.interface / c;
        let end = pulse.t0 + (2.0 * (g.interface + g.pml_thickness) - zp) / c + pulse.half_width(END_LEVEL);
        Ok(TimeWindow { start, split, end })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn presets_are_valid() {
        for p in [Preset::Paper, Preset::Ci] {
            ExperimentConfig::preset(p).validate().unwrap();
        }
    }

    #[test]
    fn paper_preset_parameters() {
        let c = ExperimentConfig::preset(Preset::Paper);
        assert_eq!(c.geometry.interface, 0.30);
        assert_eq!(c.geometry.pml_thickness, 0.016);
        assert_eq!(c.pml.grading_order, 1.0);
        assert_eq!(c.excitation, GaussianPulse::standard());
        let (_, ext) = c.box_bounds();
        assert!((ext[2] - 2.0 * 0.316).abs() < 1e-15);
    }

    #[test]
    fn short_domain_is_rejected_with_required_length() {
        let mut c = ExperimentConfig::preset(Preset::Ci);
        c.geometry.interface = 0.06;
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("farther than"), "{err}");
    }

    #[test]
    fn pml_thickness_must_fit_the_lattice() {
        let mut c = ExperimentConfig::preset(Preset::Ci);
        c.geometry.pml_thickness = 0.015;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn inconsistent_sampling_is_rejected() {
        let mut c = ExperimentConfig::preset(Preset::Ci);
        c.discretization.pml_path = PmlPath::ElementConstant;
        assert!(c.validate().is_err());
        c.pml.sampling = SamplingStrategy::LayeredOutermost;
        assert!(c.validate().is_err());
        c.discretization.mesh = MeshStyle::Layered;
        c.validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut text = ExperimentConfig::preset(Preset::Ci).to_toml().unwrap();
        text.push_str("\n[extra]\nvalue = 1\n");
        assert!(ExperimentConfig::from_toml(&text).is_err());
    }

    #[test]
    fn window_is_ordered_and_starts_quiet() {
        let c = ExperimentConfig::preset(Preset::Ci);
        let w = c.time_window().unwrap();
        assert!(w.start < w.split && w.split < w.end);
        // The incident front is negligible at the PML interface at the start.
        let front = c.excitation.value(w.start - c.geometry.interface / c0());
        assert!(front <= START_LEVEL * (1.0 + 1e-9));
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::preset(Preset::Ci);
        assert_eq!(a.hash(), a.clone().hash());
        assert_eq!(a.hash().len(), 64);
        assert_ne!(a.hash(), a.with_sigma(3.0).hash());
    }

    #[test]
    fn configurations_set_path_mesh_and_sampling() {
        for conf in Configuration::ALL {
            let mut c = ExperimentConfig::preset(Preset::Ci);
            conf.apply(&mut c);
            c.validate().unwrap();
            assert_eq!(c.pml.sampling, default_sampling(c.discretization.pml_path, c.discretization.mesh));
        }
    }

    proptest! {
        #[test]
        fn toml_round_trip_is_lossless(
            sigma in 0.0f64..1e3,
            sweep in proptest::collection::vec(0.0f64..1e3, 0..6),
            tau in 1e-12f64..1e-9,
            cfl in 1e-3f64..10.0,
            order in 1usize..=5,
            probe in (-0.006f64..0.006, -0.006f64..0.006, -0.09f64..0.09),
        ) {
            let mut c = ExperimentConfig::preset(Preset::Ci);
            c.pml.sigma_max = sigma;
            c.pml.sweep = sweep;
            c.excitation.tau = tau;
            c.discretization.cfl = cfl;
            c.discretization.order = order;
            c.probes.points.push([probe.0, probe.1, probe.2]);
            let back: ExperimentConfig = toml::from_str(&c.to_toml().unwrap()).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.hash(), c.hash());
        }
    }
}
