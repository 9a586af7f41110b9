//! Reflection runs, sigma_max sweeps and the order study.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::mesh::{build_box_mesh, connect_mesh, tag_injection_plane, Axis, BoxMeshSpec, Mesh};
use crate::pml::{tag_pml_region, StretchProfile};
use crate::reference_element::build_reference_operators;
use crate::solver::{PmlOperators, Solver, SolverConfig};

use super::config::{Configuration, ExperimentConfig};

/// Outcome of one reflection run.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionResult {
    pub sigma_max: f64,
    /// `20 log10(peak |E_x| / E0)` over the reflected window.
    pub reflection_db: f64,
    /// Peak `|E_x|` in the reflected window (V/m).
    pub peak_amplitude: f64,
    pub peak_time: f64,
    /// Peak `|E_x|` before the split; the probe sits on the scattered-field
    /// side, so this measures injection leakage.
    pub incident_window_peak: f64,
    pub steps: usize,
    pub dt: f64,
    pub config_hash: String,
    pub trace_path: PathBuf,
    pub config: ExperimentConfig,
}

/// Outcome of a sigma_max scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub results: Vec<ReflectionResult>,
    /// Index into `results` of the smallest reflection.
    pub argmin: usize,
    pub csv_path: PathBuf,
}

impl SweepResult {
    pub fn best(&self) -> &ReflectionResult {
        &self.results[self.argmin]
    }
}

/// Optimal-sigma reflection of one configuration at one order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub configuration: Configuration,
    pub order: usize,
    pub best_sigma: f64,
    pub reflection_db: f64,
    pub sweep: SweepResult,
}

/// Box mesh of the experiment, connected, with injection plane and PML tagged.
pub fn build_mesh(config: &ExperimentConfig) -> Result<Mesh> {
    let (origin, extent) = config.box_bounds();
    let mesh = build_box_mesh(&BoxMeshSpec {
        origin,
        extent,
        target_edge: config.geometry.target_edge,
        style: config.discretization.mesh,
        layer_planes: config.layer_planes(),
    })?;
    let mut mesh = connect_mesh(mesh, &[Axis::X, Axis::Y])?;
    tag_injection_plane(&mut mesh, 0.0)?;
    tag_pml_region(&mut mesh, &stretch_profile(config));
    Ok(mesh)
}

pub fn stretch_profile(config: &ExperimentConfig) -> StretchProfile {
    let g = &config.geometry;
    StretchProfile::z_slab(
        config.pml.sigma_max,
        config.pml.kappa_max,
        config.pml.grading_order,
        -g.interface,
        g.interface,
        g.pml_thickness,
    )
}

pub fn build_solver(config: &ExperimentConfig) -> Result<Solver> {
    config.validate()?;
    let mesh = build_mesh(config)?;
    let d = &config.discretization;
    let ops = build_reference_operators(d.order)?;
    let pml = PmlOperators::from_profile(d.pml_path, &mesh, &ops, &stretch_profile(config), config.pml.sampling)?;
    let solver_config = SolverConfig {
        flux: d.flux,
        cfl: d.cfl,
        pml_path: d.pml_path,
        ..SolverConfig::default()
    };
    Solver::new(mesh, ops, solver_config, Some(pml), Some(config.excitation))
}

/// Open `path` and write the provenance header lines.
fn csv_with_provenance(path: &Path, config_hash: &str) -> Result<csv::Writer<BufWriter<File>>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "# dgtd-pml {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# config_hash {config_hash}")?;
    Ok(csv::Writer::from_writer(out))
}

fn short(hash: &str) -> &str {
    &hash[..16]
}

fn to_db(amplitude: f64, reference: f64) -> f64 {
    20.0 * (amplitude / reference).log10()
}

/// Run the normal-incidence experiment and write the probe trace CSV.
///
/// The run starts from the analytic incident field shortly before the pulse
/// front reaches the PML and stops after the echo of the PEC backing has
/// passed the reflection probe.
pub fn run_reflection_experiment(config: &ExperimentConfig) -> Result<ReflectionResult> {
    let window = config.time_window()?;
    let mut solver = build_solver(config)?;
    let probes = config
        .probes
        .points
        .iter()
        .map(|&p| solver.probe(p))
        .collect::<Result<Vec<_>>>()?;

    let hash = config.hash();
    let trace_path = config.output.directory.join(format!("trace_{}.csv", short(&hash)));
    let mut trace = csv_with_provenance(&trace_path, &hash)?;
    trace.write_record(["probe", "t", "ex", "ey", "ez", "hx", "hy", "hz"])?;

    let span = window.end - window.start;
    let steps = (span / solver.time_step()).ceil() as usize;
    let dt = span / steps as f64;
    let mut state = solver.incident_state(window.start)?;
    let mut peak = (0.0, window.split);
    let mut leak: f64 = 0.0;
    for n in 0..=steps {
        if n > 0 {
            solver.step(&mut state, dt)?;
        }
        let t = state.time;
        for (i, probe) in probes.iter().enumerate() {
            let v = solver.sample(&state, probe);
            if i == 0 {
                let ex = v[0].abs();
                if t > window.split {
                    if ex > peak.0 {
                        peak = (ex, t);
                    }
                } else {
                    leak = leak.max(ex);
                }
            }
            if n % config.output.every == 0 || n == steps {
                let mut row = vec![i.to_string(), t.to_string()];
                row.extend(v.iter().map(f64::to_string));
                trace.write_record(&row)?;
            }
        }
    }
    trace.flush()?;

    Ok(ReflectionResult {
        sigma_max: config.pml.sigma_max,
        reflection_db: to_db(peak.0, config.excitation.amplitude),
        peak_amplitude: peak.0,
        peak_time: peak.1,
        incident_window_peak: leak,
        steps,
        dt,
        config_hash: hash,
        trace_path,
        config: config.clone(),
    })
}

/// Index of the smallest reflection; ties go to the smaller sigma_max so the
/// answer does not depend on the order of the list.
fn argmin(results: &[ReflectionResult]) -> usize {
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        let b = &results[best];
        if r.reflection_db < b.reflection_db || (r.reflection_db == b.reflection_db && r.sigma_max < b.sigma_max) {
            best = i;
        }
    }
    best
}

/// One reflection run per conductivity scale, plus a combined CSV.
pub fn sweep_sigma_max(config: &ExperimentConfig, values: &[f64]) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::Config("sigma_max sweep needs at least one value".into()));
    }
    let results = values
        .iter()
        .map(|&s| run_reflection_experiment(&config.with_sigma(s)))
        .collect::<Result<Vec<_>>>()?;
    let argmin = argmin(&results);

    let hash = config.hash();
    let csv_path = config.output.directory.join(format!("sweep_{}.csv", short(&hash)));
    let mut out = csv_with_provenance(&csv_path, &hash)?;
    out.write_record(["sigma_max", "reflection_db", "peak_amplitude", "peak_time", "config_hash"])?;
    for r in &results {
        out.write_record([
            r.sigma_max.to_string(),
            r.reflection_db.to_string(),
            r.peak_amplitude.to_string(),
            r.peak_time.to_string(),
            r.config_hash.clone(),
        ])?;
    }
    out.flush()?;
    Ok(SweepResult {
        results,
        argmin,
        csv_path,
    })
}

/// Optimal-sigma reflection for every configuration and order, scanning
/// `template.pml.sweep` each time. Writes `convergence.csv`.
pub fn convergence_study(
    template: &ExperimentConfig,
    configurations: &[Configuration],
    orders: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::new();
    for &configuration in configurations {
        for &order in orders {
            let mut config = template.clone();
            configuration.apply(&mut config);
            config.discretization.order = order;
            let sweep = sweep_sigma_max(&config, &template.pml.sweep)?;
            let best = sweep.best();
            rows.push(ConvergenceRow {
                configuration,
                order,
                best_sigma: best.sigma_max,
                reflection_db: best.reflection_db,
                sweep,
            });
        }
    }
    write_convergence_csv(template, &rows)?;
    Ok(rows)
}

fn write_convergence_csv(template: &ExperimentConfig, rows: &[ConvergenceRow]) -> Result<PathBuf> {
    let hash = template.hash();
    let path = template.output.directory.join("convergence.csv");
    let mut out = csv_with_provenance(&path, &hash)?;
    out.write_record(["configuration", "order", "best_sigma_max", "reflection_db", "sweep_csv"])?;
    for r in rows {
        out.write_record([
            r.configuration.label().to_string(),
            r.order.to_string(),
            r.best_sigma.to_string(),
            r.reflection_db.to_string(),
            r.sweep.csv_path.display().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Preset;

    fn result(sigma: f64, db: f64) -> ReflectionResult {
        ReflectionResult {
            sigma_max: sigma,
            reflection_db: db,
            peak_amplitude: 10f64.powf(db / 20.0),
            peak_time: 0.0,
            incident_window_peak: 0.0,
            steps: 0,
            dt: 0.0,
            config_hash: String::new(),
            trace_path: PathBuf::new(),
            config: ExperimentConfig::preset(Preset::Ci),
        }
    }

    #[test]
    fn argmin_is_order_independent() {
        let a = vec![result(0.0, -1.0), result(1.0, -40.0), result(2.0, -40.0), result(3.0, -20.0)];
        let mut b = a.clone();
        b.reverse();
        assert_eq!(a[argmin(&a)].sigma_max, 1.0);
        assert_eq!(b[argmin(&b)].sigma_max, 1.0);
    }

    #[test]
    fn decibels_are_relative_to_amplitude() {
        assert_eq!(to_db(1.0, 1.0), 0.0);
        assert!((to_db(1e-3, 1.0) + 60.0).abs() < 1e-12);
        assert!((to_db(0.5, 0.5) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn experiment_mesh_has_tagged_pml_and_source() {
        let c = ExperimentConfig::preset(Preset::Ci);
        let mesh = build_mesh(&c).unwrap();
        let k_pml = mesh.pml_elements().len();
        // Two layers of four lattice slabs, 3 x 3 columns, 6 tets per
        // hexahedron, plus part of the jittered slab next to each interface.
        assert!(k_pml >= 2 * 4 * 9 * 6 && k_pml <= 2 * 5 * 9 * 6, "{k_pml}");
        assert_eq!(mesh.n_elements(), 3 * 3 * 58 * 6);
    }

    #[test]
    fn layered_mesh_pml_is_exactly_the_slabs() {
        let mut c = ExperimentConfig::preset(Preset::Ci);
        Configuration::EcLayered.apply(&mut c);
        let mesh = build_mesh(&c).unwrap();
        assert_eq!(mesh.pml_elements().len(), 2 * 4 * 9 * 6);
    }
}
