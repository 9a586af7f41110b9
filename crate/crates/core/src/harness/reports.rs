//! Storage and arithmetic cost of the two smoothly-varying PML paths.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::mesh::geometric_factors;
use crate::pml::{sample_coefficients, DirectPmlOperators, SampleLocations, SamplingStrategy, WaaPmlOperators};
use crate::reference_element::{build_reference_operators, n_nodes, ReferenceOperators};

use super::config::ExperimentConfig;
use super::experiment::{build_mesh, stretch_profile};

/// Quadrature points of the degree-2p rule used by the weight-adjusted path.
pub fn n_quad(order: usize) -> Result<usize> {
    Ok(build_reference_operators(order)?.n_quad())
}

/// Analytic float counts next to the counts allocated by the builders.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryReport {
    pub order: usize,
    pub n_nodes: usize,
    pub n_quad: usize,
    pub k_pml: usize,
    /// `15 N_p^2`.
    pub direct_per_element: usize,
    /// `15 N_q`.
    pub waa_per_element: usize,
    /// `2 N_p N_q` for `V_q` and `P_q`.
    pub waa_shared: usize,
    /// `K_PML 15 N_p^2`.
    pub direct_analytic: usize,
    /// `K_PML 15 N_q + 2 N_p N_q`.
    pub waa_analytic: usize,
    pub direct_allocated: usize,
    pub waa_allocated: usize,
    /// Field and auxiliary unknowns per PML element, `12 N_p`.
    pub unknowns_per_element: usize,
}

impl MemoryReport {
    /// Per-element storage ratio `N_p^2 / N_q` of the direct and weight-adjusted paths.
    pub fn per_element_ratio(&self) -> f64 {
        self.direct_per_element as f64 / self.waa_per_element as f64
    }

    pub fn total_ratio(&self) -> f64 {
        self.direct_analytic as f64 / self.waa_analytic as f64
    }

    pub fn matches(&self) -> bool {
        self.direct_analytic == self.direct_allocated && self.waa_analytic == self.waa_allocated
    }
}

impl fmt::Display for MemoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "p = {}, N_p = {}, N_q = {}, K_PML = {}",
            self.order, self.n_nodes, self.n_quad, self.k_pml
        )?;
        writeln!(f, "{:<10} {:>14} {:>14} {:>14}", "path", "per element", "analytic", "allocated")?;
        writeln!(
            f,
            "{:<10} {:>14} {:>14} {:>14}",
            "direct", self.direct_per_element, self.direct_analytic, self.direct_allocated
        )?;
        writeln!(
            f,
            "{:<10} {:>14} {:>14} {:>14}",
            "waa",
            format!("{}+{}", self.waa_per_element, self.waa_shared),
            self.waa_analytic,
            self.waa_allocated
        )?;
        writeln!(f, "unknowns per PML element: {}", self.unknowns_per_element)?;
        write!(
            f,
            "ratio direct/waa: per element {:.2}, total {:.2}",
            self.per_element_ratio(),
            self.total_ratio()
        )
    }
}

/// Float counts from the formulas alone.
pub fn analytic_memory(order: usize, k_pml: usize) -> Result<MemoryReport> {
    let np = n_nodes(order);
    let nq = n_quad(order)?;
    Ok(MemoryReport {
        order,
        n_nodes: np,
        n_quad: nq,
        k_pml,
        direct_per_element: 15 * np * np,
        waa_per_element: 15 * nq,
        waa_shared: 2 * np * nq,
        direct_analytic: k_pml * 15 * np * np,
        waa_analytic: k_pml * 15 * nq + 2 * np * nq,
        direct_allocated: 0,
        waa_allocated: 0,
        unknowns_per_element: 12 * np,
    })
}

fn shared_floats(ops: &ReferenceOperators) -> usize {
    ops.interp_to_quad.len() + ops.project_from_quad.len()
}

/// Build both smoothly-varying operator sets for `config` and count what they store.
pub fn memory_report(config: &ExperimentConfig) -> Result<MemoryReport> {
    let mesh = build_mesh(config)?;
    let ops = build_reference_operators(config.discretization.order)?;
    let profile = stretch_profile(config);
    let strategy = SamplingStrategy::SmoothlyVarying;
    let at_nodes = sample_coefficients(&mesh, &profile, strategy, SampleLocations::Nodes, &ops)?;
    let geom = geometric_factors(&mesh, &ops)?;
    let direct = DirectPmlOperators::build(&at_nodes, &geom.jacobian, &ops)?;
    let at_quad = sample_coefficients(&mesh, &profile, strategy, SampleLocations::QuadPoints, &ops)?;
    let waa = WaaPmlOperators::build(&at_quad, &ops)?;

    let mut report = analytic_memory(config.discretization.order, at_nodes.elements.len())?;
    report.direct_allocated = direct.stored_floats();
    report.waa_allocated = waa.stored_floats() + shared_floats(&ops);
    Ok(report)
}

/// Per-element multiplications and additions of the PML updates, excluding
/// the shared curl.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperationCounts {
    pub order: usize,
    pub n_nodes: usize,
    pub n_quad: usize,
    /// Field equation, direct: `3 N_p^2`.
    pub direct_field_mul: usize,
    /// Field equation, direct: `2 N_p`.
    pub direct_field_add: usize,
    /// Auxiliary equation, direct: `3 N_p^2`.
    pub direct_aux_mul: usize,
    /// Auxiliary equation, direct: `N_p`.
    pub direct_aux_sub: usize,
    /// Field equation, weight-adjusted: `5 N_q N_p + 3 N_q`.
    pub waa_field_mul: usize,
    /// Field equation, weight-adjusted: `N_q + N_p`.
    pub waa_field_add: usize,
    /// Auxiliary equation, weight-adjusted: `3 N_q N_p + 2 N_q`.
    pub waa_aux_mul: usize,
    /// Auxiliary equation, weight-adjusted: `N_q`.
    pub waa_aux_sub: usize,
}

pub fn operation_count_report(order: usize) -> Result<OperationCounts> {
    let np = n_nodes(order);
    let nq = n_quad(order)?;
    Ok(OperationCounts {
        order,
        n_nodes: np,
        n_quad: nq,
        direct_field_mul: 3 * np * np,
        direct_field_add: 2 * np,
        direct_aux_mul: 3 * np * np,
        direct_aux_sub: np,
        waa_field_mul: 5 * nq * np + 3 * nq,
        waa_field_add: nq + np,
        waa_aux_mul: 3 * nq * np + 2 * nq,
        waa_aux_sub: nq,
    })
}

const OPS_HEADER: [&str; 11] = [
    "order",
    "n_p",
    "n_q",
    "direct_field_mul",
    "direct_field_add",
    "direct_aux_mul",
    "direct_aux_sub",
    "waa_field_mul",
    "waa_field_add",
    "waa_aux_mul",
    "waa_aux_sub",
];

pub fn write_operation_counts(path: &Path, rows: &[OperationCounts]) -> Result<PathBuf> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = csv::Writer::from_path(path)?;
    out.write_record(OPS_HEADER)?;
    for r in rows {
        out.write_record(
            [
                r.order,
                r.n_nodes,
                r.n_quad,
                r.direct_field_mul,
                r.direct_field_add,
                r.direct_aux_mul,
                r.direct_aux_sub,
                r.waa_field_mul,
                r.waa_field_add,
                r.waa_aux_mul,
                r.waa_aux_sub,
            ]
            .map(|v| v.to_string()),
        )?;
    }
    out.flush()?;
    Ok(path.to_path_buf())
}

pub fn write_memory_report(path: &Path, r: &MemoryReport) -> Result<PathBuf> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut out = csv::Writer::from_path(path)?;
    out.write_record(["path", "order", "k_pml", "per_element", "shared", "analytic", "allocated"])?;
    let rows = [
        ("direct", r.direct_per_element, 0, r.direct_analytic, r.direct_allocated),
        ("waa", r.waa_per_element, r.waa_shared, r.waa_analytic, r.waa_allocated),
    ];
    for (name, per_element, shared, analytic, allocated) in rows {
        out.write_record([
            name.to_string(),
            r.order.to_string(),
            r.k_pml.to_string(),
            per_element.to_string(),
            shared.to_string(),
            analytic.to_string(),
            allocated.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(path.to_path_buf())
}
