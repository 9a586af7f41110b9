//! Command-line driver for the plane-wave PML reflection study.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dgtd_pml::harness::{
    convergence_study, default_sampling, memory_report, operation_count_report, run_reflection_experiment,
    sweep_sigma_max, write_memory_report, write_operation_counts, Configuration, ExperimentConfig, Preset,
};
use dgtd_pml::mesh::MeshStyle;
use dgtd_pml::solver::PmlPath;
use dgtd_pml::Result;

#[derive(Parser)]
#[command(name = "dgtd-pml", version, about = "DGTD reflection experiments with smoothly-varying PML coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file; overrides the preset.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Built-in parameter set used when no configuration file is given.
    #[arg(long, global = true, value_enum, default_value = "ci")]
    preset: Preset,
    #[arg(long, global = true, value_enum)]
    pml_path: Option<PathArg>,
    #[arg(long, global = true, value_enum)]
    mesh: Option<MeshArg>,
    /// Polynomial order.
    #[arg(long, global = true)]
    order: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Ec,
    Direct,
    Waa,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeshArg {
    Paved,
    Layered,
}

#[derive(Subcommand)]
enum Command {
    /// One reflection run at the configured sigma_max.
    Run {
        #[arg(long)]
        sigma_max: Option<f64>,
    },
    /// Scan sigma_max over the configured list (or the given values).
    Sweep {
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// Analytic and allocated PML operator storage.
    ReportMemory,
    /// Per-element operation counts of the direct and weight-adjusted updates.
    ReportOps {
        /// Orders to tabulate.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        orders: Vec<usize>,
    },
    /// Optimal-sigma reflection per order for the four configurations.
    Converge {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        orders: Vec<usize>,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let mut config = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::preset(common.preset),
    };
    if let Some(out) = &common.out {
        config.output.directory = out.clone();
    }
    if let Some(p) = common.order {
        config.discretization.order = p;
    }
    let d = &mut config.discretization;
    if let Some(path) = common.pml_path {
        d.pml_path = match path {
            PathArg::Ec => PmlPath::ElementConstant,
            PathArg::Direct => PmlPath::Direct,
            PathArg::Waa => PmlPath::Waa,
        };
    }
    if let Some(mesh) = common.mesh {
        d.mesh = match mesh {
            MeshArg::Paved => MeshStyle::Paved,
            MeshArg::Layered => MeshStyle::Layered,
        };
    }
    if common.pml_path.is_some() || common.mesh.is_some() {
        config.pml.sampling = default_sampling(d.pml_path, d.mesh);
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    let config = load(&cli.common)?;
    match cli.command {
        Command::Run { sigma_max } => {
            let config = sigma_max.map_or(config.clone(), |s| config.with_sigma(s));
            let r = run_reflection_experiment(&config)?;
            println!(
                "sigma_max = {} S/m: reflection {:.2} dB (peak {:.4e} V/m at t = {:.4e} s, {} steps of {:.4e} s)",
                r.sigma_max, r.reflection_db, r.peak_amplitude, r.peak_time, r.steps, r.dt
            );
            println!("trace: {}", r.trace_path.display());
        }
        Command::Sweep { values } => {
            let values = values.unwrap_or_else(|| config.pml.sweep.clone());
            let sweep = sweep_sigma_max(&config, &values)?;
            for r in &sweep.results {
                println!("{:>10} {:>10.2} dB", r.sigma_max, r.reflection_db);
            }
            let best = sweep.best();
            println!("minimum {:.2} dB at sigma_max = {} S/m", best.reflection_db, best.sigma_max);
            println!("csv: {}", sweep.csv_path.display());
        }
        Command::ReportMemory => {
            let report = memory_report(&config)?;
            println!("{report}");
            let path = write_memory_report(&config.output.directory.join("memory.csv"), &report)?;
            println!("csv: {}", path.display());
        }
        Command::ReportOps { orders } => {
            let rows = orders.iter().map(|&p| operation_count_report(p)).collect::<Result<Vec<_>>>()?;
            println!(
                "{:>2} {:>4} {:>4} {:>12} {:>12} {:>12} {:>12}",
                "p", "N_p", "N_q", "direct mul", "waa mul", "direct aux", "waa aux"
            );
            for r in &rows {
                println!(
                    "{:>2} {:>4} {:>4} {:>12} {:>12} {:>12} {:>12}",
                    r.order, r.n_nodes, r.n_quad, r.direct_field_mul, r.waa_field_mul, r.direct_aux_mul, r.waa_aux_mul
                );
            }
            let path = write_operation_counts(&config.output.directory.join("operations.csv"), &rows)?;
            println!("csv: {}", path.display());
        }
        Command::Converge { orders } => {
            let rows = convergence_study(&config, &Configuration::ALL, &orders)?;
            for r in &rows {
                println!(
                    "{:<14} p = {} best sigma_max = {:>6} S/m  {:>8.2} dB",
                    r.configuration.label(),
                    r.order,
                    r.best_sigma,
                    r.reflection_db
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
