use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported polynomial order {order}: {reason}")]
    UnsupportedOrder { order: usize, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("element {element} is inverted or degenerate (jacobian {jacobian:e})")]
    InvertedElement { element: usize, jacobian: f64 },

    #[error("unmatched periodic face on element {element} face {face}, centroid ({:.6e}, {:.6e}, {:.6e})", centroid[0], centroid[1], centroid[2])]
    UnmatchedPeriodicFace {
        element: usize,
        face: usize,
        centroid: [f64; 3],
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid PML coefficient: {0}")]
    Coefficient(String),

    #[error("dimension mismatch: {0}")]
    Contract(String),

    #[error("connectivity error: {0}")]
    Connectivity(String),

    #[error("solution became non-finite at t = {time:e} s in element {element}")]
    Instability { time: f64, element: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
