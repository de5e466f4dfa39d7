use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },

    #[error("root finding did not converge for {what}: {trace}")]
    RootNotConverged { what: String, trace: String },

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("degenerate polygon: area {area:e} is below tolerance for diameter {diameter}")]
    DegeneratePolygon { area: f64, diameter: f64 },

    #[error("john ellipse solver did not converge (duality gap {gap:e})")]
    EllipseNotConverged { gap: f64 },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("mass matrix is rank deficient: weight vanishes around node {node}")]
    RankDeficientMass { node: usize },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("eigensolver did not converge after {iterations} iterations (residuals {residuals:?})")]
    EigenNotConverged { iterations: usize, residuals: Vec<f64> },

    #[error("mesh generation failed: {0}")]
    Mesh(String),

    #[error("degenerate triangle {index} (area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("polygon aspect {aspect} is above the thin-domain threshold {threshold}")]
    NotThin { aspect: f64, threshold: f64 },

    #[error("polygon is not symmetric about the perpendicular bisector of its diameter (deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("optimizer failed: {0}")]
    Optimizer(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
