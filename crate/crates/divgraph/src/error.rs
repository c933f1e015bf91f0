use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Geometry errors (`PointNotOnGraph`, `GraphMismatch`, ...) indicate misuse of
/// the API; they are reported rather than panicking so the CLI can turn them
/// into diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no vertices or no edges")]
    EmptyGraph,
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("edge {edge} has non-positive or non-finite length {length}")]
    NonPositiveEdgeLength { edge: String, length: f64 },
    #[error("duplicate edge id {edge}")]
    DuplicateEdgeId { edge: String },
    #[error("duplicate vertex id {vertex}")]
    DuplicateVertexId { vertex: String },
    #[error("unknown vertex id {vertex}")]
    UnknownVertex { vertex: String },
    #[error("unknown edge id {edge}")]
    UnknownEdge { edge: String },
    #[error("point does not lie on this graph")]
    PointNotOnGraph,
    #[error("operands belong to different graphs")]
    GraphMismatch,
    #[error("degrees differ: {left} vs {right}")]
    DegreeMismatch { left: f64, right: f64 },
    #[error("divisor has a negative mass {mass}")]
    NonEffectiveDivisor { mass: f64 },
    #[error("divisor has degree zero")]
    ZeroDegreeInput,
    #[error("parameter {name} = {value} is outside its admissible range")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("level-set range is empty (lo > hi)")]
    InvalidRange,
    #[error("kappa = {kappa} is below the required scale {required}")]
    KappaTooSmall { kappa: f64, required: f64 },
    #[error("divisor is not contained in the hull")]
    NotInHull,
    #[error("reduced-divisor certificate failed")]
    CertificateFailed,
    #[error("hull needs at least one generator")]
    EmptyHull,
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
