use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid word: letter {letter} is outside the alphabet of size {k}")]
    InvalidWord { letter: usize, k: usize },

    #[error("degenerate orientation: {0}")]
    DegenerateOrientation(&'static str),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("cone condition fails: {0}")]
    ConeRefused(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("measure is not normalized (total mass {0})")]
    Unnormalized(f64),

    #[error("support of {size} points exceeds the cap of {cap}; coarsen the measure first")]
    SupportCap { size: usize, cap: usize },

    #[error("support leaves the unit disk (point at radius {0})")]
    OutsideDisk(f64),

    #[error("empty window around ({x}, {y}) at t = {t}")]
    EmptyWindow { x: f64, y: f64, t: f64 },

    #[error("strip around the slice carries no mass")]
    EmptySlice,

    #[error("ellipse carries no mass")]
    EmptyEllipse,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
