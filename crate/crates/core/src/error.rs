//! Error type shared by all processing stages.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image dimensions: {0}")]
    InvalidDimensions(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("basis index {index} out of range for {count} basis functions")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("parameter {value} outside the knot domain [{lo}, {hi}]")]
    OutsideDomain { value: f64, lo: f64, hi: f64 },

    #[error("orientation undefined for empty foreground")]
    UndefinedOrientation,

    #[error("need at least {needed} points, got {got}")]
    NotEnoughPoints { needed: usize, got: usize },

    #[error("degenerate point layout: {0}")]
    GridDegenerate(String),

    #[error("control grid has invalid cells; fill them before fitting")]
    IncompleteGrid,

    #[error("no quadrilaterals detected")]
    NoQuadrilaterals,

    #[error("surfaces sampled on different lattices: {0}")]
    MismatchedSurfaces(String),

    #[error("grid dimensions differ between images: {0}")]
    MismatchedGrids(String),

    #[error("calibration fit is degenerate: {0}")]
    DegenerateFit(String),

    #[error("no contact region above threshold")]
    NoContact,

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Image(#[from] image::ImageError),
}
