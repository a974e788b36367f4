//! Numerical laboratory for the scenery flow of self-affine Bernoulli measures.

pub mod affine;
pub mod angle;
pub mod ellipse;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod projective;
pub mod pu;
pub mod reference;
pub mod scenery;
pub mod suite;
pub mod suspension;

pub use affine::{AffineContraction, CodeStream, IfsSystem, SymbolWord};
pub use angle::ProjectiveAngle;
pub use ellipse::Ellipse;
pub use error::{LabError, Result};
pub use measure::{LineMeasure, WeightedPointMeasure};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
