//! Numerical construction and certification of p-reflections over planar
//! Jordan curves.
//!
//! Given a polygonal Jordan curve whose bounded side carries a subhyperbolic
//! metric, this crate builds the piecewise reflection across the curve:
//! conformal maps of both sides, a stable reflection along hyperbolic rays,
//! balanced partition refinements on both sides, Lipschitz reshaping of the
//! exterior rectangles, and a glued map assembled from per-rectangle
//! transfinite extensions. Every comparability constant the construction
//! relies on is measured, not assumed; the `report` module turns those
//! measurements into machine-readable certificates.

pub mod error;
pub mod exec;
pub mod geom;

pub mod curve;
pub mod curves;

pub mod conformal;
pub mod metrics;
pub mod whitney;

pub mod reflect;
pub mod refine;
pub mod edges;
pub mod tukia;

pub mod report;
pub mod pipeline;
pub mod plot;

pub use error::{Error, Result};
pub use geom::Point2;
