//! Exact computational toolkit for convex-diagonalization complexes of simple polygons.
//!
//! All geometry runs on arbitrary-precision rationals. Vertex indices are 0-based in the
//! API; every user-facing format (JSON, DOT, error messages) uses 1-based labels.

pub mod complex;
pub mod deformation;
pub mod error;
pub mod fixtures;
pub mod geom;
pub mod io;
pub mod num;
pub mod realization;
pub mod visibility;

pub use error::{Error, Result};
pub use geom::{GeneralizedPolygon, Point, Polygon, Region};
pub use visibility::{Diagonal, VisibilityGraph};

/// Default cap on enumerated faces or triangulations.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Vertices whose interior angle exceeds pi (0-based, ascending).
pub fn reflex_vertices(region: &Region) -> Vec<usize> {
    (0..region.n()).filter(|&i| region.is_reflex(i)).collect()
}
