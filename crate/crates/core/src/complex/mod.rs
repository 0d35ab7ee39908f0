//! The convex-diagonalization complex K_P and its relatives: triangulations, the flip
//! graph, the noncrossing complex θ(P) and hole splitting.

mod diagset;
mod faces;
mod flip;
mod holes;
mod pieces;
pub mod snf;
mod theta;
mod triangulations;

pub use diagset::{canonical_cmp, sweep_cmp, DiagSet, DiagonalIndex};
pub use faces::{
    ambient_dimension, associahedron_f_vector, build_complex, catalan, convex_diagonalizations, face_factorization,
    facet_removal, labels_interleave, minimal_convex_diagonalizations, product_f_vector, ComplexKP, Face, FacetRemoval,
    Factorization,
};
pub use flip::{flip_graph, FlipGraph, LabeledTriangulation};
pub use holes::{attaches_left, hole_split, verify_bijection, SplitPolygon};
pub use pieces::{is_convex_cycle, is_convex_set, pieces, vertex_is_resolved};
pub use theta::{theta_complex, HomologyGroup, ThetaComplex};
pub use triangulations::{enumerate_triangulations, triangles, triangulation_sets};

use crate::error::Result;
use crate::geom::Region;
use crate::visibility::Diagonal;

/// Validating convexity test on a diagonal list (errors on crossing or non-diagonals).
pub fn is_convex_diagonalization(region: &Region, diagonals: &[Diagonal]) -> Result<bool> {
    region.require_general_position()?;
    let index = DiagonalIndex::new(region);
    let set = index.set_from(diagonals)?;
    Ok(is_convex_set(region, &index, &set))
}
