//! Geometric realizations: integer points from the dual-tree recursion and area vectors
//! of the secondary polytope, with exact certificates for hull membership.

mod dual;
pub mod lp;
mod secondary;

pub use dual::{
    default_root_edge, dual_tree, realize, theta_assignment, DualTree, Realization, RealizationPoint, ThetaAssignment,
};
pub use lp::{extremality_certificate, hull_edge_certificate};
pub use secondary::{
    affine_rank, area_vector, face_support_certificate, height_certificate, inner, secondary_polytope_summary,
    AreaVector, FaceCertificate, HeightCertificate, SecondarySummary, MAX_DOUBLINGS,
};
