//! Visibility rank, V-equivalence, exact event detection along vertex motions, and the
//! monotone deformation of star polygons onto a convex polygon.
//!
//! V-isotopy is never decided here: an event-free path proves it, while the absence of
//! one among the tried motions proves nothing. Every report carries [`V_ISOTOPY_NOTE`].

mod events;
mod star;

pub use events::{
    is_monotone_chain, move_vertex, run_chain, ChainReport, DeformationEvent, EventKind, EventTime, Trajectory,
};
pub use star::{
    star_deformation, star_deformation_along, star_deformation_report, star_deformation_report_along, StarPath,
    StarReport,
};

use serde_json::json;

use crate::error::{Error, Result};
use crate::geom::Region;
use crate::visibility::visibility_graph;

pub const V_ISOTOPY_NOTE: &str =
    "V-isotopy is not decided: an event-free path proves it, but the absence of one among the tried motions proves nothing";

/// Rank of a polygon in the deformation poset: the number of visibility edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub n: usize,
    pub rank: usize,
    /// `2n - 3`, reached exactly by polygons with a unique triangulation.
    pub min: usize,
    /// `n(n - 1) / 2`, reached exactly by convex polygons.
    pub max: usize,
    /// `binom(n, 2) - 2n + 4`: number of ranks between the bounds, inclusive.
    pub height: usize,
}

impl RankReport {
    pub fn within_bounds(&self) -> bool {
        self.min <= self.rank && self.rank <= self.max
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "rank": self.rank, "min": self.min, "max": self.max, "height": self.height })
    }
}

pub fn rank(region: &Region) -> RankReport {
    let n = region.n();
    let max = n * (n - 1) / 2;
    let min = 2 * n - 3;
    RankReport { n, rank: visibility_graph(region).edge_count(), min, max, height: max + 4 - 2 * n }
}

/// Same labeled visibility graph.
pub fn v_equivalent(a: &Region, b: &Region) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::MismatchedN(a.n(), b.n()));
    }
    Ok(visibility_graph(a) == visibility_graph(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geom::Polygon;

    #[test]
    fn ranks() {
        let r = rank(&fixtures::convex_polygon(6));
        assert_eq!((r.rank, r.height), (15, 7));
        assert_eq!(rank(&fixtures::hex_h()).rank, 13);
        assert!(rank(&fixtures::hex_h()).within_bounds());
    }

    #[test]
    fn equivalence() {
        let h = fixtures::hex_h();
        let moved = Polygon::from_ints(&[(10, 10), (14, 12), (18, 10), (18, 18), (14, 16), (10, 18)]).unwrap();
        assert!(v_equivalent(&h, &moved).unwrap());
        assert!(!v_equivalent(&h, &fixtures::convex_polygon(6)).unwrap());
        assert_eq!(v_equivalent(&h, &fixtures::unit_square()).unwrap_err(), Error::MismatchedN(6, 4));
    }
}
