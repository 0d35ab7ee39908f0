use num_bigint::BigInt;
use num_traits::One;
use serde_json::json;

use super::diagset::{canonical_cmp, DiagSet, DiagonalIndex};
use super::snf::invariant_factors;
use crate::error::{Error, Result};
use crate::geom::Region;

/// Simplicial complex on the diagonals whose simplices are the noncrossing diagonal sets.
#[derive(Clone, Debug)]
pub struct ThetaComplex {
    index: DiagonalIndex,
    /// `simplices[k]` holds the sets of size `k` (dimension `k - 1`); `simplices[0]` is the empty simplex.
    simplices: Vec<Vec<DiagSet>>,
    convex: bool,
}

/// One reduced homology group `Z^rank (+) Z/t_1 (+) ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: isize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

pub fn theta_complex(region: &Region, cap: usize) -> Result<ThetaComplex> {
    region.require_general_position()?;
    let index = DiagonalIndex::new(region);
    let mut all = Vec::new();
    let mut set = index.empty_set();
    noncrossing_sets(&index, 0, &mut set, &mut all, cap)?;
    all.sort_by(canonical_cmp);
    let top = all.iter().map(|s| s.len()).max().unwrap_or(0);
    let mut simplices = vec![Vec::new(); top + 1];
    for s in all {
        simplices[s.len()].push(s);
    }
    let convex = crate::reflex_vertices(region).is_empty() && region.hole_count() == 0;
    Ok(ThetaComplex { index, simplices, convex })
}

fn noncrossing_sets(
    index: &DiagonalIndex,
    k: usize,
    set: &mut DiagSet,
    out: &mut Vec<DiagSet>,
    cap: usize,
) -> Result<()> {
    if k == index.len() {
        if out.len() >= cap {
            return Err(Error::RegionTooLarge { cap, reached: out.len() + 1 });
        }
        out.push(set.clone());
        return Ok(());
    }
    if index.compatible(set, k) {
        set.insert(k);
        noncrossing_sets(index, k + 1, set, out, cap)?;
        set.remove(k);
    }
    noncrossing_sets(index, k + 1, set, out, cap)
}

impl ThetaComplex {
    pub fn index(&self) -> &DiagonalIndex {
        &self.index
    }

    /// The region is a convex polygon, so the complex is a sphere rather than a ball.
    pub fn is_convex_case(&self) -> bool {
        self.convex
    }

    /// Dimension of the complex (size of the largest simplex minus one).
    pub fn dim(&self) -> isize {
        self.simplices.len() as isize - 2
    }

    /// Simplices of dimension `k` (`k >= -1`).
    pub fn simplices(&self, k: isize) -> &[DiagSet] {
        let i = (k + 1) as usize;
        self.simplices.get(i).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Number of simplices per dimension starting at dimension -1.
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(|v| v.len()).collect()
    }

    /// Facets: noncrossing sets not contained in a larger one (the triangulations).
    pub fn facets(&self) -> Vec<DiagSet> {
        let mut out = Vec::new();
        for level in &self.simplices {
            for s in level {
                let maximal = (0..self.index.len()).all(|d| s.contains(d) || !self.index.compatible(s, d));
                if maximal {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Boundary map from dimension `k` to `k - 1` as sparse triples (row = face, col = simplex).
    fn boundary(&self, k: isize) -> (usize, usize, Vec<(usize, usize, i64)>) {
        let cols = self.simplices(k);
        let rows = self.simplices(k - 1);
        let pos: std::collections::HashMap<&DiagSet, usize> = rows.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut entries = Vec::new();
        for (c, s) in cols.iter().enumerate() {
            for (i, v) in s.iter().enumerate() {
                let face = s.without(v);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                entries.push((pos[&face], c, sign));
            }
        }
        (rows.len(), cols.len(), entries)
    }

    /// Reduced integer homology in degrees `-1..=dim`, by Smith normal form of the
    /// augmented boundary matrices.
    pub fn reduced_homology(&self) -> Vec<HomologyGroup> {
        let top = self.dim();
        // factors[k + 1] = invariant factors of the boundary out of dimension k
        let mut factors: Vec<Vec<BigInt>> = Vec::new();
        for k in -1..=top + 1 {
            if k <= -1 || k > top {
                factors.push(Vec::new());
            } else {
                let (r, c, e) = self.boundary(k);
                factors.push(invariant_factors(r, c, &e));
            }
        }
        (-1..=top)
            .map(|k| {
                let chains = self.simplices(k).len();
                let rank_out = factors[(k + 1) as usize].len();
                let rank_in = factors[(k + 2) as usize].len();
                let torsion = factors[(k + 2) as usize].iter().filter(|f| !f.is_one()).cloned().collect();
                HomologyGroup { degree: k, rank: chains - rank_out - rank_in, torsion }
            })
            .collect()
    }

    pub fn homology_json(&self) -> serde_json::Value {
        let groups: Vec<serde_json::Value> = self
            .reduced_homology()
            .iter()
            .map(|g| {
                let torsion: Vec<String> = g.torsion.iter().map(|t| t.to_string()).collect();
                json!({ "degree": g.degree, "rank": g.rank, "torsion": torsion })
            })
            .collect();
        json!({
            "vertices": self.index.len(),
            "dim": self.dim(),
            "counts": self.counts(),
            "facets": self.facets().len(),
            "convex": self.convex,
            "reducedHomology": groups,
        })
    }
}
