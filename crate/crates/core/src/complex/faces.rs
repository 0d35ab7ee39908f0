use std::collections::HashMap;

use serde_json::json;

use super::diagset::{canonical_cmp, DiagSet, DiagonalIndex};
use super::pieces::{is_convex_cycle, is_convex_set, pieces, vertex_is_resolved};
use crate::error::{Error, Result};
use crate::geom::Region;
use crate::visibility::Diagonal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub set: DiagSet,
    pub dim: usize,
    pub maximal: bool,
}

/// The face poset of K_P: every convex diagonalization with its dimension and covers.
#[derive(Clone, Debug)]
pub struct ComplexKP {
    n: usize,
    h: usize,
    index: DiagonalIndex,
    faces: Vec<Face>,
    lookup: HashMap<DiagSet, usize>,
    covers: Vec<(usize, usize)>,
    min_diagonals: usize,
}

/// Diagonal count of any triangulation: `n + 3h - 3`.
pub fn ambient_dimension(region: &Region) -> usize {
    region.n() + 3 * region.hole_count() - 3
}

/// All convex diagonalizations in canonical order (by size, then lexicographic).
///
/// Backtracks over diagonal indices; as soon as every diagonal at a vertex has been
/// decided the vertex must be resolved (all gaps below pi), which prunes reflex
/// vertices left without an incident diagonal.
pub fn convex_diagonalizations(region: &Region, index: &DiagonalIndex, cap: usize) -> Result<Vec<DiagSet>> {
    region.require_general_position()?;
    let m = index.len();
    let mut finalized: Vec<Vec<usize>> = vec![Vec::new(); m];
    for v in 0..region.n() {
        match index.incident(v).iter().max() {
            Some(&last) => finalized[last].push(v),
            None => {
                if !vertex_is_resolved(region, index, &index.empty_set(), v) {
                    return Ok(Vec::new());
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut set = index.empty_set();
    descend(region, index, &finalized, 0, &mut set, &mut out, cap)?;
    out.sort_by(canonical_cmp);
    Ok(out)
}

fn descend(
    region: &Region,
    index: &DiagonalIndex,
    finalized: &[Vec<usize>],
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
    let settled = |set: &DiagSet| finalized[k].iter().all(|&v| vertex_is_resolved(region, index, set, v));
    if index.compatible(set, k) {
        set.insert(k);
        if settled(set) {
            descend(region, index, finalized, k + 1, set, out, cap)?;
        }
        set.remove(k);
    }
    if settled(set) {
        descend(region, index, finalized, k + 1, set, out, cap)?;
    }
    Ok(())
}

impl ComplexKP {
    pub fn build(region: &Region, cap: usize) -> Result<ComplexKP> {
        let index = DiagonalIndex::new(region);
        let sets = convex_diagonalizations(region, &index, cap)?;
        let ambient = ambient_dimension(region);
        let lookup: HashMap<DiagSet, usize> = sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut covers = Vec::new();
        let mut covered = vec![false; sets.len()];
        for (a, s) in sets.iter().enumerate() {
            for d in 0..index.len() {
                if !s.contains(d) && index.compatible(s, d) {
                    if let Some(&b) = lookup.get(&s.with(d)) {
                        covers.push((a, b));
                        covered[b] = true;
                    }
                }
            }
        }
        covers.sort_unstable();
        let faces: Vec<Face> =
            sets.into_iter().zip(covered).map(|(set, c)| Face { dim: ambient - set.len(), set, maximal: !c }).collect();
        let min_diagonals = faces.iter().map(|f| f.set.len()).min().unwrap_or(0);
        Ok(ComplexKP { n: region.n(), h: region.hole_count(), index, faces, lookup, covers, min_diagonals })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn holes(&self) -> usize {
        self.h
    }

    pub fn ambient(&self) -> usize {
        self.n + 3 * self.h - 3
    }

    pub fn index(&self) -> &DiagonalIndex {
        &self.index
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn face_index(&self, set: &DiagSet) -> Option<usize> {
        self.lookup.get(set).copied()
    }

    pub fn find(&self, diagonals: &[Diagonal]) -> Option<usize> {
        let set = self.index.set_from(diagonals).ok()?;
        self.face_index(&set)
    }

    pub fn diagonals_of(&self, face: usize) -> Vec<Diagonal> {
        self.index.to_diagonals(&self.faces[face].set)
    }

    /// Pairs `(a, b)` where face `b` has exactly one more diagonal than face `a`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// d(P): fewest diagonals in a convex diagonalization.
    pub fn d(&self) -> usize {
        self.min_diagonals
    }

    /// Top dimension, `n + 3h - 3 - d`.
    pub fn dim(&self) -> usize {
        self.ambient() - self.min_diagonals
    }

    pub fn maximal_faces(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| self.faces[i].maximal).collect()
    }

    /// Face indices of the triangulations (the 0-dimensional faces).
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&i| self.faces[i].dim == 0).collect()
    }

    /// Number of faces of each dimension `0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 1];
        for face in &self.faces {
            f[face.dim] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Edges of the 1-skeleton as pairs of vertex face indices.
    pub fn one_skeleton(&self) -> Vec<(usize, usize)> {
        let mut ends: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(a, b) in &self.covers {
            if self.faces[a].dim == 1 {
                ends.entry(a).or_default().push(b);
            }
        }
        let mut edges: Vec<(usize, usize)> = ends
            .into_values()
            .map(|v| {
                debug_assert_eq!(v.len(), 2);
                (v[0].min(v[1]), v[0].max(v[1]))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Faces containing `face` (the closed cell above it), including itself.
    pub fn faces_refining(&self, face: usize) -> Vec<usize> {
        let s = &self.faces[face].set;
        (0..self.faces.len()).filter(|&i| s.is_subset(&self.faces[i].set)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let faces: Vec<serde_json::Value> = self
            .faces
            .iter()
            .map(|f| json!({ "diagonals": self.index.labels(&f.set), "dim": f.dim, "maximal": f.maximal }))
            .collect();
        let covers: Vec<[usize; 2]> = self.covers.iter().map(|&(a, b)| [a, b]).collect();
        json!({
            "n": self.n,
            "h": self.h,
            "dim": self.dim(),
            "dP": self.d(),
            "faces": faces,
            "covers": covers,
        })
    }

    /// The label map into the complex of the convex polygon on the same labels: face
    /// indices of `convex` for each face of `self`. Fails with `NotAFace` when some image
    /// is not a face.
    pub fn embed_into(&self, convex: &ComplexKP) -> Result<Vec<usize>> {
        if convex.n != self.n {
            return Err(Error::MismatchedN(self.n, convex.n));
        }
        self.faces.iter().map(|f| convex.find(&self.index.to_diagonals(&f.set)).ok_or(Error::NotAFace)).collect()
    }
}

pub fn build_complex(region: &Region, cap: usize) -> Result<ComplexKP> {
    ComplexKP::build(region, cap)
}

/// Minimal convex diagonalizations (the maximal faces) and d(P).
pub fn minimal_convex_diagonalizations(region: &Region, cap: usize) -> Result<(Vec<Vec<Diagonal>>, usize)> {
    let k = ComplexKP::build(region, cap)?;
    let mins = k.maximal_faces().into_iter().map(|i| k.diagonals_of(i)).collect();
    Ok((mins, k.d()))
}

/// Two label pairs interleave around the cycle `1..n` (the crossing test of a convex polygon).
pub fn labels_interleave(d1: Diagonal, d2: Diagonal) -> bool {
    if d1.shares_endpoint(&d2) {
        return false;
    }
    let inside = |x: usize| d1.a < x && x < d1.b;
    inside(d2.a) != inside(d2.b)
}

/// Result of deleting from the convex complex every face that is not a convex
/// diagonalization of P.
#[derive(Clone, Debug)]
pub struct FacetRemoval {
    /// Faces of the convex complex that survive, as label diagonal lists in canonical order.
    pub retained: Vec<Vec<Diagonal>>,
    pub removed_count: usize,
    /// Connected components of the removed faces under the face relation.
    pub removed_components: usize,
}

/// Keeps a face of the convex complex iff all its diagonals are diagonals of P and no
/// non-diagonal of P fits into it without crossing.
pub fn facet_removal(region: &Region, convex: &ComplexKP) -> Result<FacetRemoval> {
    if region.hole_count() > 0 {
        return Err(Error::HolesNotSupported);
    }
    if convex.n != region.n() {
        return Err(Error::MismatchedN(region.n(), convex.n));
    }
    let own = DiagonalIndex::new(region);
    let q = convex.index();
    let outside: Vec<usize> = (0..q.len()).filter(|&i| own.index_of(q.diagonal(i)).is_none()).collect();
    let mut outside_mask = q.empty_set();
    for &i in &outside {
        outside_mask.insert(i);
    }
    let keep: Vec<bool> = convex
        .faces
        .iter()
        .map(|f| !f.set.intersects(&outside_mask) && outside.iter().all(|&e| !q.compatible(&f.set, e)))
        .collect();
    let mut retained: Vec<DiagSet> = Vec::new();
    let mut removed = Vec::new();
    for (i, f) in convex.faces.iter().enumerate() {
        if keep[i] {
            retained.push(f.set.clone());
        } else {
            removed.push(i);
        }
    }
    retained.sort_by(canonical_cmp);

    // union-find over removed faces, joining each to the removed vertices below it
    let mut parent: HashMap<usize, usize> = removed.iter().map(|&i| (i, i)).collect();
    fn find(parent: &mut HashMap<usize, usize>, x: usize) -> usize {
        let p = parent[&x];
        if p == x {
            return x;
        }
        let r = find(parent, p);
        parent.insert(x, r);
        r
    }
    let removed_vertices: Vec<usize> = removed.iter().copied().filter(|&i| convex.faces[i].dim == 0).collect();
    for &f in &removed {
        for &t in &removed_vertices {
            if convex.faces[f].set.is_subset(&convex.faces[t].set) {
                let (a, b) = (find(&mut parent, f), find(&mut parent, t));
                if a != b {
                    parent.insert(a, b);
                }
            }
        }
    }
    let mut roots: Vec<usize> = removed.iter().map(|&i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    Ok(FacetRemoval {
        retained: retained.iter().map(|s| q.to_diagonals(s)).collect(),
        removed_count: removed.len(),
        removed_components: roots.len(),
    })
}

/// The pieces of a convex diagonalization and the product structure of its face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Piece boundaries as counterclockwise label cycles.
    pub pieces: Vec<Vec<usize>>,
    pub edge_counts: Vec<usize>,
    /// Triangulations refining the diagonalization: the product of Catalan numbers.
    pub refinements: u128,
    /// f-vector of the product of associahedra of the pieces.
    pub f_vector: Vec<u128>,
}

pub fn face_factorization(region: &Region, diagonals: &[Diagonal]) -> Result<Factorization> {
    region.require_general_position()?;
    let index = DiagonalIndex::new(region);
    let set = index.set_from(diagonals)?;
    if !is_convex_set(region, &index, &set) {
        return Err(Error::NotConvexDiagonalization);
    }
    let cycles = pieces(region, &index, &set);
    debug_assert!(cycles.iter().all(|c| is_convex_cycle(region, c)));
    let edge_counts: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
    let refinements = edge_counts.iter().map(|&k| catalan(k - 2)).product();
    let f_vector = edge_counts.iter().fold(vec![1u128], |acc, &k| product_f_vector(&acc, &associahedron_f_vector(k)));
    Ok(Factorization {
        pieces: cycles.into_iter().map(|c| c.into_iter().map(|v| v + 1).collect()).collect(),
        edge_counts,
        refinements,
        f_vector,
    })
}

pub fn catalan(k: usize) -> u128 {
    // C_{i+1} = C_i * 2(2i+1) / (i+2)
    (0..k).fold(1u128, |c, i| c * (2 * (2 * i as u128 + 1)) / (i as u128 + 2))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// f-vector of the associahedron of a convex m-gon, indexed by dimension `0..=m-3`.
///
/// Dissections with k diagonals: `C(m-3, k) * C(m+k-1, k) / (k+1)`.
pub fn associahedron_f_vector(m: usize) -> Vec<u128> {
    assert!(m >= 3);
    let top = m - 3;
    (0..=top)
        .map(|dim| {
            let k = top - dim;
            binomial(m - 3, k) * binomial(m + k - 1, k) / (k as u128 + 1)
        })
        .collect()
}

/// f-vector of a cartesian product of polytopes.
pub fn product_f_vector(a: &[u128], b: &[u128]) -> Vec<u128> {
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn convex_hexagon_counts() {
        let k = build_complex(&fixtures::convex_polygon(6), 1000).unwrap();
        assert_eq!(k.f_vector(), vec![14, 21, 9, 1]);
        assert_eq!(k.dim(), 3);
        assert_eq!(k.euler_characteristic(), 1);
        assert_eq!(k.maximal_faces().len(), 1);
    }

    #[test]
    fn triangle_is_a_point() {
        let k = build_complex(&fixtures::convex_polygon(3), 10).unwrap();
        assert_eq!(k.faces().len(), 1);
        assert_eq!(k.dim(), 0);
        assert!(k.face(0).maximal);
    }

    #[test]
    fn hex_h_structure() {
        let h = fixtures::hex_h();
        let k = build_complex(&h, 1000).unwrap();
        assert_eq!(k.dim(), 2);
        assert_eq!(k.d(), 1);
        let (mins, d) = minimal_convex_diagonalizations(&h, 1000).unwrap();
        assert_eq!(d, 1);
        assert!(mins.contains(&vec![Diagonal::from_labels(2, 5)]));
        assert_eq!(k.f_vector(), vec![6, 6, 1]);
    }

    #[test]
    fn factorization_examples() {
        let hex = fixtures::convex_polygon(6);
        let f = face_factorization(&hex, &[Diagonal::from_labels(1, 4)]).unwrap();
        assert_eq!(f.edge_counts, vec![4, 4]);
        assert_eq!(f.refinements, 4);
        assert_eq!(f.f_vector, vec![4, 4, 1]);
        let f = face_factorization(&hex, &[Diagonal::from_labels(1, 3)]).unwrap();
        let mut counts = f.edge_counts.clone();
        counts.sort();
        assert_eq!(counts, vec![3, 5]);
        assert_eq!(f.refinements, 5);
        let h = fixtures::hex_h();
        assert_eq!(face_factorization(&h, &[Diagonal::from_labels(2, 5)]).unwrap().refinements, 4);
        assert_eq!(face_factorization(&h, &[Diagonal::from_labels(1, 4)]), Err(Error::NotConvexDiagonalization));
    }

    #[test]
    fn closed_forms() {
        assert_eq!((0..8).map(catalan).collect::<Vec<_>>(), vec![1, 1, 2, 5, 14, 42, 132, 429]);
        assert_eq!(associahedron_f_vector(5), vec![5, 5, 1]);
        assert_eq!(associahedron_f_vector(3), vec![1]);
        assert_eq!(product_f_vector(&[2, 1], &[2, 1]), vec![4, 4, 1]);
    }

    #[test]
    fn interleaving() {
        assert!(labels_interleave(Diagonal::from_labels(1, 4), Diagonal::from_labels(2, 6)));
        assert!(!labels_interleave(Diagonal::from_labels(1, 3), Diagonal::from_labels(4, 6)));
        assert!(!labels_interleave(Diagonal::from_labels(1, 3), Diagonal::from_labels(3, 6)));
    }
}
