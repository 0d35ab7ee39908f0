use std::collections::{HashMap, VecDeque};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::dual::{default_root_edge, dual_tree_of, orient_root_edge, DualTree};
use crate::complex::{is_convex_set, pieces, triangles, triangulation_sets, DiagSet, DiagonalIndex};
use crate::error::{Error, Result};
use crate::geom::{cross, triangle_area, Point, Region};
use crate::num::{format_rational, Rational};
use crate::visibility::Diagonal;

/// Doublings of the growth factor tried before giving up.
pub const MAX_DOUBLINGS: u32 = 64;
const BASE_GROWTH: i64 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaVector {
    pub triangulation: Vec<Diagonal>,
    /// `phi[v]`: total area of the triangles at vertex `v`.
    pub phi: Vec<Rational>,
}

fn phi_of(region: &Region, tris: &[[usize; 3]]) -> Vec<Rational> {
    let mut phi = vec![Rational::zero(); region.n()];
    for t in tris {
        let area = triangle_area(region.point(t[0]), region.point(t[1]), region.point(t[2]));
        for &v in t {
            phi[v] += &area;
        }
    }
    phi
}

pub fn area_vector(region: &Region, triangulation: &[Diagonal]) -> Result<AreaVector> {
    region.require_general_position()?;
    let index = DiagonalIndex::new(region);
    let set = index.set_from(triangulation)?;
    let tris = triangles(region, &index, &set)?;
    Ok(AreaVector { triangulation: index.to_diagonals(&set), phi: phi_of(region, &tris) })
}

pub fn inner(w: &[Rational], phi: &[Rational]) -> Rational {
    w.iter().zip(phi).map(|(a, b)| a * b).sum()
}

/// Heights whose lift makes one triangulation the unique minimizer of `<w, phi>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightCertificate {
    pub triangulation: Vec<Diagonal>,
    pub w: Vec<Rational>,
    /// Growth factor of the breadth-first heights that passed both checks.
    pub growth: Rational,
    pub doublings: u32,
}

impl HeightCertificate {
    /// Strict inequality against every competitor, all heights positive.
    pub fn verify(&self, target: &[Rational], competitors: &[&[Rational]]) -> bool {
        let own = inner(&self.w, target);
        self.w.iter().all(|x| x.is_positive()) && competitors.iter().all(|phi| inner(&self.w, phi) > own)
    }
}

/// Triangulations of a polygon with their triangles and area vectors.
struct Triangulations {
    index: DiagonalIndex,
    sets: Vec<DiagSet>,
    tris: Vec<Vec<[usize; 3]>>,
    phis: Vec<Vec<Rational>>,
}

impl Triangulations {
    fn new(region: &Region, cap: usize) -> Result<Triangulations> {
        region.require_general_position()?;
        if region.hole_count() > 0 {
            return Err(Error::HolesNotSupported);
        }
        let index = DiagonalIndex::new(region);
        let sets = triangulation_sets(region, &index, cap)?;
        let tris = sets.iter().map(|s| triangles(region, &index, s)).collect::<Result<Vec<_>>>()?;
        let phis = tris.iter().map(|t| phi_of(region, t)).collect();
        Ok(Triangulations { index, sets, tris, phis })
    }

    fn position(&self, set: &DiagSet) -> Option<usize> {
        self.sets.iter().position(|s| s == set)
    }

    fn others(&self, skip: impl Fn(usize) -> bool) -> Vec<&[Rational]> {
        (0..self.sets.len()).filter(|&i| !skip(i)).map(|i| self.phis[i].as_slice()).collect()
    }
}

/// Lifted `d` lies strictly above the plane through lifted `a, b, c` (counterclockwise).
fn above_plane(region: &Region, w: &[Rational], [a, b, c]: [usize; 3], d: usize) -> bool {
    let (pa, pb, pc, pd) = (region.point(a), region.point(b), region.point(c), region.point(d));
    let lhs = cross(pa, pb, pc) * &w[d];
    let rhs = cross(pb, pc, pd) * &w[a] + cross(pc, pa, pd) * &w[b] + cross(pa, pb, pd) * &w[c];
    lhs > rhs
}

/// Check (a): the lift is convex across every interior diagonal.
fn locally_convex(region: &Region, tree: &DualTree, w: &[Rational]) -> bool {
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, tri) in tree.triangles.iter().enumerate() {
        for k in 0..3 {
            owner.insert((tri[k], tri[(k + 1) % 3]), t);
        }
    }
    tree.triangles.iter().all(|tri| {
        (0..3).all(|k| {
            let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
            match owner.get(&(b, a)) {
                None => true,
                Some(&s) => {
                    let d = tree.triangles[s].iter().copied().find(|&x| x != a && x != b).unwrap();
                    above_plane(region, w, [a, b, c], d)
                }
            }
        })
    })
}

fn breadth_first_heights(n: usize, tree: &DualTree, growth: &Rational) -> Vec<Rational> {
    let mut m = vec![Rational::zero(); tree.len()];
    let mut level = Rational::one();
    for &t in &tree.order {
        m[t] = level.clone();
        level *= growth;
    }
    let mut w: Vec<Option<Rational>> = vec![None; n];
    for (t, tri) in tree.triangles.iter().enumerate() {
        for &v in tri {
            if w[v].as_ref().is_none_or(|x| m[t] < *x) {
                w[v] = Some(m[t].clone());
            }
        }
    }
    w.into_iter().map(|x| x.expect("every vertex lies on a triangle")).collect()
}

fn certify(region: &Region, all: &Triangulations, t: usize, root_edge: (usize, usize)) -> Result<HeightCertificate> {
    let tree = dual_tree_of(region, all.tris[t].clone(), root_edge)?;
    let competitors = all.others(|i| i == t);
    let mut growth = Rational::from_integer(BASE_GROWTH.into());
    for doublings in 0..=MAX_DOUBLINGS {
        let w = breadth_first_heights(region.n(), &tree, &growth);
        if locally_convex(region, &tree, &w) {
            let cert = HeightCertificate {
                triangulation: all.index.to_diagonals(&all.sets[t]),
                w,
                growth: growth.clone(),
                doublings,
            };
            if cert.verify(&all.phis[t], &competitors) {
                return Ok(cert);
            }
        }
        growth *= Rational::from_integer(2.into());
    }
    Err(Error::CertificateNotFound { doublings: MAX_DOUBLINGS })
}

pub fn height_certificate(
    region: &Region,
    triangulation: &[Diagonal],
    root_edge: Option<(usize, usize)>,
    cap: usize,
) -> Result<HeightCertificate> {
    let all = Triangulations::new(region, cap)?;
    let root_edge = root_edge.unwrap_or_else(|| default_root_edge(region));
    orient_root_edge(region, root_edge)?;
    let set = all.index.set_from(triangulation)?;
    triangles(region, &all.index, &set)?;
    let t = all.position(&set).ok_or(Error::NotATriangulation)?;
    certify(region, &all, t, root_edge)
}

/// Heights that tie exactly the triangulations above one convex diagonalization and
/// put every other triangulation strictly higher.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceCertificate {
    pub diagonals: Vec<Diagonal>,
    pub w: Vec<Rational>,
    /// Common value of `<w, phi>` on the face.
    pub value: Rational,
}

/// Affine function `alpha x + beta y + gamma`.
#[derive(Clone, Debug)]
struct Affine([Rational; 3]);

impl Affine {
    fn at(&self, p: &Point) -> Rational {
        &self.0[0] * &p.x + &self.0[1] * &p.y + &self.0[2]
    }

    /// Adds `lambda * cross(from, to, x)`, which vanishes on the line and is positive on its left.
    fn fold(&self, from: &Point, to: &Point, lambda: &Rational) -> Affine {
        let dx = &to.x - &from.x;
        let dy = &to.y - &from.y;
        let gx = -&dy * lambda;
        let gy = &dx * lambda;
        let g0 = (&dy * &from.x - &dx * &from.y) * lambda;
        Affine([&self.0[0] + gx, &self.0[1] + gy, &self.0[2] + g0])
    }
}

/// `face` must be exactly the set of triangulations containing some convex
/// diagonalization `D`; heights are affine on each piece of `D` and fold upward across
/// each diagonal of `D`, with fold strengths growing along a breadth-first order of the pieces.
pub fn face_support_certificate(region: &Region, face: &[Vec<Diagonal>], cap: usize) -> Result<FaceCertificate> {
    let all = Triangulations::new(region, cap)?;
    let mut members = Vec::with_capacity(face.len());
    for t in face {
        let set = all.index.set_from(t)?;
        triangles(region, &all.index, &set)?;
        members.push(all.position(&set).ok_or(Error::NotATriangulation)?);
    }
    members.sort_unstable();
    members.dedup();
    let Some(first) = members.first() else { return Err(Error::NotAFace) };
    let d = members.iter().fold(all.sets[*first].clone(), |acc, &i| acc.intersection(&all.sets[i]));
    if !is_convex_set(region, &all.index, &d) {
        return Err(Error::NotAFace);
    }
    let above: Vec<usize> = (0..all.sets.len()).filter(|&i| d.is_subset(&all.sets[i])).collect();
    if above != members {
        return Err(Error::NotAFace);
    }

    let cycles = pieces(region, &all.index, &d);
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (q, c) in cycles.iter().enumerate() {
        for k in 0..c.len() {
            owner.insert((c[k], c[(k + 1) % c.len()]), q);
        }
    }
    let (ra, rb) = orient_root_edge(region, default_root_edge(region))?;
    let root = owner[&(ra, rb)];
    // breadth-first order of pieces with the directed diagonal through which each is entered
    let mut entry: Vec<Option<(usize, usize, usize)>> = vec![None; cycles.len()];
    let mut order = vec![root];
    let mut seen = vec![false; cycles.len()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(q) = queue.pop_front() {
        let c = &cycles[q];
        for k in 0..c.len() {
            let (a, b) = (c[k], c[(k + 1) % c.len()]);
            if let Some(&s) = owner.get(&(b, a)) {
                if !seen[s] {
                    seen[s] = true;
                    entry[s] = Some((q, a, b));
                    order.push(s);
                    queue.push_back(s);
                }
            }
        }
    }

    let competitors = all.others(|i| members.binary_search(&i).is_ok());
    let mut growth = Rational::from_integer(BASE_GROWTH.into());
    for _ in 0..=MAX_DOUBLINGS {
        let mut f: Vec<Option<Affine>> = vec![None; cycles.len()];
        f[root] = Some(Affine([Rational::zero(), Rational::zero(), Rational::zero()]));
        let mut lambda = Rational::one();
        for &q in &order[1..] {
            let (parent, a, b) = entry[q].unwrap();
            // the child lies left of b -> a
            f[q] = Some(f[parent].as_ref().unwrap().fold(region.point(b), region.point(a), &lambda));
            lambda *= &growth;
        }
        let mut w = vec![Rational::zero(); region.n()];
        for (q, c) in cycles.iter().enumerate() {
            for &v in c {
                w[v] = f[q].as_ref().unwrap().at(region.point(v));
            }
        }
        let low = w.iter().min().cloned().unwrap();
        if low < Rational::one() {
            let shift = Rational::one() - low;
            for x in w.iter_mut() {
                *x += &shift;
            }
        }
        let value = inner(&w, &all.phis[members[0]]);
        let ties = members.iter().all(|&i| inner(&w, &all.phis[i]) == value);
        if ties && competitors.iter().all(|phi| inner(&w, phi) > value) {
            return Ok(FaceCertificate { diagonals: all.index.to_diagonals(&d), w, value });
        }
        growth *= Rational::from_integer(2.into());
    }
    Err(Error::CertificateNotFound { doublings: MAX_DOUBLINGS })
}

/// Dimension of the affine hull of a point set (exact Gaussian elimination).
pub fn affine_rank(points: &[Vec<Rational>]) -> usize {
    let Some(base) = points.first() else { return 0 };
    let mut rows: Vec<Vec<Rational>> =
        points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    let cols = base.len();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, pivot);
        let prow = rows[rank].clone();
        for r in rows.iter_mut().skip(rank + 1) {
            if !r[col].is_zero() {
                let f = &r[col] / &prow[col];
                for (x, p) in r.iter_mut().zip(&prow) {
                    *x -= &f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug)]
pub struct SecondarySummary {
    pub area: Rational,
    pub vectors: Vec<AreaVector>,
    pub certificates: Vec<HeightCertificate>,
    pub all_distinct: bool,
    /// Every vector sums to three times the area.
    pub sum_rule: bool,
    pub affine_rank: usize,
}

impl SecondarySummary {
    pub fn to_json(&self) -> serde_json::Value {
        let strs = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        let vectors: Vec<serde_json::Value> = self
            .vectors
            .iter()
            .zip(&self.certificates)
            .map(|(a, c)| {
                json!({
                    "triangulation": a.triangulation.iter().map(|d| d.labels()).collect::<Vec<_>>(),
                    "phi": strs(&a.phi),
                    "certificate": { "w": strs(&c.w) },
                })
            })
            .collect();
        json!({
            "area": format_rational(&self.area),
            "affineRank": self.affine_rank,
            "allDistinct": self.all_distinct,
            "sumRule": self.sum_rule,
            "areaVectors": vectors,
        })
    }
}

/// Area vectors of all triangulations, one height certificate each (computed in parallel),
/// distinctness, the sum rule and the affine rank.
pub fn secondary_polytope_summary(
    region: &Region,
    root_edge: Option<(usize, usize)>,
    cap: usize,
) -> Result<SecondarySummary> {
    let all = Triangulations::new(region, cap)?;
    let root_edge = root_edge.unwrap_or_else(|| default_root_edge(region));
    orient_root_edge(region, root_edge)?;
    let certificates =
        (0..all.sets.len()).into_par_iter().map(|t| certify(region, &all, t, root_edge)).collect::<Result<Vec<_>>>()?;
    let area = region.area();
    let three_area = &area * Rational::from_integer(3.into());
    let sum_rule = all.phis.iter().all(|p| p.iter().sum::<Rational>() == three_area);
    let mut sorted = all.phis.clone();
    sorted.sort();
    sorted.dedup();
    let all_distinct = sorted.len() == all.phis.len();
    let affine_rank = affine_rank(&all.phis);
    let vectors = all
        .sets
        .iter()
        .zip(&all.phis)
        .map(|(s, p)| AreaVector { triangulation: all.index.to_diagonals(s), phi: p.clone() })
        .collect();
    Ok(SecondarySummary { area, vectors, certificates, all_distinct, sum_rule, affine_rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::num::{int, ratio};

    fn diags(labels: &[(usize, usize)]) -> Vec<Diagonal> {
        labels.iter().map(|&(a, b)| Diagonal::from_labels(a, b)).collect()
    }

    #[test]
    fn unit_square_area_vectors() {
        let sq = fixtures::unit_square();
        let h = ratio(1, 2);
        assert_eq!(area_vector(&sq, &diags(&[(1, 3)])).unwrap().phi, vec![int(1), h.clone(), int(1), h.clone()]);
        assert_eq!(area_vector(&sq, &diags(&[(2, 4)])).unwrap().phi, vec![h.clone(), int(1), h.clone(), int(1)]);
        assert_eq!(area_vector(&sq, &[]).unwrap_err(), Error::NotATriangulation);
    }

    #[test]
    fn triangle_area_vector() {
        let t = fixtures::convex_polygon(3);
        let a = t.area();
        assert_eq!(area_vector(&t, &[]).unwrap().phi, vec![a.clone(), a.clone(), a]);
        let c = height_certificate(&t, &[], None, 10).unwrap();
        assert!(c.w.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn square_certificate() {
        let sq = fixtures::unit_square();
        let c = height_certificate(&sq, &diags(&[(1, 3)]), None, 10).unwrap();
        let own = area_vector(&sq, &diags(&[(1, 3)])).unwrap().phi;
        let other = area_vector(&sq, &diags(&[(2, 4)])).unwrap().phi;
        assert!(inner(&c.w, &own) < inner(&c.w, &other));
    }

    #[test]
    fn summaries() {
        let s = secondary_polytope_summary(&fixtures::convex_polygon(5), None, 100).unwrap();
        assert_eq!((s.vectors.len(), s.affine_rank, s.all_distinct, s.sum_rule), (5, 2, true, true));
        let s = secondary_polytope_summary(&fixtures::unit_square(), None, 100).unwrap();
        assert_eq!(s.affine_rank, 1);
        let s = secondary_polytope_summary(&fixtures::hex_h(), None, 100).unwrap();
        assert_eq!((s.vectors.len(), s.affine_rank), (6, 3));
    }

    #[test]
    fn face_certificates() {
        let hex = fixtures::convex_polygon(6);
        let all = crate::complex::enumerate_triangulations(&hex, 100).unwrap();
        let d = Diagonal::from_labels(1, 4);
        let face: Vec<Vec<Diagonal>> = all.iter().filter(|t| t.contains(&d)).cloned().collect();
        assert_eq!(face.len(), 4);
        let c = face_support_certificate(&hex, &face, 100).unwrap();
        assert_eq!(c.diagonals, vec![d]);
        let full = face_support_certificate(&hex, &all, 100).unwrap();
        assert!(full.diagonals.is_empty());
        assert!(full.w.iter().all(|x| *x == full.w[0]));
        assert_eq!(face_support_certificate(&hex, &face[..3], 100).unwrap_err(), Error::NotAFace);
    }

    #[test]
    fn rank_of_points() {
        let p = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
        assert_eq!(affine_rank(&[p(&[0, 0]), p(&[1, 1]), p(&[2, 2])]), 1);
        assert_eq!(affine_rank(&[p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]), 2);
        assert_eq!(affine_rank(&[p(&[3, 3])]), 0);
    }
}
