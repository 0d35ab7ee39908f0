use std::cmp::Ordering;
use std::collections::HashMap;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::geom::Region;
use crate::visibility::{self, Diagonal};

/// Fixed-width bitset over the diagonal indices of one region.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiagSet(SmallVec<[u64; 2]>);

impl DiagSet {
    pub fn empty(universe: usize) -> DiagSet {
        DiagSet(SmallVec::from_elem(0, universe.div_ceil(64).max(1)))
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn with(&self, i: usize) -> DiagSet {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    pub fn without(&self, i: usize) -> DiagSet {
        let mut s = self.clone();
        s.remove(i);
        s
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &DiagSet) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &DiagSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &DiagSet) -> DiagSet {
        DiagSet(self.0.iter().zip(other.0.iter()).map(|(a, b)| a | b).collect())
    }

    pub fn intersection(&self, other: &DiagSet) -> DiagSet {
        DiagSet(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & b).collect())
    }

    pub fn difference(&self, other: &DiagSet) -> DiagSet {
        DiagSet(self.0.iter().zip(other.0.iter()).map(|(a, b)| a & !b).collect())
    }

    pub fn symmetric_difference_len(&self, other: &DiagSet) -> usize {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a ^ b).count_ones() as usize).sum()
    }

    /// Set bits in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Canonical order on sets: by size, then lexicographically on the sorted members.
pub fn canonical_cmp(a: &DiagSet, b: &DiagSet) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

/// All diagonals of a region with their crossing and incidence structure.
///
/// Diagonal indices follow the lexicographic order of the 0-based endpoint pairs.
#[derive(Clone, Debug)]
pub struct DiagonalIndex {
    diags: Vec<Diagonal>,
    lookup: HashMap<Diagonal, usize>,
    crossing: Vec<DiagSet>,
    incident: Vec<Vec<usize>>,
    /// Diagonals at each vertex in counterclockwise order inside the region, starting next to `next(v)`.
    around: Vec<Vec<usize>>,
}

impl DiagonalIndex {
    pub fn new(region: &Region) -> DiagonalIndex {
        let diags = visibility::diagonals(region);
        let m = diags.len();
        let lookup = diags.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let mut crossing = vec![DiagSet::empty(m); m];
        for i in 0..m {
            for j in i + 1..m {
                if visibility::diagonals_cross(region, diags[i], diags[j]) {
                    crossing[i].insert(j);
                    crossing[j].insert(i);
                }
            }
        }
        let n = region.n();
        let mut incident = vec![Vec::new(); n];
        for (i, d) in diags.iter().enumerate() {
            incident[d.a].push(i);
            incident[d.b].push(i);
        }
        let around = (0..n)
            .map(|v| {
                let mut list = incident[v].clone();
                list.sort_by(|&x, &y| sweep_cmp(region, v, diags[x].other(v), diags[y].other(v)));
                list
            })
            .collect();
        DiagonalIndex { diags, lookup, crossing, incident, around }
    }

    pub fn len(&self) -> usize {
        self.diags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diags.is_empty()
    }

    pub fn diagonal(&self, i: usize) -> Diagonal {
        self.diags[i]
    }

    pub fn diagonals(&self) -> &[Diagonal] {
        &self.diags
    }

    pub fn index_of(&self, d: Diagonal) -> Option<usize> {
        self.lookup.get(&d).copied()
    }

    pub fn crossing(&self, i: usize) -> &DiagSet {
        &self.crossing[i]
    }

    #[inline]
    pub fn crosses(&self, i: usize, j: usize) -> bool {
        self.crossing[i].contains(j)
    }

    /// `i` crosses no member of `set`.
    #[inline]
    pub fn compatible(&self, set: &DiagSet, i: usize) -> bool {
        !set.intersects(&self.crossing[i])
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn around(&self, v: usize) -> &[usize] {
        &self.around[v]
    }

    pub fn empty_set(&self) -> DiagSet {
        DiagSet::empty(self.len())
    }

    pub fn to_diagonals(&self, set: &DiagSet) -> Vec<Diagonal> {
        set.iter().map(|i| self.diags[i]).collect()
    }

    pub fn labels(&self, set: &DiagSet) -> Vec<[usize; 2]> {
        set.iter().map(|i| self.diags[i].labels()).collect()
    }

    /// Validates a diagonal list: every member is a diagonal and no two cross.
    pub fn set_from(&self, diagonals: &[Diagonal]) -> Result<DiagSet> {
        let mut set = self.empty_set();
        for &d in diagonals {
            let i = self.index_of(d).ok_or(Error::NotADiagonal(d.a + 1, d.b + 1))?;
            set.insert(i);
        }
        let members = set.to_vec();
        for (x, &i) in members.iter().enumerate() {
            for &j in &members[x + 1..] {
                if self.crosses(i, j) {
                    let (p, q) = (self.diags[i], self.diags[j]);
                    return Err(Error::CrossingDiagonals(p.a + 1, p.b + 1, q.a + 1, q.b + 1));
                }
            }
        }
        Ok(set)
    }
}

/// Counterclockwise order of the directions `v -> x` and `v -> y` in the sweep that starts
/// at `v -> next(v)`. Needs general position.
pub fn sweep_cmp(region: &Region, v: usize, x: usize, y: usize) -> Ordering {
    if x == y {
        return Ordering::Equal;
    }
    let start = region.next(v);
    let half = |w: usize| if w == start || region.orient(v, start, w) > 0 { 0 } else { 1 };
    half(x).cmp(&half(y)).then_with(|| {
        if x == start {
            Ordering::Less
        } else if y == start {
            Ordering::Greater
        } else if region.orient(v, x, y) > 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    })
}
