//! Integer invariant factors of sparse matrices.
//!
//! Unit pivots are eliminated sparsely (a Schur complement step over the integers keeps the
//! invariant factors) in checked `i64`; on overflow the elimination restarts over `BigInt`.
//! Whatever has no unit pivot left goes through a dense Smith normal form.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

trait Coef: Clone + std::fmt::Debug {
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `a - f * b`, `None` on overflow.
    fn mul_sub(a: &Self, f: &Self, b: &Self) -> Option<Self>;
    /// `a * b` for a unit `b`.
    fn times_unit(a: &Self, b: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Coef for i64 {
    fn nil() -> i64 {
        0
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn mul_sub(a: &i64, f: &i64, b: &i64) -> Option<i64> {
        a.checked_sub(f.checked_mul(*b)?)
    }
    fn times_unit(a: &i64, b: &i64) -> i64 {
        a * b
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn nil() -> BigInt {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn mul_sub(a: &BigInt, f: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a - f * b)
    }
    fn times_unit(a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

/// Sparse matrix stored by rows with a column-to-rows index.
struct Sparse<C> {
    rows: Vec<BTreeMap<usize, C>>,
    cols: Vec<BTreeSet<usize>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
}

impl<C: Coef> Sparse<C> {
    fn new(rows: usize, cols: usize, entries: &[(usize, usize, C)]) -> Self {
        let mut m = Sparse {
            rows: vec![BTreeMap::new(); rows],
            cols: vec![BTreeSet::new(); cols],
            row_alive: vec![true; rows],
            col_alive: vec![true; cols],
        };
        for (r, c, v) in entries {
            if !v.is_nil() {
                m.rows[*r].insert(*c, v.clone());
                m.cols[*c].insert(*r);
            }
        }
        m
    }

    /// Eliminates unit pivots until none is left; returns how many were used.
    fn eliminate_units(&mut self) -> Result<usize, Overflow> {
        let mut units = 0;
        loop {
            let mut progress = false;
            for c in 0..self.cols.len() {
                if !self.col_alive[c] {
                    continue;
                }
                let pivot = self.cols[c]
                    .iter()
                    .copied()
                    .filter(|&r| self.rows[r][&c].is_unit())
                    .min_by_key(|&r| self.rows[r].len());
                let Some(r) = pivot else { continue };
                self.pivot(r, c)?;
                units += 1;
                progress = true;
            }
            if !progress {
                return Ok(units);
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) -> Result<(), Overflow> {
        let p = self.rows[r][&c].clone();
        let pivot_row: Vec<(usize, C)> = self.rows[r].iter().map(|(&k, v)| (k, v.clone())).collect();
        let others: Vec<usize> = self.cols[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            // a_ic / p equals a_ic * p for a unit p
            let f = C::times_unit(&self.rows[i][&c], &p);
            for (k, v) in &pivot_row {
                let cur = self.rows[i].get(k).cloned();
                let updated = match &cur {
                    Some(a) => C::mul_sub(a, &f, v).ok_or(Overflow)?,
                    None => C::mul_sub(&C::nil(), &f, v).ok_or(Overflow)?,
                };
                if updated.is_nil() {
                    self.rows[i].remove(k);
                    self.cols[*k].remove(&i);
                } else {
                    self.rows[i].insert(*k, updated);
                    self.cols[*k].insert(i);
                }
            }
        }
        for (k, _) in &pivot_row {
            self.cols[*k].remove(&r);
        }
        self.rows[r].clear();
        self.row_alive[r] = false;
        self.col_alive[c] = false;
        self.cols[c].clear();
        Ok(())
    }

    /// Remaining nonzero block as a dense matrix.
    fn residual(&self) -> Vec<Vec<BigInt>> {
        let live_cols: Vec<usize> =
            (0..self.cols.len()).filter(|&c| self.col_alive[c] && !self.cols[c].is_empty()).collect();
        let pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        (0..self.rows.len())
            .filter(|&r| self.row_alive[r] && !self.rows[r].is_empty())
            .map(|r| {
                let mut row = vec![<BigInt as Zero>::zero(); live_cols.len()];
                for (c, v) in &self.rows[r] {
                    row[pos[c]] = v.to_big();
                }
                row
            })
            .collect()
    }
}

/// Nonzero invariant factors (ascending, each dividing the next) of the integer matrix
/// given by `(row, col, value)` triples.
pub fn invariant_factors(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Vec<BigInt> {
    let mut small = Sparse::<i64>::new(rows, cols, entries);
    let (units, rest) = match small.eliminate_units() {
        Ok(u) => (u, small.residual()),
        Err(Overflow) => {
            let big: Vec<(usize, usize, BigInt)> = entries.iter().map(|&(r, c, v)| (r, c, BigInt::from(v))).collect();
            let mut m = Sparse::<BigInt>::new(rows, cols, &big);
            let u = m.eliminate_units().unwrap_or_else(|_| unreachable!("BigInt never overflows"));
            (u, m.residual())
        }
    };
    let mut factors = vec![BigInt::one(); units];
    factors.extend(dense_smith_diagonal(rest));
    normalize(factors)
}

/// Diagonal of a Smith-like form (not yet divisibility-normalized), nonzero entries only.
fn dense_smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    if m == 0 {
        return Vec::new();
    }
    let n = a[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0][t..n].iter_mut().zip(&top[t][t..n]) {
                        *x -= &q * y;
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let v = &row[j] - &q * &row[t];
                        row[j] = v;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
            // move the smallest remaining entry of row/column t to the pivot position
            let mut best = (t, t);
            for i in t..m {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.1 == t {
                a.swap(t, best.0);
            } else {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Turns any diagonal into the divisibility chain via repeated `(gcd, lcm)` replacement.
fn normalize(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for x in d.iter_mut() {
        *x = x.abs();
    }
    let k = d.len();
    for i in 0..k {
        for j in i + 1..k {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(m: &[&[i64]]) -> (usize, usize, Vec<(usize, usize, i64)>) {
        let mut e = Vec::new();
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    e.push((i, j, v));
                }
            }
        }
        (m.len(), m[0].len(), e)
    }

    fn factors(m: &[&[i64]]) -> Vec<i64> {
        let (r, c, e) = dense(m);
        invariant_factors(r, c, &e).iter().map(|b| i64::try_from(b).unwrap()).collect()
    }

    #[test]
    fn textbook_examples() {
        assert_eq!(factors(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), vec![2, 6, 12]);
        assert_eq!(factors(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[&[1, 1], &[1, 1]]), vec![1]);
        assert_eq!(factors(&[&[0, 0], &[0, 0]]), Vec::<i64>::new());
    }

    #[test]
    fn projective_plane_torsion() {
        // boundary of the 2-cell of RP^2 on one edge: multiplication by 2
        assert_eq!(factors(&[&[2]]), vec![2]);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let f = invariant_factors(2, 2, &[(0, 0, 1), (0, 1, big), (1, 0, big), (1, 1, 1)]);
        assert_eq!(f[0], BigInt::one());
        assert_eq!(f[1], BigInt::from(big) * BigInt::from(big) - 1);
    }
}
