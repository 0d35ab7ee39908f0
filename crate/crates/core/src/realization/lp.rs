//! A small exact simplex solver and the hull certificates built on it.

use num_traits::{One, Signed, Zero};

use crate::num::Rational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Unbounded,
}

/// Maximizes `c.x` subject to `A x <= b`, `x >= 0`, with `b >= 0` so the origin is feasible.
/// Dense tableau with Bland's rule, which cannot cycle.
pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    assert!(b.iter().all(|v| !v.is_negative()), "right-hand side must be nonnegative");
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row = vec![Rational::zero(); width];
            row[..n].clone_from_slice(&a[i]);
            row[n + i] = Rational::one();
            row[width - 1] = b[i].clone();
            row
        })
        .collect();
    // objective row holds reduced costs -c
    let mut obj = vec![Rational::zero(); width];
    for j in 0..n {
        obj[j] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, r)) => ratio < *r || (ratio == *r && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else { return LpOutcome::Unbounded };
        let pivot = t[row][enter].clone();
        for v in t[row].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[row].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i != row && !r[enter].is_zero() {
                let f = r[enter].clone();
                for (x, p) in r.iter_mut().zip(&prow) {
                    *x -= &f * p;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&prow) {
                *x -= &f * p;
            }
        }
        basis[row] = enter;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if j < n {
            x[j] = t[i][width - 1].clone();
        }
    }
    LpOutcome::Optimal { x, value: obj[width - 1].clone() }
}

fn dot(c: &[Rational], p: &[Rational]) -> Rational {
    c.iter().zip(p).map(|(a, b)| a * b).sum()
}

/// Maximizes the margin `s` of a functional `c` in `[-1, 1]^d` subject to
/// `c.(q - p) <= 0` for `q` in `ties` and `c.(q - p) + s <= 0` for `q` in `strict`.
fn best_margin(p: &[Rational], ties: &[&[Rational]], strict: &[&[Rational]]) -> Option<Vec<Rational>> {
    let d = p.len();
    let vars = 2 * d + 1;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut push = |q: &[Rational], s: bool, sign: i64| {
        let mut row = vec![Rational::zero(); vars];
        for l in 0..d {
            let diff = (&q[l] - &p[l]) * Rational::from_integer(sign.into());
            row[l] = diff.clone();
            row[d + l] = -diff;
        }
        if s {
            row[2 * d] = Rational::one();
        }
        a.push(row);
        b.push(Rational::zero());
    };
    for q in ties {
        push(q, false, 1);
        push(q, false, -1);
    }
    for q in strict {
        push(q, true, 1);
    }
    for j in 0..vars {
        let mut row = vec![Rational::zero(); vars];
        row[j] = Rational::one();
        a.push(row);
        b.push(Rational::one());
    }
    let mut obj = vec![Rational::zero(); vars];
    obj[2 * d] = Rational::one();
    match maximize(&a, &b, &obj) {
        LpOutcome::Optimal { x, value } if value.is_positive() => Some((0..d).map(|l| &x[l] - &x[d + l]).collect()),
        _ => None,
    }
}

/// A functional `c` with `c.points[i] > c.points[j]` for every `j != i`, if one exists
/// (that is, if `points[i]` is a vertex of the convex hull). The result is re-checked exactly.
pub fn extremality_certificate(points: &[Vec<Rational>], i: usize) -> Option<Vec<Rational>> {
    let others: Vec<&[Rational]> =
        points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.as_slice()).collect();
    let c = best_margin(&points[i], &[], &others)?;
    let top = dot(&c, &points[i]);
    others.iter().all(|q| dot(&c, q) < top).then_some(c)
}

/// A functional maximized exactly on `{points[i], points[j]}`, if one exists (that is, if
/// the two points span an edge of the convex hull). Re-checked exactly.
pub fn hull_edge_certificate(points: &[Vec<Rational>], i: usize, j: usize) -> Option<Vec<Rational>> {
    let others: Vec<&[Rational]> =
        points.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, q)| q.as_slice()).collect();
    let c = best_margin(&points[i], &[&points[j]], &others)?;
    let top = dot(&c, &points[i]);
    (dot(&c, &points[j]) == top && others.iter().all(|q| dot(&c, q) < top)).then_some(c)
}
