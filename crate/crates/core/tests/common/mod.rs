//! Independent exact helpers for oracles, written without the crate's own
//! elimination or LP code.
#![allow(dead_code)]

use gpt_particles::linalg::{Scalar, Vector};
use num_traits::{One, Signed, Zero};

pub fn q(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

/// Row echelon form in place; returns the pivot columns.
fn echelon(rows: &mut [Vec<Scalar>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot).skip(c) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of the matrix whose columns are `vectors`.
pub fn rank_of(vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let dim = vectors[0].len();
    let mut rows: Vec<Vec<Scalar>> = (0..dim).map(|i| vectors.iter().map(|v| v[i].clone()).collect()).collect();
    echelon(&mut rows).len()
}

/// Unique solution of `A x = b` (columns of `A` given), if the columns are
/// independent and the system is consistent.
pub fn unique_solution(columns: &[Vector], b: &[Scalar]) -> Option<Vector> {
    let k = columns.len();
    let mut rows: Vec<Vec<Scalar>> = (0..b.len())
        .map(|i| columns.iter().map(|c| c[i].clone()).chain(std::iter::once(b[i].clone())).collect())
        .collect();
    let pivots = echelon(&mut rows);
    if pivots.len() != k || pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Scalar::zero(); k];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = rows[r][k].clone();
        for j in c + 1..k {
            acc -= &rows[r][j] * &x[j];
        }
        x[c] = acc / &rows[r][c];
    }
    Some(x)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in &mut with {
        s.push(n - 1);
    }
    with.extend(subsets(n - 1, k));
    with
}

/// Carathéodory search: `p` is in the hull iff some affinely independent
/// subset of at most `dim + 1` points has nonnegative barycentric weights.
pub fn in_hull_brute_force(p: &[Scalar], points: &[Vector]) -> bool {
    let dim = p.len();
    let lift = |v: &[Scalar]| -> Vector { v.iter().cloned().chain(std::iter::once(Scalar::one())).collect() };
    let target = lift(p);
    for k in 1..=points.len().min(dim + 1) {
        for s in subsets(points.len(), k) {
            let cols: Vec<Vector> = s.iter().map(|&i| lift(&points[i])).collect();
            if let Some(w) = unique_solution(&cols, &target) {
                if w.iter().all(|x| !x.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

/// All ways to split `items` into two nonempty parts (each unordered pair
/// once).
pub fn bipartitions(items: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let n = items.len();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for mask in 1..(1u32 << (n - 1)) {
        let (mut a, mut b) = (vec![items[n - 1]], Vec::new());
        for (i, &x) in items[..n - 1].iter().enumerate() {
            if mask & (1 << i) != 0 {
                b.push(x);
            } else {
                a.push(x);
            }
        }
        out.push((a, b));
    }
    out
}
