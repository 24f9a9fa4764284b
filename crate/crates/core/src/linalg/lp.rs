//! Exact feasibility LP: phase-one simplex with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::scalar::{Scalar, Vector};

/// Finds some `x >= 0` with `a x = b`, or `None` when the system is
/// infeasible. Exact; terminates by Bland's anti-cycling rule.
pub fn feasible_point(a: &Matrix, b: &[Scalar]) -> Option<Vector> {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), m);
    if m == 0 {
        return Some(vec![Scalar::zero(); n]);
    }
    let width = n + m + 1;
    let rhs = n + m;
    let mut t = vec![vec![Scalar::zero(); width]; m];
    for i in 0..m {
        let flip = b[i].is_negative();
        for j in 0..n {
            t[i][j] = if flip { -a[(i, j)].clone() } else { a[(i, j)].clone() };
        }
        t[i][n + i] = Scalar::one();
        t[i][rhs] = if flip { -b[i].clone() } else { b[i].clone() };
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![Scalar::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[rhs] -= &row[rhs];
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Scalar)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase-one objective is bounded below by zero, so a leaving row exists.
        let (r, _) = leave.expect("phase-one LP cannot be unbounded");
        pivot(&mut t, &mut cost, r, enter);
        basis[r] = enter;
    }

    if !cost[rhs].is_zero() {
        return None;
    }
    let mut x = vec![Scalar::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][rhs].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Scalar>], cost: &mut [Scalar], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for x in t[r].iter_mut() {
        *x *= &inv;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                *x -= p * &f;
            }
        }
    }
    if !cost[c].is_zero() {
        let f = cost[c].clone();
        for (x, p) in cost.iter_mut().zip(&prow) {
            *x -= p * &f;
        }
    }
}

/// Convex weights expressing `p` in terms of `points`, if `p` lies in their
/// convex hull.
pub fn convex_weights(p: &[Scalar], points: &[Vector]) -> Option<Vector> {
    let dim = p.len();
    if points.is_empty() {
        return None;
    }
    let mut a = Matrix::zeros(dim + 1, points.len());
    for (j, v) in points.iter().enumerate() {
        assert_eq!(v.len(), dim);
        for i in 0..dim {
            a[(i, j)] = v[i].clone();
        }
        a[(dim, j)] = Scalar::one();
    }
    let mut b = p.to_vec();
    b.push(Scalar::one());
    feasible_point(&a, &b)
}
