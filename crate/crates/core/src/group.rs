//! Finite groups given by generators: breadth-first closure over any element
//! type with a composition law.

use std::collections::HashSet;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

/// Something that can be multiplied: `a.compose(b)` is "apply `b`, then `a`".
pub trait GroupElement: Clone + Eq + Hash {
    fn compose(&self, rhs: &Self) -> Self;
}

impl GroupElement for Matrix {
    fn compose(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

/// Permutation of `0..n` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }
}

impl GroupElement for Perm {
    fn compose(&self, rhs: &Self) -> Self {
        Perm(rhs.0.iter().map(|&i| self.0[i as usize]).collect())
    }
}

/// All elements generated by `generators`, in breadth-first discovery order
/// starting from `identity`. Fails once more than `max_size` elements have
/// been found.
pub fn closure<E: GroupElement>(identity: E, generators: &[E], max_size: usize) -> Result<Vec<E>> {
    let mut seen: HashSet<E> = HashSet::new();
    let mut order = vec![identity.clone()];
    seen.insert(identity);
    let mut head = 0;
    while head < order.len() {
        let h = order[head].clone();
        head += 1;
        for g in generators {
            let x = g.compose(&h);
            if !seen.contains(&x) {
                if order.len() >= max_size {
                    return Err(Error::ClosureExceeded { limit: max_size });
                }
                seen.insert(x.clone());
                order.push(x);
            }
        }
    }
    Ok(order)
}

/// The permutation induced by `m` on a finite point set, or `None` if some
/// image is not in the set.
pub fn induced_permutation(m: &Matrix, points: &[Vector]) -> Option<Perm> {
    let index: std::collections::HashMap<&Vector, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut images = Vec::with_capacity(points.len());
    for p in points {
        let q = m.apply(p);
        images.push(*index.get(&q)? as u32);
    }
    let distinct: HashSet<&u32> = images.iter().collect();
    if distinct.len() != points.len() {
        return None;
    }
    Some(Perm(images))
}

/// Recovers the linear map that sends each spanning point `points[i]` to
/// `points[perm[i]]`. `points` must span the space.
pub fn matrix_of_permutation(perm: &Perm, points: &[Vector], dim: usize) -> Matrix {
    let src = Matrix::from_columns(dim, points);
    let basis = src.pivot_columns();
    assert_eq!(basis.len(), dim, "points must span the space");
    let b = src.select_columns(&basis);
    let imgs: Vec<Vector> = basis.iter().map(|&i| points[perm.apply(i)].clone()).collect();
    let target = Matrix::from_columns(dim, &imgs);
    &target * &b.inverse().expect("basis is invertible")
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_identity() {
        let g = closure(Matrix::identity(3), &[Matrix::identity(3)], 10).unwrap();
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn closure_of_transposition_and_cycle_is_s4() {
        let t = Perm(vec![1, 0, 2, 3]);
        let c = Perm(vec![1, 2, 3, 0]);
        let g = closure(Perm::identity(4), &[t, c], 100).unwrap();
        assert_eq!(g.len(), 24);
    }

    #[test]
    fn closure_bound_is_enforced() {
        let c = Perm(vec![1, 2, 3, 4, 0]);
        assert_eq!(closure(Perm::identity(5), &[c], 3), Err(Error::ClosureExceeded { limit: 3 }));
    }

    #[test]
    fn permutation_composition_order() {
        let a = Perm(vec![1, 0, 2]);
        let b = Perm(vec![0, 2, 1]);
        // apply b first: 0->0->1
        assert_eq!(a.compose(&b).apply(0), 1);
        assert_eq!(a.compose(&a.inverse()), Perm::identity(3));
    }

    #[test]
    fn permutations_enumerated_lexicographically() {
        let p = all_permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }
}
