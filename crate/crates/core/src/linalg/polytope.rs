//! Convex polytopes in vertex form, with exact conversion to and from
//! halfspace form by the double description method.

use num_traits::{One, Signed, Zero};

use super::lp::convex_weights;
use super::matrix::Matrix;
use super::scalar::{dot, primitive, Scalar, Vector};
use super::subspace::Subspace;

/// Convex hull of finitely many points, stored by its vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    ambient_dim: usize,
    vertices: Vec<Vector>,
}

/// Halfspace description `{x : eq_a x = eq_b, ineq_a x >= ineq_b}`.
#[derive(Clone, Debug)]
pub struct HalfspaceRep {
    pub equalities: Vec<(Vector, Scalar)>,
    pub inequalities: Vec<(Vector, Scalar)>,
}

impl HalfspaceRep {
    pub fn satisfies(&self, x: &[Scalar]) -> bool {
        self.equalities.iter().all(|(a, b)| dot(a, x) == *b) && self.inequalities.iter().all(|(a, b)| dot(a, x) >= *b)
    }

    /// Indices of the inequalities tight at `x`.
    pub fn active_set(&self, x: &[Scalar]) -> Vec<usize> {
        self.inequalities.iter().enumerate().filter(|(_, (a, b))| dot(a, x) == *b).map(|(i, _)| i).collect()
    }
}

impl Polytope {
    /// Wraps a list that is already known to consist of distinct vertices.
    pub fn from_vertices_unchecked(ambient_dim: usize, vertices: Vec<Vector>) -> Self {
        debug_assert!(vertices.iter().all(|v| v.len() == ambient_dim));
        Polytope { ambient_dim, vertices }
    }

    /// Convex hull of arbitrary points: duplicates and non-extremal points are
    /// removed, the original order of survivors is kept.
    pub fn hull_of(ambient_dim: usize, points: &[Vector]) -> Self {
        let mut distinct: Vec<Vector> = Vec::new();
        for p in points {
            assert_eq!(p.len(), ambient_dim);
            if !distinct.contains(p) {
                distinct.push(p.clone());
            }
        }
        let keep: Vec<bool> = (0..distinct.len()).map(|i| is_extremal_among(i, &distinct)).collect();
        let vertices = distinct.into_iter().zip(keep).filter(|(_, k)| *k).map(|(v, _)| v).collect();
        Polytope { ambient_dim, vertices }
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Polytope { ambient_dim, vertices: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: &[Scalar]) -> Option<usize> {
        self.vertices.iter().position(|w| w.as_slice() == v)
    }

    pub fn contains(&self, p: &[Scalar]) -> bool {
        hull_membership(p, self)
    }

    /// Vertices that are not in the convex hull of the remaining ones.
    pub fn non_extremal_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&i| !is_extremal_among(i, &self.vertices)).collect()
    }

    /// Facet description of the polytope relative to ambient space. The
    /// equalities cut out the affine hull.
    pub fn halfspaces(&self) -> HalfspaceRep {
        let n = self.ambient_dim;
        if self.vertices.is_empty() {
            // 0 = 1 is infeasible.
            return HalfspaceRep { equalities: vec![(vec![Scalar::zero(); n], Scalar::one())], inequalities: Vec::new() };
        }
        let lifted = HomogenizedHull::new(self);
        let mut equalities = Vec::new();
        for w in lifted.annihilator.row_vectors() {
            let b = -w[n].clone();
            equalities.push((w[..n].to_vec(), b));
        }
        let inequalities = lifted
            .facet_rows_in_ambient()
            .into_iter()
            .map(|w| {
                let b = -w[n].clone();
                (w[..n].to_vec(), b)
            })
            .collect();
        HalfspaceRep { equalities, inequalities }
    }

    /// Vertices lying on every facet that is tight at `p`: the vertex set of
    /// the smallest face containing `p`. `p` must lie in the polytope.
    pub fn minimal_face(&self, p: &[Scalar]) -> Vec<usize> {
        let h = self.halfspaces();
        let active = h.active_set(p);
        (0..self.vertices.len())
            .filter(|&i| active.iter().all(|&k| {
                let (a, b) = &h.inequalities[k];
                dot(a, &self.vertices[i]) == *b
            }))
            .collect()
    }

    /// Vertices sorted lexicographically.
    pub fn sorted(mut self) -> Self {
        self.vertices.sort();
        self
    }
}

fn is_extremal_among(i: usize, points: &[Vector]) -> bool {
    let others: Vec<Vector> = points.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
    convex_weights(&points[i], &others).is_none()
}

/// True iff `p` is a convex combination of the polytope's vertices, decided by
/// an exact feasibility LP.
pub fn hull_membership(p: &[Scalar], poly: &Polytope) -> bool {
    assert_eq!(p.len(), poly.ambient_dim, "point dimension must match the polytope");
    convex_weights(p, &poly.vertices).is_some()
}

/// The polytope lifted to the pointed cone generated by `(v, 1)`, expressed
/// in coordinates of its own linear span so that the cone is full
/// dimensional.
struct HomogenizedHull {
    /// Columns: a basis of the span of the lifted vertices.
    basis: Matrix,
    /// Left inverse of `basis`.
    left_inv: Matrix,
    /// Rows `w` with `w . (x, 1) = 0` on the affine hull.
    annihilator: Matrix,
    /// Facet normals of the cone in span coordinates.
    facets: Vec<Vector>,
}

impl HomogenizedHull {
    fn new(poly: &Polytope) -> Self {
        let n = poly.ambient_dim;
        let lifted: Vec<Vector> = poly
            .vertices
            .iter()
            .map(|v| {
                let mut y = v.clone();
                y.push(Scalar::one());
                y
            })
            .collect();
        let span = Subspace::span(n + 1, &lifted);
        let basis = span.basis_matrix();
        let bt = basis.transpose();
        let gram = &bt * &basis;
        let left_inv = &gram.inverse().expect("basis columns are independent") * &bt;
        let coords: Vec<Vector> = lifted.iter().map(|y| left_inv.apply(y)).collect();
        let facets = cone_extreme_rays(&Matrix::from_rows(&coords));
        let annihilator = span.annihilator();
        HomogenizedHull { basis, left_inv, annihilator, facets }
    }

    fn facet_rows_in_ambient(&self) -> Vec<Vector> {
        self.facets.iter().map(|a| primitive(&transpose_apply(&self.left_inv, a))).collect()
    }

    fn facet_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.facets)
    }
}

fn transpose_apply(m: &Matrix, a: &[Scalar]) -> Vector {
    // a^T M as a vector
    (0..m.cols()).map(|j| (0..m.rows()).fold(Scalar::zero(), |acc, i| acc + &a[i] * &m[(i, j)])).collect()
}

/// Vertices of `poly ∩ sub`.
///
/// The polytope is converted to facet form, the subspace equalities are
/// appended, and the resulting cone is converted back to extreme rays. An
/// empty intersection gives an empty polytope.
pub fn vertices_of_slice(poly: &Polytope, sub: &Subspace) -> Polytope {
    let n = poly.ambient_dim;
    assert_eq!(sub.ambient_dim(), n, "subspace must live in the polytope's ambient space");
    if poly.vertices.is_empty() {
        return Polytope::empty(n);
    }
    let hull = HomogenizedHull::new(poly);
    let w = sub.annihilator();
    // (W | 0) * basis: the subspace equalities in span coordinates.
    let mut w_lift = Matrix::zeros(w.rows(), n + 1);
    for i in 0..w.rows() {
        for j in 0..n {
            w_lift[(i, j)] = w[(i, j)].clone();
        }
    }
    let eq = &w_lift * &hull.basis;
    let kernel = if eq.rows() == 0 {
        (0..hull.basis.cols()).map(|i| super::scalar::unit_vec(hull.basis.cols(), i)).collect()
    } else {
        eq.nullspace()
    };
    if kernel.is_empty() {
        return Polytope::empty(n);
    }
    let k = Matrix::from_columns(hull.basis.cols(), &kernel);
    let g = &hull.facet_matrix() * &k;
    let rays = cone_extreme_rays(&g);
    let lift = &hull.basis * &k;
    let mut verts: Vec<Vector> = rays
        .iter()
        .map(|r| {
            let y = lift.apply(r);
            let t = y[n].clone();
            debug_assert!(t.is_positive());
            y[..n].iter().map(|x| x / &t).collect()
        })
        .collect();
    verts.sort();
    verts.dedup();
    Polytope::from_vertices_unchecked(n, verts)
}

/// Extreme rays of the pointed cone `{x : g x >= 0}` by the double
/// description method. `g` must have full column rank. Rays are returned as
/// primitive integer vectors in a deterministic order.
pub fn cone_extreme_rays(g: &Matrix) -> Vec<Vector> {
    let d = g.cols();
    if d == 0 {
        return Vec::new();
    }
    let m = g.rows();
    let rows = g.row_vectors();

    // Initial simplicial cone from d independent rows, taken greedily in
    // ascending index order.
    let mut chosen: Vec<usize> = Vec::new();
    let mut acc: Vec<Vector> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = acc.clone();
        trial.push(r.clone());
        if Matrix::from_rows(&trial).rank() == trial.len() {
            acc = trial;
            chosen.push(i);
            if chosen.len() == d {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), d, "constraint matrix must have full column rank");
    let inv = Matrix::from_rows(&acc).inverse().expect("independent rows");

    let words = m.div_ceil(64);
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let dir = primitive(&inv.column(j));
            let mut zeros = vec![0u64; words];
            for (k, &ci) in chosen.iter().enumerate() {
                if k != j {
                    set_bit(&mut zeros, ci);
                }
            }
            Ray { dir, zeros }
        })
        .collect();

    let mut processed = vec![false; m];
    for &c in &chosen {
        processed[c] = true;
    }
    for i in 0..m {
        if processed[i] {
            continue;
        }
        let slack: Vec<Scalar> = rays.iter().map(|r| dot(&rows[i], &r.dir)).collect();
        let mut next: Vec<Ray> = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (k, s) in slack.iter().enumerate() {
            if s.is_positive() {
                pos.push(k);
                next.push(rays[k].clone());
            } else if s.is_zero() {
                let mut r = rays[k].clone();
                set_bit(&mut r.zeros, i);
                next.push(r);
            } else {
                neg.push(k);
            }
        }
        for &p in &pos {
            for &q in &neg {
                let common = intersect(&rays[p].zeros, &rays[q].zeros);
                if popcount(&common) + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !is_subset(&common, &r.zeros));
                if !adjacent {
                    continue;
                }
                let sp = &slack[p];
                let sq = -&slack[q];
                let dir: Vector = rays[q].dir.iter().zip(&rays[p].dir).map(|(x, y)| x * sp + y * &sq).collect();
                let mut zeros = common;
                set_bit(&mut zeros, i);
                next.push(Ray { dir: primitive(&dir), zeros });
            }
        }
        rays = next;
        processed[i] = true;
    }
    let mut out: Vec<Vector> = rays.into_iter().map(|r| r.dir).collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Clone)]
struct Ray {
    dir: Vector,
    zeros: Vec<u64>,
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn intersect(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar::{frac, int, vec_from_i64};
    use crate::linalg::subspace::fixed_subspace;

    fn simplex_pair(d: usize) -> Polytope {
        let n = d * d;
        let verts = (0..n).map(|i| super::super::scalar::unit_vec(n, i)).collect();
        Polytope::from_vertices_unchecked(n, verts)
    }

    fn swap(d: usize) -> Matrix {
        let mut p = Matrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                p[(j * d + i, i * d + j)] = int(1);
            }
        }
        p
    }

    #[test]
    fn square_cone_rays() {
        // {x : x0 >= 0, x1 >= 0, x0 + x1 >= 0} has rays e0, e1.
        let g = Matrix::from_i64(3, 2, &[1, 0, 0, 1, 1, 1]);
        let rays = cone_extreme_rays(&g);
        assert_eq!(rays, vec![vec_from_i64(&[0, 1]), vec_from_i64(&[1, 0])]);
    }

    #[test]
    fn cube_cone_has_eight_rays() {
        // Cone over the cube [-1,1]^3 at height t: |x_i| <= t.
        let mut rows = Vec::new();
        for i in 0..3 {
            for s in [1, -1] {
                let mut r = vec![0i64; 4];
                r[i] = s;
                r[3] = 1;
                rows.push(vec_from_i64(&r));
            }
        }
        let rays = cone_extreme_rays(&Matrix::from_rows(&rows));
        assert_eq!(rays.len(), 8);
        assert!(rays.iter().all(|r| r[3] == int(1)));
    }

    #[test]
    fn membership_examples() {
        let p = simplex_pair(2);
        for v in p.vertices() {
            assert!(hull_membership(v, &p));
        }
        let mid = vec![frac(1, 2), frac(1, 2), int(0), int(0)];
        assert!(hull_membership(&mid, &p));
        // ([01]+[10])/2 is not in the hull of [00] and [11].
        let diag = Polytope::from_vertices_unchecked(4, vec![vec_from_i64(&[1, 0, 0, 0]), vec_from_i64(&[0, 0, 0, 1])]);
        let off = vec![int(0), frac(1, 2), frac(1, 2), int(0)];
        assert!(!hull_membership(&off, &diag));
    }

    #[test]
    fn slice_by_full_space_is_identity() {
        let p = simplex_pair(2);
        let s = vertices_of_slice(&p, &Subspace::full(4));
        assert_eq!(s.clone().sorted(), p.clone().sorted());
    }

    #[test]
    fn symmetric_slice_of_two_bits() {
        let s = vertices_of_slice(&simplex_pair(2), &fixed_subspace(&swap(2)));
        let expected = vec![
            vec_from_i64(&[0, 0, 0, 1]),
            vec![int(0), frac(1, 2), frac(1, 2), int(0)],
            vec_from_i64(&[1, 0, 0, 0]),
        ];
        assert_eq!(s.vertices(), expected.as_slice());
    }

    #[test]
    fn symmetric_slice_of_two_trits() {
        let s = vertices_of_slice(&simplex_pair(3), &fixed_subspace(&swap(3)));
        assert_eq!(s.len(), 6);
        let half = frac(1, 2);
        let diag = s.vertices().iter().filter(|v| v.iter().any(|x| *x == int(1))).count();
        let off = s.vertices().iter().filter(|v| v.iter().filter(|x| **x == half).count() == 2).count();
        assert_eq!((diag, off), (3, 3));
    }

    #[test]
    fn empty_slice() {
        // Segment from (1,0) to (0,1) does not meet the line spanned by (1,-1).
        let p = Polytope::from_vertices_unchecked(2, vec![vec_from_i64(&[1, 0]), vec_from_i64(&[0, 1])]);
        let s = vertices_of_slice(&p, &Subspace::span(2, &[vec_from_i64(&[1, -1])]));
        assert!(s.is_empty());
    }

    #[test]
    fn halfspaces_of_triangle() {
        let p = Polytope::from_vertices_unchecked(
            3,
            vec![vec_from_i64(&[1, 0, 0]), vec_from_i64(&[0, 1, 0]), vec_from_i64(&[0, 0, 1])],
        );
        let h = p.halfspaces();
        assert_eq!(h.inequalities.len(), 3);
        assert_eq!(h.equalities.len(), 1);
        assert!(h.satisfies(&[frac(1, 3), frac(1, 3), frac(1, 3)]));
        assert!(!h.satisfies(&[int(2), int(-1), int(0)]));
        assert_eq!(p.minimal_face(&[frac(1, 2), frac(1, 2), int(0)]), vec![0, 1]);
        assert_eq!(p.minimal_face(&vec_from_i64(&[0, 0, 1])), vec![2]);
    }

    #[test]
    fn hull_of_drops_interior_points() {
        let pts = vec![vec_from_i64(&[0, 0]), vec_from_i64(&[2, 0]), vec_from_i64(&[1, 0]), vec_from_i64(&[0, 2])];
        let p = Polytope::hull_of(2, &pts);
        assert_eq!(p.len(), 3);
        assert!(p.index_of(&vec_from_i64(&[1, 0])).is_none());
    }
}
