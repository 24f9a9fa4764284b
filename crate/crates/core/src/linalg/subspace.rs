use num_traits::Zero;

use super::matrix::Matrix;
use super::scalar::{Scalar, Vector};

/// A linear subspace of `Q^ambient_dim` given by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// Span of arbitrary vectors; dependent vectors are dropped.
    pub fn span(ambient_dim: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Subspace { ambient_dim, basis: Vec::new() };
        }
        let m = Matrix::from_columns(ambient_dim, vectors);
        let basis = m.pivot_columns().into_iter().map(|j| vectors[j].clone()).collect();
        Subspace { ambient_dim, basis }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| super::scalar::unit_vec(ambient_dim, i)).collect();
        Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        self.basis_matrix().solve(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Rows spanning the orthogonal complement: `v` lies in the subspace iff
    /// `W v = 0`.
    pub fn annihilator(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::identity(self.ambient_dim);
        }
        let bt = Matrix::from_rows(&self.basis);
        let rows = bt.nullspace();
        if rows.is_empty() {
            Matrix::zeros(0, self.ambient_dim)
        } else {
            Matrix::from_rows(&rows)
        }
    }

    /// Image of the subspace under a linear map.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        let imgs: Vec<Vector> = self.basis.iter().map(|v| m.apply(v)).collect();
        Subspace::span(m.rows(), &imgs)
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }
}

/// The fixed space `{v : m v = v}` of a square matrix, i.e. the kernel of
/// `m - I`.
pub fn fixed_subspace(m: &Matrix) -> Subspace {
    assert!(m.is_square(), "fixed_subspace requires a square matrix");
    let n = m.rows();
    let diff = m - &Matrix::identity(n);
    Subspace { ambient_dim: n, basis: diff.nullspace() }
}
