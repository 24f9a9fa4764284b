//! Exact rational linear algebra and polytope geometry.

pub mod lp;
pub mod matrix;
pub mod matroid;
pub mod polytope;
pub mod scalar;
pub mod subspace;

pub use matrix::{tensor_product, Matrix};
pub use matroid::matroid_components;
pub use polytope::{cone_extreme_rays, hull_membership, vertices_of_slice, HalfspaceRep, Polytope};
pub use scalar::{Scalar, Vector};
pub use subspace::{fixed_subspace, Subspace};
