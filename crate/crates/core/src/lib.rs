//! Indistinguishable particle types in general probabilistic theories.
//!
//! Two pipelines share one set of theories:
//!
//! * [`orbits`]: particle types as orbits of symmetric pure states under the
//!   transformations that keep symmetric states symmetric;
//! * [`idempotent`]: particle types as the sectors of the symmetrisation
//!   idempotent, found by splitting it and refining into orthogonal parts.
//!
//! Polytopal theories use exact rational arithmetic ([`linalg`]); quantum
//! systems use complex floating point ([`quantum`]).

pub mod catalog;
pub mod cli;
pub mod error;
pub mod gpt;
pub mod group;
pub mod idempotent;
pub mod linalg;
pub mod orbits;
pub mod quantum;
pub mod report;
pub mod theory_file;
pub mod verify;

pub use error::{Error, Result};
