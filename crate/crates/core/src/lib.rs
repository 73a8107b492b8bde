//! Exact tools for sigma-symmetric matrices over small finite fields:
//! pivot complementation, cut-rank, linear rank-width, linked layouts,
//! linear encodings, pivot-minor obstruction search, representable
//! matroid path-width, and a small-scale model of linear s-profiles.

pub mod bounds;
pub mod error;
pub mod field;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod matroid;
pub mod minors;
pub mod profiles;
pub mod width;

/// Opaque identifier of a matrix row/column, graph vertex or matroid element.
pub type Label = u32;

pub use error::{Error, Result};
pub use field::{Elem, Field, Sesqui, SigmaSpec};
pub use graph::{BoundariedGraph, SGraph};
pub use matrix::FMatrix;
