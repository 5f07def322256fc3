//! Quivers with potentials: mutation, mutation-type classification, QP
//! reduction, truncated Jacobian algebras, King stability, E-invariants and
//! certificates of infinite families of stable modules.
//!
//! Conventions used throughout:
//! - vertices are 0-based in the API and 1-based in every file format;
//! - paths compose left to right, so the word `[a, b]` means `a` then `b`;
//! - modules are right modules: a representation assigns to `a: i -> j` a
//!   `d_j x d_i` matrix and the path `ab` acts by `M_b * M_a`;
//! - `Hom(P_i, P_j)` between indecomposable projectives is `e_j Λ e_i`, the
//!   span of paths from `j` to `i`.

pub mod canon;
pub mod catalog;
pub mod classify;
pub mod einv;
pub mod field;
pub mod jacobian;
pub mod json;
pub mod linalg;
pub mod path;
pub mod qp;
pub mod quiver;
pub mod reduce;
pub mod rep;
pub mod stability;
pub mod witness;

pub use quiver::{Arrow, Quiver, QuiverError};
