//! Exact computations for Chern-Weil theory and the Weil model of
//! equivariant de Rham cohomology.

pub mod chern_weil;
pub mod equivariant;
pub mod error;
pub mod expr;
pub mod forms;
pub mod functor;
pub mod invariants;
pub mod liealg;
pub mod linalg;
pub mod poly;
pub mod polyfunctor;
pub mod rational;
pub mod sampling;
pub mod schur;
pub mod verify;
pub mod weil;

pub use error::{Error, Result};
pub use liealg::{AlgebraVector, LieAlgebra};
pub use rational::Q;
pub use weil::{WeilElement, WeilMonomial};
