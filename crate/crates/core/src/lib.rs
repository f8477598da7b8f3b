//! Exact Maurer-Cartan solver, Hodge theory of ∧g and Cartan-model
//! certificates for reductive Lie algebras over ℚ.

#![allow(clippy::needless_range_loop)]

pub mod blade;
pub mod element;
pub mod error;
pub mod exterior;
pub mod gds;
pub mod graded;
pub mod hodge;
pub mod identities;
pub mod koszul;
pub mod lie;
pub mod linalg;
pub mod mc;
pub mod models;
pub mod poly;
pub mod random;
pub mod serial;
pub mod rational;
pub mod spaces;
pub mod weil;

pub use blade::{Blade, BladeBasis};
pub use element::{Elt, ExtElt, MixedElt, Side};
pub use error::{Error, Result};
pub use lie::LieAlgebra;
pub use linalg::{Mat, SparseVec, Subspace};
pub use poly::{Monomial, Poly};
pub use rational::Q;
