//! Finite lattices and their derivations.
//!
//! A derivation on a lattice `L` is a map `d: L → L` satisfying
//! `d(x∧y) = (d(x)∧y) ∨ (x∧d(y))`. This crate builds finite lattices,
//! enumerates and classifies their derivations, studies the pointwise-ordered
//! poset of derivations, and catalogs all small lattices so that statements
//! about "every lattice" can be checked exhaustively.

pub mod catalog;
pub mod classify;
pub mod derivation;
pub mod derposet;
mod error;
pub mod io;
pub mod iso;
pub mod lattice;
pub mod verify;

pub use derivation::{Derivation, DerivationSet, OperatorMap};
pub use error::{Axiom, Error, Result};
pub use iso::Permutation;
pub use lattice::{Elem, FinLattice};
