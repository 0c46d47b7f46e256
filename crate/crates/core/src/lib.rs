//! Exact invariants of algebraic tori presented by Galois lattices.
//!
//! A torus is described by the Galois action on its character lattice
//! ([`GaloisLattice`]). Locally (`local`) we compute the good-reduction
//! test, the Artin L-factor at `s = 1`, the component group of the Néron
//! model as `ker(1 - F)` on the inertia coinvariants of the cocharacter
//! lattice, and its torsion order. Globally (`global`) the local torsion
//! orders are assembled into the Shyr invariant.

pub mod abelian;
pub mod catalog;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod format;
pub mod global;
pub mod group;
pub mod isogeny;
pub mod lattice;
pub mod local;

pub use abelian::{FinAbGroup, IntMatrix};
pub use error::TorusError;
pub use group::{FiniteGroup, Subgroup};
pub use lattice::GaloisLattice;
