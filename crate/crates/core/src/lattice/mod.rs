//! Exact lattice primitives: integer normal forms, membership, primitive
//! vectors and coset enumeration.

mod basis;
mod matrix;
mod snf;

pub use basis::{enumerate_residues, index, lattice_member, primitive_generator, LatticeBasis};
pub use matrix::{IntegerMatrix, Matrix, RationalMatrix};
pub use snf::{smith_normal_form, SmithForm};
