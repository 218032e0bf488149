//! Even lattices, discriminant forms and the classification of prime-order
//! non-symplectic automorphisms of K3^[2]-type lattices.
//!
//! The layers, bottom up:
//! - [`matrix`]: exact integer/rational matrices (Smith form, determinant, signature)
//! - [`lattice`]: even lattices, the named catalog, discriminant groups
//! - [`forms`]: finite quadratic forms, Gauss-sum signatures, isomorphism, existence
//! - [`classification`]: p-elementary existence, embeddings into `U^3 + E8^2 + <-2>`, recognition
//! - [`enumeration`]: admissible `(p, m, a)` rows with fixed-locus invariants
//! - [`involutions`]: 2-elementary invariants and the involution embedding diagrams
//! - [`fixed_locus`]: fixed loci of natural automorphisms on Hilbert squares

pub mod arith;
pub mod classification;
pub mod enumeration;
pub mod fixed_locus;
pub mod forms;
pub mod involutions;
pub mod lattice;
pub mod matrix;
