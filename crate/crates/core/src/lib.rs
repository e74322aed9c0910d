//! Group ring matrices over finite groups and their block diagonalization.
//!
//! A finite group is a multiplication table over a fixed listing. An element
//! `w = Σ α_i g_i` of the complex group ring maps to the matrix `σ(w)` whose
//! `(i, j)` entry is `α` at `g_i⁻¹ g_j`. Central primitive idempotents built
//! from the character table give an invertible `P` with `P⁻¹σ(w)P`
//! block diagonal for every `w`; for abelian groups an explicit Fourier-type
//! `P` diagonalizes completely.

pub mod abelian;
pub mod blockdiag;
pub mod error;
pub mod group;
pub mod idempotents;
pub mod io;
pub mod linalg;
pub mod ring;

pub use abelian::{abelian_diagonal, abelian_diagonalizer, AbelianFactors};
pub use blockdiag::{block_transform, build_diagonalizer, BlockDiagonal, Diagonalizer};
pub use error::{Error, Result};
pub use group::{build_group, conjugacy_classes, FiniteGroup, GroupSpec};
pub use idempotents::{character_table, idempotents_for, CharacterSource, CharacterTable, IdempotentSet};
pub use linalg::CMatrix;
pub use ring::{involution, is_rg_matrix, ring_multiply, sigma, GroupRingElement};
