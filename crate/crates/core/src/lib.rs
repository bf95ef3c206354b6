//! Exact enumeration of numerical semigroups by genus.
//!
//! The semigroup tree is rooted at ℕ₀; the children of a semigroup are
//! obtained by removing one of its minimal generators larger than the
//! Frobenius number. Walking it level by level counts `n_g`, which is
//! checked against the Fibonacci lower bound `2 F_g`, the upper bound
//! `1 + 3 * 2^(g-3)`, the Catalan numbers, and a brute-force oracle.

pub mod bounds;
pub mod cli;
pub mod oracle;
pub mod reference;
pub mod semigroup;
pub mod tree;
pub mod verify;

pub use bounds::{GenusRow, Multiset};
pub use semigroup::{NumericalSemigroup, SemigroupError};
pub use tree::{count_by_genus, enumerate_with_visitor, export_tree_dot, EnumConfig, TreeStats};
