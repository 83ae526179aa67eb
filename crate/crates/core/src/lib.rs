//! Exact computational kernels for automorphisms of free groups, nerve
//! complexes and rational Helly-type checks.

pub mod automorphism;
pub mod bounds;
pub mod convex;
pub mod fixture;
pub mod genset;
pub mod group_word;
pub mod matrix;
pub mod simplicial;
pub mod smith;
pub mod words;

pub use automorphism::{AtomicName, AtomicWord, AutError, Automorphism, Order};
pub use group_word::GroupWord;
pub use words::{Letter, Word, WordError};
