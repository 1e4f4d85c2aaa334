//! Symbolic calculus for the generalised Basilica groups `G = B_s(O_m)` acting on the
//! m-adic rooted tree.
//!
//! Elements are freely reduced [`Word`]s over `a_0^{±1}, …, a_{s-1}^{±1}`; all structure
//! (sections, the action on vertices, level permutations, portraits) is computed from
//! the wreath recursion on demand, and equality is decided by
//! [`GroupParams::is_identity`].

pub mod calculus;
pub mod engine;
pub mod error;
pub mod family;
pub mod geodesics;
pub mod group;
pub mod noise;
pub mod projections;
pub mod suites;
pub mod vertex;
pub mod word;

pub use calculus::{AbelianizationVector, LevelAction, LevelPermutation, Portrait, WreathDecomposition};
pub use error::{Error, Result};
pub use group::{GroupParams, Limits, WordRecord};
pub use vertex::Vertex;
pub use word::{compose, invert, Letter, Word};
