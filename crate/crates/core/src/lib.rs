//! Exact representation theory of gl(m|n): atypicality, Kazhdan-Lusztig
//! polynomials, composition factors, characters and dimensions of finite
//! dimensional irreducible modules.

pub mod character;
pub mod dimension;
pub mod error;
pub mod kl;
pub mod perm;
pub mod qpoly;
pub mod verify;
pub mod weight;

pub use error::{Error, Result};
pub use perm::Permutation;
pub use qpoly::QPoly;
pub use weight::{analyze, AtypicalStructure, BlockKey, DominantWitness, Weight};
