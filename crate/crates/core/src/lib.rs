//! Exact computations for multiparameter quantum affine spaces and their
//! semiclassical limits.
//!
//! The quantum algebra is encoded by an alternating [`Bicharacter`] in
//! exponent form. From it the crate computes the stratified primitive
//! spectrum ([`spectrum`]), the Poisson structure of the semiclassical limit
//! ([`limit`]), and the cocycle-twist picture for graded algebras ([`toric`]).

pub mod algebra;
pub mod bichar;
pub mod cli;
pub mod error;
pub mod input;
pub mod lattice;
pub mod limit;
pub mod poly;
pub mod spectrum;
pub mod toric;

pub use bichar::{Bicharacter, ExponentValue, Subset};
pub use error::{Error, Result};
