//! Exact representation theory of small symmetric groups: irreducible bases
//! over the word space, fractional-parentage tables, characters, inner
//! Clebsch-Gordan coefficients and symmetry-coupled matrix elements.

pub mod builder;
pub mod characters;
pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod matelem;
pub mod tables_io;
pub mod wordspace;

pub use error::{Error, Result};
