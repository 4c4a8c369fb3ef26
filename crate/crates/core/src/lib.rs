//! Constructions and exhaustive verification of cutting blocking sets in
//! finite projective spaces, and the minimal linear codes they define.

pub mod cli;
pub mod codes;
pub mod constructions;
pub mod error;
pub mod finfield;
pub mod hermitian;
pub mod linalg;
pub mod projgeom;
pub mod sublines;
pub mod verify;

pub use error::{Error, Result};
