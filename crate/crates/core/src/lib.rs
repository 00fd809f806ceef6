//! Finite and layered hyperfields: axiom checking, constructions,
//! classification, isomorphism search and enumeration.

pub mod catalog;
pub mod classify;
pub mod constructions;
pub mod error;
pub mod isoenum;
pub mod kernel;
pub mod ordered;
pub mod series;

pub use error::{Error, Result};
