//! Generalized truncations of multigraphs and constructive class I edge
//! colorings for them, with an exact chromatic-index oracle for checking.

pub mod canonical;
pub mod catalog;
pub mod coloring;
pub mod complete;
pub mod cyclic;
pub mod error;
pub mod io;
pub mod multigraph;
pub mod strong;
pub mod sun;
pub mod truncation;

pub use error::{Error, Result};
