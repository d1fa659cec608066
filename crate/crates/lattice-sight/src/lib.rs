//! Command-line front end and file formats for [`lattice_sight_core`].
//!
//! The core crate is `no_std`; everything that touches threads, files or
//! text encodings lives here.

pub mod cli;
mod error;
pub mod formats;
pub mod parallel;
pub mod render;

pub use error::AppError;
