//! Rank-one hyperbolic geometry over the reals, complex numbers and
//! quaternions in the Siegel-domain model.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod cygan;
pub mod error;
mod float;
pub mod ford;
pub mod isometries;
pub mod jmodule;
pub mod linalg;
pub mod matrix;
pub mod models;
pub mod sampling;
pub mod scalar;
pub mod spheres;

pub use error::{Error, Result};
pub use jmodule::{CvPair, ModuleStructure, ModuleVector};
pub use scalar::{Field, Scalar};
