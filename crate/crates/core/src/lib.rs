//! Energy analysis of a two-dimensional Lax-Wendroff scheme on a quarter
//! plane with outflow extrapolation.

pub mod energy;
pub mod error;
pub mod grid;
pub mod regions;
pub mod scheme1d;
pub mod scheme2d;
pub mod stencils;

pub use error::{Error, Result};
pub use grid::{CflMode, CflPair, Field1D, Field2D, GridSpec, InteriorArray, InteriorValues};
