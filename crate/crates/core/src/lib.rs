//! Exact deformation quantization of Lie-algebra duals and SU(2) coadjoint orbits.

pub mod cli;
pub mod error;
pub mod expr;
pub mod files;
pub mod fuzzy;
pub mod glue;
pub mod liealg;
pub mod orbit;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod star;
pub mod suites;
pub mod uea;
pub mod weyl;

pub use error::{Error, Result};
