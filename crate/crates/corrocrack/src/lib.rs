//! Coupled reactive-transport / phase-field simulator of corrosion-induced
//! cracking in reinforced concrete under impressed current.

pub mod chem;
pub mod error;
pub mod mesh;
pub mod numerics;

pub use error::{Error, Result};
