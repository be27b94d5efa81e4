//! Volumes and second moments of tropical Jacobians and Prym varieties.

pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod linear;
pub mod matroid;
pub mod moments;
pub mod morphism;
pub mod oracle;
pub mod poly;
pub mod random;
pub mod trigonal;

pub use error::{Error, Result};
