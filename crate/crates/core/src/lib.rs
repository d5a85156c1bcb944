//! Moments of deformed-area statistics of Dyck excursions and bridges.

pub mod costs;
pub mod error;
pub mod moments;
pub mod numerics;
pub mod oracle;
pub mod refdist;
pub mod sampler;
pub mod series;
pub mod trees;

pub use error::{Error, Result};
