//! Representative benchmark-instance selection from landscape-feature vectors,
//! with tools to check that statistical algorithm comparisons run on the
//! selected suites are reproducible.

pub mod cluster_select;
pub mod datamodel;
pub mod dsc_stats;
pub mod ela_lite;
pub mod error;
pub mod graph_select;
pub mod harness;
pub mod pipeline;
pub mod rng;
pub mod similarity;

pub use error::{Error, Result};
