//! Moment graphs and quantum cohomology of Bott-Samelson varieties, computed
//! in exact arithmetic.

pub mod cohomology;
pub mod conjo;
pub mod effcone;
pub mod error;
pub mod momentgraph;
pub mod quantum;
pub mod rootsys;

pub use error::{Error, Result};
