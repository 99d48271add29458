//! Minimally self-adjusting binary search trees and per-access audits of the
//! sum-of-logs potential.

pub mod analysis;
pub mod bst;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod harness;
pub mod locality;
pub mod par;
pub mod transformers;

pub use bst::{AfterTree, BeforePath, Key, Side, TreeArena, TreeBuilder};
pub use error::{Error, Result};
pub use transformers::Transformer;
