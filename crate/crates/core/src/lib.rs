//! Exact combinatorial invariants of Lattès-type maps on the (2,2,2,2)
//! pillow orbifold.

pub mod error;
pub mod budget;
pub mod classify;
pub mod cli;
pub mod exact;
pub mod expansion;
pub mod metrics;
pub mod orbifold;
pub mod pillow;
mod serde_num;

pub use error::{Error, Result};
