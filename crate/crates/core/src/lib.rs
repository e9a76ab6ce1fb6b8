//! Exact best- and worst-case comparison counts for top-down MergeSort, and
//! their link to the Blancmange (Takagi) function.
//!
//! All values are computed exactly: integers as `u128`, everything else as
//! [`Dyadic`] rationals `p/2^e`.

pub mod cli;
pub mod counts;
pub mod dyadic;
mod error;
pub mod fractal;
pub mod oracle;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
