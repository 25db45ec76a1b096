//! Approximate weak common intervals over indeterminate strings.
//!
//! Pairs of intervals whose positions share characters with their common
//! character set up to `delta` exceptions are enumerated per reference
//! string with a sweep over left bounds, accelerated by per-pair bit-vector
//! tables, and assembled into maximal closed sets spanning a quorum of
//! strings.

pub mod assemble;
pub mod bench;
pub mod enumerate;
pub mod error;
pub mod filter;
pub mod fixtures;
pub mod index;
pub mod io;
pub mod model;
pub mod oracle;
pub mod planted;
pub mod pipeline;
pub mod random;

pub use assemble::{AwciGraph, AwciSet};
pub use enumerate::{AwciPair, EnumOptions, Enumerator, SweepState};
pub use error::{Error, Result};
pub use filter::{FilterState, RidgeTables};
pub use index::PairIndex;
pub use model::{Alphabet, CharId, Dataset, IndeterminateString, Interval, SearchParams};
