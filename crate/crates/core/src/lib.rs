//! Longest common extension (LCE) queries and sparse suffix sorting in
//! space sublinear in the text length.
//!
//! The text is read-only. Every structure in this crate stores positions of
//! a *partitioning set* `P` (plus small per-block summaries) instead of
//! anything proportional to `n`. Four constructions of `P` are offered:
//!
//! * [`partition_rand::build_rand`]: minimizers of a random min-wise hash,
//!   expected size `O(n/τ)`.
//! * [`partition_rand::build_rand_whp`]: the same set, retried until the size
//!   bound is certified.
//! * [`partition_det::build_det`]: deterministic, via iterated alphabet
//!   reduction.
//! * [`dcover_lce::DcIndex`]: a sparser set obtained by thinning a fine
//!   deterministic set with a difference cover.
//!
//! Positions are 1-based throughout; position `0` and positions past `n`
//! read as a virtual sentinel smaller than every byte.
//!
//! ```
//! use sslce::{lce_index::LceIndex, partition_rand, Text};
//!
//! let text = Text::from("abracadabra abracadabra");
//! let pset = partition_rand::build_rand(&text, 4, 7).unwrap();
//! let index = LceIndex::build(&text, &pset).unwrap();
//! assert_eq!(index.lce(&text, 1, 13).unwrap(), 11);
//! ```

pub mod corpus;
pub mod dcover_lce;
mod error;
pub mod hashing;
pub mod index;
pub mod lce_index;
pub mod meter;
pub mod oracle;
pub mod partition;
pub mod partition_det;
pub mod partition_rand;
pub mod periodicity;
pub mod serial;
pub mod sparse_suffix;
pub mod suffix_core;
mod text;

pub use error::{Error, Result};
pub use partition::{Mode, PartitioningSet};
pub use text::Text;
