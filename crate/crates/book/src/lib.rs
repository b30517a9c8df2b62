//! The guide in `book/src` compiled as doc comments, so that `cargo test`
//! runs every snippet against the current library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/lce.md")]
pub mod lce {}
#[doc = include_str!("../../../book/src/partitioning-sets.md")]
pub mod partitioning_sets {}
#[doc = include_str!("../../../book/src/randomized.md")]
pub mod randomized {}
#[doc = include_str!("../../../book/src/deterministic.md")]
pub mod deterministic {}
#[doc = include_str!("../../../book/src/lce-index.md")]
pub mod lce_index {}
#[doc = include_str!("../../../book/src/sparse-suffix.md")]
pub mod sparse_suffix {}
#[doc = include_str!("../../../book/src/difference-cover.md")]
pub mod difference_cover {}
#[doc = include_str!("../../../book/src/index-files.md")]
pub mod index_files {}
#[doc = include_str!("../../../book/src/testing.md")]
pub mod testing {}
