//! The user guide, one module per chapter of the book in `book/`.
//!
//! Including the chapters here makes every fenced Rust block in the book a
//! doc-test of this crate, so `cargo test --doc` keeps the guide honest.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/fusion-data.md")]
pub mod fusion_data {}

#[doc = include_str!("../../../book/src/semiring.md")]
pub mod semiring {}

#[doc = include_str!("../../../book/src/rings.md")]
pub mod rings {}

#[doc = include_str!("../../../book/src/grading.md")]
pub mod grading {}

#[doc = include_str!("../../../book/src/cocenter.md")]
pub mod cocenter {}

#[doc = include_str!("../../../book/src/simplicity.md")]
pub mod simplicity {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
