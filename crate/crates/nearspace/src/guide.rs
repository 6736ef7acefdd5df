//! The long-form guide, one module per chapter.
//!
//! The Markdown sources live under `book/` and also build a rendered
//! mdBook (`mdbook build book`). Including them here turns every code
//! block in the book into a doc test, so `cargo test` keeps the guide
//! and the library in lockstep.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/finite-fields.md")]
pub mod finite_fields {}

#[doc = include_str!("../../../book/src/nearfields.md")]
pub mod nearfields {}

#[doc = include_str!("../../../book/src/near-vector-spaces.md")]
pub mod near_vector_spaces {}

#[doc = include_str!("../../../book/src/generation.md")]
pub mod generation {}

#[doc = include_str!("../../../book/src/counting.md")]
pub mod counting_guide {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/file-formats.md")]
pub mod file_formats {}
