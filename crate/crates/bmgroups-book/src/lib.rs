//! Runs every Rust example in the guide (`book/`) as a doc-test.
//!
//! Each module below embeds one chapter as its documentation, so
//! `cargo test -p bmgroups-book --doc` compiles and executes all the
//! guide's code blocks against the current `bmgroups` API.  If a
//! chapter drifts out of sync with the library, the build breaks here.

#[doc = include_str!("../../../README.md")]
pub mod readme {}

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/datum-files.md")]
pub mod datum_files {}

#[doc = include_str!("../../../book/src/normal-forms.md")]
pub mod normal_forms {}

#[doc = include_str!("../../../book/src/subshift.md")]
pub mod subshift {}

#[doc = include_str!("../../../book/src/k-theory.md")]
pub mod k_theory {}

#[doc = include_str!("../../../book/src/census.md")]
pub mod census {}

#[doc = include_str!("../../../book/src/arithmetic.md")]
pub mod arithmetic {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
