//! Runs every code snippet in the guide (`book/src/*.md`) as a doc-test,
//! so `cargo test` fails whenever the book drifts from the library.
//!
//! mdBook renders the same files; this crate exists only because mdBook
//! cannot test snippets against path dependencies.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/exact-geometry.md")]
pub mod exact_geometry {}

#[doc = include_str!("../../../book/src/colorings-and-search.md")]
pub mod colorings_and_search {}

#[doc = include_str!("../../../book/src/cnf-export.md")]
pub mod cnf_export {}

#[doc = include_str!("../../../book/src/contextuality.md")]
pub mod contextuality {}

#[doc = include_str!("../../../book/src/twin-argument.md")]
pub mod twin_argument {}

#[doc = include_str!("../../../book/src/spacetime.md")]
pub mod spacetime {}

#[doc = include_str!("../../../book/src/quantum-oracle.md")]
pub mod quantum_oracle {}

#[doc = include_str!("../../../book/src/cli-reference.md")]
pub mod cli_reference {}
