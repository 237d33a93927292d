//! kslab: a verification laboratory for value assignments on finite
//! direction sets and the relativistic reasoning that rules them out.
//!
//! The crate decides, with exact arithmetic, whether a finite set of spin
//! directions admits a {0,1} assignment obeying the squared-spin rules
//! (exactly one 0 per orthogonal triad, never two orthogonal 0s), exhibits
//! the apparatus-context loophole that evades the no-go result, and checks
//! the light-cone causality argument that closes the loophole again.
//!
//! Module map:
//! - [`geometry`]: exact Q(√2) scalars and projective rays.
//! - [`ks`]: orthogonality structure, coloring search, DIMACS CNF export.
//! - [`contextual`]: context-dependent value tables and the twin-argument
//!   pipeline.
//! - [`spacetime`]: exact light-cone predicates, cone-intersection growth,
//!   and the common-past region.
//! - [`quantum`]: floating-point spin-1 operator checks and the two-particle
//!   singlet correlations.
//! - [`catalog`]: built-in direction sets and the on-disk set format.

pub mod catalog;
pub mod contextual;
pub mod error;
pub mod geometry;
pub mod ks;
pub mod quantum;
pub mod spacetime;

pub use error::Error;
pub use geometry::{QuadExt, Rational, Ray};
pub use ks::{
    build_structure, search_colorings, Coloring, DirectionSet, OrthoStructure, SearchMode,
    SearchReport, Status,
};
