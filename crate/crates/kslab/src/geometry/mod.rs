//! Exact arithmetic over Q(√2) and projective ray geometry.
//!
//! Orthogonality decisions in this crate are made here, with no floating
//! point anywhere: components are `a + b·√2` with arbitrary-precision
//! rational `a`, `b`.

mod quadext;
mod ray;

pub use quadext::{parse_rational, QuadExt, Rational};
pub use ray::{rank, Ray};
