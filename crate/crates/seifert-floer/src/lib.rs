//! Exact-arithmetic toolkit for star-shaped plumbed 3-manifolds.
//!
//! The pipeline starts from Seifert invariants `M(e0; r1,...,rn)` over `S^2`,
//! builds the standard plumbing graph and its intersection form, runs the
//! lattice full-path algorithm on characteristic vectors, and derives from it
//! the complete list of negative-twisting tight contact structures together
//! with their twisting numbers, d3-invariants and contact-invariant
//! coordinates. Every computation is exact: all scalars are arbitrary
//! precision integers or rationals, never floats.
//!
//! Modules mirror the pipeline stages:
//! * [`numtheory`] — rationals, negative continued fractions, best upper
//!   approximations via the Stern–Brocot tree.
//! * [`plumbing`] — Seifert data, standard/dual graphs, exact intersection
//!   forms, manifold constructors, blow-down and subgraph detection.
//! * [`lattice`] — the full-path algorithm and its graded invariants.
//! * [`contact`] — realised vectors, twisting numbers by two independent
//!   algorithms, and the classification itself.
//! * [`report`] — table/JSON/CSV serialization and golden fixtures.
//! * [`cli`] — the command-line front end (also used by the `check` mode).
//! * [`selftest`] — the seeded self-validation corpus behind `check`.

pub mod cli;
pub mod contact;
pub mod error;
pub(crate) mod linalg;
pub mod lattice;
pub mod numtheory;
pub mod plumbing;
pub mod report;
pub mod selftest;

pub use error::{Error, Result};
