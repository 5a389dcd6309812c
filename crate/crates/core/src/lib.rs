//! Matchings in k-partite k-uniform hypergraphs under multipartite codegree
//! conditions.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] holds the vertex/edge model, codegrees, link graphs and the
//!   matching validator that everything else builds on.
//! * [`oracles`] are exact exponential-time solvers used as references.
//! * [`bipartite`] is the Hall-theorem engine (maximum matching, canonical
//!   Hall violators and the robust-matchability dichotomy).
//! * [`rainbow`] contains the rainbow-matching algorithms for families of
//!   k-graphs with degree and multiplicity conditions.
//! * [`constructions`] generates the extremal instances and random
//!   instances, and hosts the remove-one-add-two augmentation matcher.
//! * [`driver`] assembles everything into the constructive pipeline for
//!   perfect-or-near-perfect matchings when all but one codegree is small.
//!
//! Class indexes are 0-based throughout (`0..k`); positions within a class
//! are `0..n_i`. Every "arbitrary choice" resolves to the lexicographically
//! smallest candidate so runs are reproducible.
//!
//! The crate is `no_std` (it needs `alloc`). The default `std` feature only
//! adds wall-clock enforcement of [`OracleBudget::max_seconds`].
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bipartite;
pub mod budget;
pub mod constructions;
pub mod driver;
pub mod error;
pub mod graph;
pub mod oracles;
pub mod rainbow;
pub mod rational;

pub use budget::{Mode, OracleBudget, Search};
pub use error::{Error, Result};
pub use graph::{
    CrossingTuple, DegreeProfile, Edge, KPartiteHypergraph, Matching, MatchingViolation, Position, VertexRef,
};
pub use rational::Rational;
