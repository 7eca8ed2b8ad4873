//! Exact workbench for folded quivers and folded cluster algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`qcore`]: skew-symmetric exchange data, mutation, canonical forms and
//!   mutation-class enumeration.
//! * [`folding`]: partitions of nodes into groups, group mutation, validity of
//!   foldings and their classification as standard or special.
//! * [`symalg`]: exact multivariate rational functions over the integers.
//! * [`clusters`]: seeds, exchange graphs, cluster complexes and face data.
//! * [`surface`]: the once-punctured polygon under the special flip rules.
//! * [`catalog`]: every named quiver and folding used by the test-suite.
//!
//! Enumerations run level-synchronous breadth-first searches whose frontier
//! expansion is data parallel (rayon). Results are merged in a fixed order so
//! the output never depends on the number of worker threads.

pub mod catalog;
pub mod clusters;
pub mod folding;
pub mod qcore;
pub mod surface;
pub mod symalg;

mod search;

pub use catalog::{Catalog, CatalogEntry};
pub use clusters::{ExchangeGraph, FoldedSeed, Seed, SeedMode};
pub use folding::FoldedQuiver;
pub use qcore::{CanonicalKey, Quiver};
pub use symalg::{Polynomial, RationalFunction};
