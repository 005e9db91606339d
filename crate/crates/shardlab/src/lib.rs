//! shardlab: an exact engine for the combinatorics and polyhedral geometry of
//! simplicial hyperplane arrangements and finite Coxeter groups — shards, the
//! shard intersection order, lattice congruences and their quotients,
//! Cambrian congruences, noncrossing partition lattices, and pulling
//! triangulations.

// index-driven loops are the clearest form for the dense linear algebra and
// parallel-array code here
#![allow(clippy::needless_range_loop)]

pub mod cambrian;
pub mod congruence;
pub mod coxeter;
pub mod export;
pub mod geom;
pub mod ingest;
pub mod num;
pub mod poset;
pub mod shardorder;
pub mod shards;
pub mod triangulation;
pub mod verify;
pub mod weak;

pub use crate::num::{Rat, Scalar, Sqrt5};
pub use crate::poset::{BitSet, PosetView};
