//! Closure structure of binary datasets.
//!
//! The closed itemsets of a formal context are partitioned into *closure
//! levels*: level `k` holds the closed itemsets whose smallest generators
//! (passkeys) have exactly `k` items. [`gdpm::mine`] computes the levels
//! breadth-first, [`oracle`] recomputes everything by brute force on small
//! contexts, and [`analysis`] derives frequency, coverage, F1 and
//! implication tables from a mined structure.

pub mod analysis;
pub mod context;
pub mod error;
pub mod gdpm;
pub mod io;
pub mod oracle;
pub mod sets;
pub mod settrie;

pub use context::FormalContext;
pub use error::{Error, Result};
pub use gdpm::{mine, ClosureStructure, LevelEntry, MineOptions, Variant};
pub use sets::{ItemSet, ObjectSet};
pub use settrie::SetTrie;
