//! Whitehead-group rank invariants of finite groups.
//!
//! For a finite group `G` and `Inn(G) <= A <= Aut(G)`, the rank of
//! `Z ⊗_{ZA} Wh(G)` is the number of R-A-conjugacy classes minus the number
//! of Q-A-conjugacy classes. With `A = Inn(G)` this is Bass's rank of
//! `Wh(G)`; with `A = Aut(G)` it is the invariant `N_G`.
//!
//! Groups come from permutation generators, Cayley tables, the family
//! constructors in [`constructors`], or (for groups too large to enumerate)
//! class-level data in [`classdata`].

pub mod automorphisms;
pub mod classdata;
pub mod classes;
pub mod cli;
pub mod constructors;
pub mod field;
pub mod group;
pub mod io;
pub mod kconj;
pub mod numtheory;
pub mod perm;
pub use automorphisms::{ActionSet, GroupMap, Provenance};
pub use classdata::{rank_report_from_table, ClassTable};
pub use classes::{class_power_map, conjugacy_classes, ConjugacyClasses};
pub use group::{FiniteGroup, GroupError, DEFAULT_CAP};
pub use perm::Permutation;
pub use constructors::FamilySpec;
pub use kconj::{fusion_partition, rank_report, FusionPartition, GaloisField, RankReport};
