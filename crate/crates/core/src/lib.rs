//! Prime-order derangements in classical groups with almost simple
//! irreducible point stabilisers.
//!
//! The crate decides whether the socle `T` of such a primitive group is
//! `r`-elusive, that is, whether every element of order `r` fixes a point.
//! Decisions come from [`decide`], which reads its condition tables from
//! `data/`. The modules below it supply the group theory, and [`oracle`]
//! recomputes as much as possible by brute force.

pub mod classes;
pub mod decide;
pub mod delperm;
pub mod error;
pub mod groups;
pub mod numth;
pub mod oracle;

pub use classes::{ClassLabel, Decoration, FrobeniusOrbitSystem};
pub use decide::{CoverageReport, SubgroupCase, Verdict};
pub use delperm::{CycleType, DeletedModule};
pub use error::{Error, Result};
pub use groups::{Family, GroupSpec, KappaReport};
pub use numth::BoundedPartition;
