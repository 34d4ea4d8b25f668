//! Approximate order properties of weight functions on subgraph lattices.
//!
//! A weight function assigns a non-negative real to every element of a finite
//! family of non-empty subgraphs ordered by containment. This crate measures how
//! far such a function is from being monotone, subadditive or convex (the
//! *defect*), and builds nearby weight functions that have the exact property,
//! together with numerical checks of the distance guarantees.
//!
//! Modules:
//! - [`lattice`]: graphs, subgraph families, containment, joins, chains and the
//!   fast subset/superset minimum transforms.
//! - [`weights`]: weight functions and generators (exact graph parameters,
//!   seeded random values, perturbations).
//! - [`monotone`], [`subadditive`], [`convex`]: defects, repairs and verifiers.
//! - [`oracle`]: slow brute-force reference implementations.
//! - [`cli`]: file formats and the `weightlat` command line.

pub mod cli;
pub mod convex;
pub mod error;
pub mod guard;
pub mod lattice;
pub mod monotone;
pub mod oracle;
pub mod report;
pub mod subadditive;
pub mod weights;

pub use convex::ConvexMode;
pub use error::{Error, Result};
pub use guard::Guards;
pub use lattice::{build_family, ElementId, Family, FamilyKind, Graph};
pub use report::{BoundCheck, DefectReport, IterationTrace, Property, RepairResult, Witness};
pub use weights::{ParamKind, WeightFn};
