//! Exact and certified computations on finite G-metric spaces.
//!
//! The crate covers finite groups and their actions ([`group`]), G-metric
//! spaces with quotients and invariant nets ([`space`], [`samples`]), the
//! equivariant Gromov-Hausdorff distance ([`gh`]), Vietoris-Rips filtrations
//! with their simplicial group action ([`vr`]), persistence over prime fields
//! with eigenspace barcodes and interleaving lower bounds ([`persistence`],
//! [`interleaving`]), closed-form evaluators ([`formulas`]) and the
//! reproduction/property harness ([`harness`]).

pub mod bottleneck;
pub mod error;
pub mod field;
pub mod formulas;
pub mod gh;
pub mod group;
pub mod harness;
pub mod interleaving;
pub mod io;
pub mod persistence;
pub mod samples;
pub mod scalar;
pub mod space;
pub mod vr;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupAction};
pub use scalar::{Scalar, Q};
pub use space::{AnySpace, GMetricSpace};
