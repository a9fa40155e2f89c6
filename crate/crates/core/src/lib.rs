//! Multi-objective memetic optimisation with a nondominated archive,
//! success-driven operator scheduling and stagnation-triggered random
//! immigrants, applied to survivable route assignment in nested mobile
//! networks.
//!
//! The [`engine`] is generic over [`moo::Problem`]; [`netmodel`] provides
//! the routing problem together with an exhaustive oracle for small
//! instances.

pub mod archive;
pub mod engine;
pub mod measures;
pub mod moo;
pub mod netmodel;
pub mod ranking;
pub mod scheduler;

pub use archive::{NondominatedArchive, ReductionPolicy};
pub use engine::{run, RunParams, RunResult};
pub use moo::{dominance, CandidateSolution, Dominance, ObjectiveVector, Problem};
pub use netmodel::{NetworkInstance, RouteAssignment};
