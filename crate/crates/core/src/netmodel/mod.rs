//! Survivable route assignment in nested mobile networks.
//!
//! Every mobile router (MR) picks one candidate link towards an access
//! router (AR) or another MR, so the chosen links form a forest rooted at
//! ARs. Two objectives are minimised:
//!
//! * `z1`, aggregated route cost: the sum over MRs of the link costs on
//!   each MR's path to its AR;
//! * `z2`, service-disruption risk: the expected number of MRs cut off when
//!   every link on the path and the AR's base station fail independently.

mod assignment;
mod instance;
mod operators;
mod oracle;

pub use assignment::{InvalidAssignment, PathSummary, RouteAssignment};
pub use instance::{
    AccessRouter, BaseStation, InstanceError, Link, NetworkInstance, Node, DEFAULT_MAX_DEPTH,
};
pub use operators::{Infeasible, ATTACH_RETRIES};
pub use oracle::{FrontPoint, OracleScopeError, ORACLE_LIMIT};

use rand::RngCore;

use crate::moo::{ObjectiveVector, Problem, ProblemError};

impl Problem for NetworkInstance {
    type Genotype = RouteAssignment;

    fn objective_count(&self) -> usize {
        2
    }

    fn validate(&self, genotype: &RouteAssignment) -> Result<(), ProblemError> {
        self.validate_assignment(genotype)
            .map_err(|e| ProblemError::Invalid(e.to_string()))
    }

    fn evaluate(&self, genotype: &RouteAssignment) -> Result<ObjectiveVector, ProblemError> {
        self.validate(genotype)?;
        let (z1, z2) = self.objectives_unchecked(genotype);
        ObjectiveVector::new(vec![z1, z2]).map_err(|e| ProblemError::Invalid(e.to_string()))
    }

    fn random_genotype(&self, rng: &mut dyn RngCore) -> Result<RouteAssignment, ProblemError> {
        self.random_assignment(rng)
            .map_err(|e| ProblemError::Infeasible(e.to_string()))
    }

    fn mutate(&self, genotype: &RouteAssignment, rng: &mut dyn RngCore) -> RouteAssignment {
        self.mutate_reattach(genotype, rng)
    }

    fn heavy_mutate(&self, genotype: &RouteAssignment, rng: &mut dyn RngCore) -> RouteAssignment {
        self.mutate_reattach_heavy(genotype, rng)
    }

    fn crossover(
        &self,
        a: &RouteAssignment,
        b: &RouteAssignment,
        rng: &mut dyn RngCore,
    ) -> RouteAssignment {
        self.crossover_parentmix(a, b, rng)
    }

    fn neighborhood(&self, genotype: &RouteAssignment) -> Vec<RouteAssignment> {
        NetworkInstance::neighborhood(self, genotype)
    }

    fn encode(&self, genotype: &RouteAssignment) -> String {
        self.encode_assignment(genotype)
    }
}
