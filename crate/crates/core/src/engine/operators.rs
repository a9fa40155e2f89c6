//! Operator identifiers for the engine's scheduler pools.

use crate::scheduler::Operator;

pub use crate::archive::ReductionPolicy;

/// Mating selection over the union of population and archive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionOp {
    /// Binary tournament on Pareto rank, then crowding distance.
    Tournament,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariationOp {
    Mutation,
    Crossover,
}

/// Lifetime learning applied to every offspring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalSearchOp {
    /// First-improvement descent on a weighted Chebyshev scalarisation
    /// with a random weight vector per individual.
    ChebyshevHillClimb,
    /// Repeatedly move to the first neighbour that dominates the current
    /// point.
    ParetoStep,
}

/// Survival selection over population and offspring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReplacementOp {
    /// Rank then crowding truncation of the union.
    Elitist,
    /// Offspring replace the population; the best-ranked member survives.
    Generational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImmigrationOp {
    /// Fresh random genotypes.
    Fresh,
    /// Heavy mutations of random archive members.
    ArchiveMutation,
}

impl SelectionOp {
    pub const ALL: [SelectionOp; 2] = [SelectionOp::Tournament, SelectionOp::Uniform];
}

impl VariationOp {
    pub const ALL: [VariationOp; 2] = [VariationOp::Mutation, VariationOp::Crossover];
}

impl LocalSearchOp {
    pub const ALL: [LocalSearchOp; 2] = [LocalSearchOp::ChebyshevHillClimb, LocalSearchOp::ParetoStep];
}

impl ReplacementOp {
    pub const ALL: [ReplacementOp; 2] = [ReplacementOp::Elitist, ReplacementOp::Generational];
}

impl ImmigrationOp {
    pub const ALL: [ImmigrationOp; 2] = [ImmigrationOp::Fresh, ImmigrationOp::ArchiveMutation];
}

impl Operator for SelectionOp {
    fn name(&self) -> &'static str {
        match self {
            SelectionOp::Tournament => "binary_tournament",
            SelectionOp::Uniform => "uniform",
        }
    }
}

impl Operator for VariationOp {
    fn name(&self) -> &'static str {
        match self {
            VariationOp::Mutation => "mutate_reattach",
            VariationOp::Crossover => "crossover_parentmix",
        }
    }
}

impl Operator for LocalSearchOp {
    fn name(&self) -> &'static str {
        match self {
            LocalSearchOp::ChebyshevHillClimb => "chebyshev_hill_climb",
            LocalSearchOp::ParetoStep => "pareto_step",
        }
    }
}

impl Operator for ReplacementOp {
    fn name(&self) -> &'static str {
        match self {
            ReplacementOp::Elitist => "elitist",
            ReplacementOp::Generational => "generational_elite1",
        }
    }
}

impl Operator for ImmigrationOp {
    fn name(&self) -> &'static str {
        match self {
            ImmigrationOp::Fresh => "fresh_random",
            ImmigrationOp::ArchiveMutation => "archive_heavy_mutation",
        }
    }
}
