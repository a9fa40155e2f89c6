//! The memetic loop.
//!
//! ```text
//! MN := initialize()
//! A  := Nondom(MN)
//! while evaluations < budget:
//!     while not stagnant(A's hypervolume trace):
//!         parents   := SelectFrom(MN ∪ A)        (SEL pool)
//!         offspring := Vary(parents)             (VAR pool)
//!         offspring := LocalSearch(offspring)    (LS pool)
//!         MN        := Replace(MN ∪ offspring)   (REP pool)
//!         A         := Reduce(Nondom(A ∪ offspring))  (RED pool)
//!     MN := RandomImmigrants(MN)                 (IMM pool)
//! return A
//! ```
//!
//! # Random draw order
//!
//! A single ChaCha8 generator seeded with `RunParams::seed` drives the run.
//! Draws happen in this order, and only here:
//!
//! 1. initialisation: one `random_genotype` per member, in member order;
//! 2. per inner iteration: SEL choice, selection draws, VAR choice,
//!    variation draws (per parent: mutation coin then operator draws),
//!    LS choice, local-search draws (per offspring: weights then none),
//!    REP choice, RED choice;
//! 3. after the inner loop: IMM choice, then immigrant draws per replaced
//!    slot, worst slot first.
//!
//! # Operator credit
//!
//! * SEL, VAR: success when at least one offspring is in the archive after
//!   the update.
//! * LS: success when at least one offspring that local search moved is in
//!   the archive after the update.
//! * REP: success when the share of the population not dominated by the
//!   archive is higher after replacement than before.
//! * RED: reported only when the reduction removed members; success when
//!   the archive hypervolume did not decrease over the next iteration.
//! * IMM: success when the archive hypervolume increased over the first
//!   iteration after immigration.

mod operators;
mod stages;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use operators::{
    ImmigrationOp, LocalSearchOp, ReductionPolicy, ReplacementOp, SelectionOp, VariationOp,
};
pub use stages::{
    immigrant_count, initialize, local_search, nondominated_fraction, random_immigrants, replace,
    select_from, stagnation, vary, Evaluator, Normalization, Solution,
};

use crate::archive::{ArchiveError, NondominatedArchive};
use crate::measures::{hypervolume_clipped, ReferencePoint};
use crate::moo::{Problem, ProblemError};
use crate::scheduler::{OperatorPool, PoolKind, PoolStats, SchedulerError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid run parameters: {0}")]
    Config(String),
    #[error(transparent)]
    Instance(ProblemError),
    #[error(transparent)]
    Archive(#[from] ArchiveError),
    #[error(transparent)]
    Scheduler(#[from] SchedulerError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    pub population_size: usize,
    /// Offspring per inner iteration (λ).
    pub offspring_count: usize,
    pub archive_capacity: usize,
    /// Evaluation budget; the stop criterion.
    pub budget: u64,
    /// Number of consecutive flat hypervolume increments that count as
    /// stagnation.
    pub stagnation_window: usize,
    /// Increment threshold, relative to the current hypervolume.
    pub stagnation_tolerance: f64,
    /// Share of the population replaced by immigrants.
    pub immigrant_fraction: f64,
    pub seed: u64,
    pub scheduler_window: usize,
    pub scheduler_floor: f64,
    /// Neighbour evaluations allowed per individual in local search.
    pub ls_moves: usize,
    /// Chance that the mutation operator perturbs a given parent.
    pub mutation_probability: f64,
}

impl Default for RunParams {
    fn default() -> Self {
        Self {
            population_size: 50,
            offspring_count: 50,
            archive_capacity: 100,
            budget: 100_000,
            stagnation_window: 10,
            stagnation_tolerance: 1e-9,
            immigrant_fraction: 0.3,
            seed: 0,
            scheduler_window: 50,
            scheduler_floor: 0.05,
            ls_moves: 20,
            mutation_probability: 1.0,
        }
    }
}

impl RunParams {
    pub fn validate(&self) -> Result<(), EngineError> {
        let fail = |msg: &str| Err(EngineError::Config(msg.to_string()));
        if self.population_size == 0 {
            return fail("population size must be positive");
        }
        if self.offspring_count == 0 || self.offspring_count > self.population_size {
            return fail("offspring count must lie in [1, population size]");
        }
        if self.archive_capacity == 0 {
            return fail("archive capacity must be positive");
        }
        if self.stagnation_window == 0 {
            return fail("stagnation window must be positive");
        }
        if !(self.stagnation_tolerance >= 0.0 && self.stagnation_tolerance.is_finite()) {
            return fail("stagnation tolerance must be finite and non-negative");
        }
        if !(0.0..=1.0).contains(&self.immigrant_fraction) {
            return fail("immigrant fraction must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return fail("mutation probability must lie in [0, 1]");
        }
        if self.scheduler_window == 0 {
            return fail("scheduler window must be positive");
        }
        if !(0.0..=0.5).contains(&self.scheduler_floor) {
            return fail("scheduler floor must lie in [0, 1/2]");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunResult<G> {
    pub archive: NondominatedArchive<G>,
    pub evaluations: u64,
    /// Archive hypervolume after initialisation and after every inner
    /// iteration.
    pub hv_trace: Vec<f64>,
    pub reference: ReferencePoint,
    pub scheduler: Vec<PoolStats>,
    pub inner_iterations: u64,
    pub outer_iterations: u64,
    pub wall_clock: Duration,
}

impl<G> RunResult<G> {
    pub fn final_hypervolume(&self) -> f64 {
        self.hv_trace.last().copied().unwrap_or(0.0)
    }
}

struct Pools {
    selection: OperatorPool<SelectionOp>,
    variation: OperatorPool<VariationOp>,
    local_search: OperatorPool<LocalSearchOp>,
    replacement: OperatorPool<ReplacementOp>,
    reduction: OperatorPool<ReductionPolicy>,
    immigration: OperatorPool<ImmigrationOp>,
}

impl Pools {
    fn new(window: usize, floor: f64) -> Result<Self, SchedulerError> {
        Ok(Self {
            selection: OperatorPool::new(PoolKind::Selection, SelectionOp::ALL.to_vec(), window, floor)?,
            variation: OperatorPool::new(PoolKind::Variation, VariationOp::ALL.to_vec(), window, floor)?,
            local_search: OperatorPool::new(PoolKind::LocalSearch, LocalSearchOp::ALL.to_vec(), window, floor)?,
            replacement: OperatorPool::new(PoolKind::Replacement, ReplacementOp::ALL.to_vec(), window, floor)?,
            reduction: OperatorPool::new(PoolKind::Reduction, ReductionPolicy::ALL.to_vec(), window, floor)?,
            immigration: OperatorPool::new(PoolKind::Immigration, ImmigrationOp::ALL.to_vec(), window, floor)?,
        })
    }

    fn stats(&self) -> Vec<PoolStats> {
        vec![
            self.selection.stats(),
            self.variation.stats(),
            self.local_search.stats(),
            self.replacement.stats(),
            self.reduction.stats(),
            self.immigration.stats(),
        ]
    }
}

fn archive_hypervolume<G: Clone + Ord>(
    archive: &NondominatedArchive<G>,
    reference: &ReferencePoint,
) -> Result<f64, EngineError> {
    hypervolume_clipped(&archive.objectives(), reference)
        .map_err(|e| EngineError::Config(e.to_string()))
}

/// Runs the memetic loop on `problem` until the evaluation budget is spent
/// and returns the final archive with run statistics.
pub fn run<P: Problem>(problem: &P, params: &RunParams) -> Result<RunResult<P::Genotype>, EngineError> {
    let started = Instant::now();
    params.validate()?;
    let dims = problem.objective_count();
    if !(1..=3).contains(&dims) {
        return Err(EngineError::Config(format!(
            "hypervolume tracking supports 1 to 3 objectives, problem has {dims}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut evaluator = Evaluator::new(problem, params.budget);
    let mut pools = Pools::new(params.scheduler_window, params.scheduler_floor)?;

    let mut population = initialize(&mut evaluator, params.population_size, &mut rng)?;
    let mut archive = NondominatedArchive::new(Some(params.archive_capacity))?;
    archive.merge(&population, ReductionPolicy::Crowding);

    let points: Vec<_> = population.iter().map(|m| &m.objectives).collect();
    let reference = ReferencePoint::from_worst(&points)
        .ok_or_else(|| EngineError::Config("empty initial population".into()))?;
    let mut hv = archive_hypervolume(&archive, &reference)?;
    let mut hv_trace = vec![hv];

    let mut pending_reduction: Option<(ReductionPolicy, f64)> = None;
    let mut pending_immigration: Option<(ImmigrationOp, f64)> = None;
    let mut inner_iterations = 0u64;
    let mut outer_iterations = 0u64;

    while !evaluator.exhausted() {
        outer_iterations += 1;
        let mut local_trace = vec![hv];
        loop {
            let tolerance = params.stagnation_tolerance * hv.max(f64::MIN_POSITIVE);
            if evaluator.exhausted()
                || stagnation(&local_trace, params.stagnation_window, tolerance)
            {
                break;
            }

            let sel = pools.selection.choose(&mut rng);
            let parents = select_from(
                &population,
                archive.members(),
                sel,
                params.offspring_count,
                &mut rng,
            );

            let var = pools.variation.choose(&mut rng);
            let offspring = vary(
                &parents,
                var,
                params.mutation_probability,
                &mut evaluator,
                &mut rng,
            )?;

            let ls = pools.local_search.choose(&mut rng);
            let normalization = Normalization::from_points(
                archive
                    .members()
                    .iter()
                    .chain(&offspring)
                    .map(|m| &m.objectives),
            )
            .expect("offspring is non-empty");
            let (offspring, moved) = local_search(
                offspring,
                ls,
                params.ls_moves,
                &normalization,
                &mut evaluator,
                &mut rng,
            )?;

            let rep = pools.replacement.choose(&mut rng);
            let survivors = replace(&population, &offspring, rep, params.population_size);
            debug_assert_eq!(survivors.len(), params.population_size);

            let red = pools.reduction.choose(&mut rng);
            let (present, removed) = archive.merge(&offspring, red);
            let hv_new = archive_hypervolume(&archive, &reference)?;

            let any_present = present.iter().any(|&p| p);
            pools.selection.report(sel, any_present)?;
            pools.variation.report(var, any_present)?;
            let ls_success = present.iter().zip(&moved).any(|(&p, &m)| p && m);
            pools.local_search.report(ls, ls_success)?;
            let before = nondominated_fraction(&population, archive.members());
            let after = nondominated_fraction(&survivors, archive.members());
            pools.replacement.report(rep, after > before)?;
            if let Some((op, hv_then)) = pending_reduction.take() {
                pools.reduction.report(op, hv_new >= hv_then)?;
            }
            if removed > 0 {
                pending_reduction = Some((red, hv_new));
            }
            if let Some((op, hv_then)) = pending_immigration.take() {
                pools.immigration.report(op, hv_new > hv_then)?;
            }

            population = survivors;
            hv = hv_new;
            hv_trace.push(hv);
            local_trace.push(hv);
            inner_iterations += 1;
        }
        if evaluator.exhausted() {
            break;
        }
        let imm = pools.immigration.choose(&mut rng);
        let (next, _) = random_immigrants(
            &population,
            archive.members(),
            imm,
            params.immigrant_fraction,
            &mut evaluator,
            &mut rng,
        )?;
        population = next;
        pending_immigration = Some((imm, hv));
    }

    Ok(RunResult {
        archive,
        evaluations: evaluator.count(),
        hv_trace,
        reference,
        scheduler: pools.stats(),
        inner_iterations,
        outer_iterations,
        wall_clock: started.elapsed(),
    })
}
