//! The individual pipeline stages of the memetic loop. Each stage takes the
//! operator already chosen by its scheduler pool.

use std::cmp::Ordering;

use rand::Rng;

use super::operators::{ImmigrationOp, LocalSearchOp, ReplacementOp, SelectionOp, VariationOp};
use super::EngineError;
use crate::moo::{CandidateSolution, ObjectiveVector, Problem, ProblemError};
use crate::ranking::rank_and_crowding;

pub type Solution<P> = CandidateSolution<<P as Problem>::Genotype>;

/// Counts every objective evaluation against a budget.
pub struct Evaluator<'p, P: Problem> {
    problem: &'p P,
    count: u64,
    budget: u64,
}

impl<'p, P: Problem> Evaluator<'p, P> {
    pub fn new(problem: &'p P, budget: u64) -> Self {
        Self {
            problem,
            count: 0,
            budget,
        }
    }

    pub fn problem(&self) -> &'p P {
        self.problem
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn exhausted(&self) -> bool {
        self.count >= self.budget
    }

    pub fn evaluate(&mut self, genotype: P::Genotype) -> Result<Solution<P>, ProblemError> {
        self.count += 1;
        let objectives = self.problem.evaluate(&genotype)?;
        Ok(CandidateSolution {
            genotype,
            objectives,
        })
    }
}

/// Quality order used by tournaments, survival and elitism: lower rank,
/// then larger crowding, then canonical order, then position.
struct Quality<'a, G> {
    members: Vec<&'a CandidateSolution<G>>,
    ranks: Vec<usize>,
    crowding: Vec<f64>,
}

impl<'a, G: Ord> Quality<'a, G> {
    fn new(members: Vec<&'a CandidateSolution<G>>) -> Self {
        let points: Vec<&ObjectiveVector> = members.iter().map(|m| &m.objectives).collect();
        let (ranks, crowding) = rank_and_crowding(&points);
        Self {
            members,
            ranks,
            crowding,
        }
    }

    /// `Less` means `i` is better.
    fn cmp(&self, i: usize, j: usize) -> Ordering {
        self.ranks[i]
            .cmp(&self.ranks[j])
            .then_with(|| self.crowding[j].total_cmp(&self.crowding[i]))
            .then_with(|| self.members[i].canonical_cmp(self.members[j]))
            .then(i.cmp(&j))
    }

    /// Indices from best to worst.
    fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.members.len()).collect();
        idx.sort_by(|&i, &j| self.cmp(i, j));
        idx
    }
}

/// Builds `size` random valid members.
pub fn initialize<P: Problem, R: Rng>(
    evaluator: &mut Evaluator<'_, P>,
    size: usize,
    rng: &mut R,
) -> Result<Vec<Solution<P>>, EngineError> {
    let problem = evaluator.problem();
    (0..size)
        .map(|_| {
            let g = problem
                .random_genotype(rng)
                .map_err(EngineError::Instance)?;
            evaluator.evaluate(g).map_err(EngineError::Instance)
        })
        .collect()
}

/// Draws `count` parents from the union of `population` and `archive`.
pub fn select_from<G: Clone + Ord, R: Rng>(
    population: &[CandidateSolution<G>],
    archive: &[CandidateSolution<G>],
    op: SelectionOp,
    count: usize,
    rng: &mut R,
) -> Vec<CandidateSolution<G>> {
    let union: Vec<&CandidateSolution<G>> = population.iter().chain(archive).collect();
    let n = union.len();
    if n == 0 {
        return Vec::new();
    }
    match op {
        SelectionOp::Uniform => (0..count)
            .map(|_| union[rng.gen_range(0..n)].clone())
            .collect(),
        SelectionOp::Tournament => {
            let quality = Quality::new(union);
            (0..count)
                .map(|_| {
                    let i = rng.gen_range(0..n);
                    let j = rng.gen_range(0..n);
                    let winner = if quality.cmp(i, j) == Ordering::Greater { j } else { i };
                    quality.members[winner].clone()
                })
                .collect()
        }
    }
}

/// Produces one offspring per parent. Mutation perturbs each parent with
/// probability `mutation_probability`; crossover pairs parent `i` with
/// parent `i + 1` (cyclically). Offspring identical to their first parent
/// reuse its objectives instead of being re-evaluated.
pub fn vary<P: Problem, R: Rng>(
    parents: &[Solution<P>],
    op: VariationOp,
    mutation_probability: f64,
    evaluator: &mut Evaluator<'_, P>,
    rng: &mut R,
) -> Result<Vec<Solution<P>>, EngineError> {
    let problem = evaluator.problem();
    let n = parents.len();
    let mut offspring = Vec::with_capacity(n);
    for (i, parent) in parents.iter().enumerate() {
        let genotype = match op {
            VariationOp::Mutation => {
                let u: f64 = rng.gen();
                if u < mutation_probability {
                    problem.mutate(&parent.genotype, rng)
                } else {
                    parent.genotype.clone()
                }
            }
            VariationOp::Crossover => {
                let mate = &parents[(i + 1) % n];
                problem.crossover(&parent.genotype, &mate.genotype, rng)
            }
        };
        if genotype == parent.genotype {
            offspring.push(parent.clone());
        } else {
            offspring.push(evaluator.evaluate(genotype).map_err(EngineError::Instance)?);
        }
    }
    Ok(offspring)
}

/// Ideal point and per-objective scale used to normalise the Chebyshev
/// scalarisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalization {
    pub ideal: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Normalization {
    pub fn from_points<'a, I>(points: I) -> Option<Self>
    where
        I: IntoIterator<Item = &'a ObjectiveVector>,
    {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let mut lo = first.values().to_vec();
        let mut hi = lo.clone();
        for p in iter {
            for (k, &v) in p.values().iter().enumerate() {
                lo[k] = lo[k].min(v);
                hi[k] = hi[k].max(v);
            }
        }
        let scale = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| if h > l { h - l } else { 1.0 })
            .collect();
        Some(Self { ideal: lo, scale })
    }

    pub fn chebyshev(&self, z: &ObjectiveVector, weights: &[f64]) -> f64 {
        z.values()
            .iter()
            .zip(&self.ideal)
            .zip(&self.scale)
            .zip(weights)
            .map(|(((v, i), s), w)| w * (v - i) / s)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Uniform weight vector on the simplex (normalised exponential draws).
fn random_weights<R: Rng>(dims: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..dims).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        raw.into_iter().map(|w| w / total).collect()
    } else {
        vec![1.0 / dims as f64; dims]
    }
}

/// Improves each offspring with at most `max_moves` neighbour evaluations.
/// Returns the improved set and, per member, whether it moved.
pub fn local_search<P: Problem, R: Rng>(
    offspring: Vec<Solution<P>>,
    op: LocalSearchOp,
    max_moves: usize,
    normalization: &Normalization,
    evaluator: &mut Evaluator<'_, P>,
    rng: &mut R,
) -> Result<(Vec<Solution<P>>, Vec<bool>), EngineError> {
    let problem = evaluator.problem();
    let dims = problem.objective_count();
    let mut improved = Vec::with_capacity(offspring.len());
    let mut moved = Vec::with_capacity(offspring.len());
    for start in offspring {
        let weights = match op {
            LocalSearchOp::ChebyshevHillClimb => random_weights(dims, rng),
            LocalSearchOp::ParetoStep => Vec::new(),
        };
        let accepts = |candidate: &ObjectiveVector, current: &ObjectiveVector| match op {
            LocalSearchOp::ChebyshevHillClimb => {
                normalization.chebyshev(candidate, &weights)
                    < normalization.chebyshev(current, &weights)
            }
            LocalSearchOp::ParetoStep => candidate.dominates(current),
        };
        let mut current = start;
        let mut trials = 0;
        let mut changed = false;
        'climb: loop {
            for neighbour in problem.neighborhood(&current.genotype) {
                if trials >= max_moves || evaluator.exhausted() {
                    break 'climb;
                }
                trials += 1;
                let candidate = evaluator.evaluate(neighbour).map_err(EngineError::Instance)?;
                if accepts(&candidate.objectives, &current.objectives) {
                    current = candidate;
                    changed = true;
                    continue 'climb;
                }
            }
            break;
        }
        improved.push(current);
        moved.push(changed);
    }
    Ok((improved, moved))
}

/// Chooses `size` survivors from `population` followed by `offspring`.
/// Survivors keep their order in that union.
pub fn replace<G: Clone + Ord>(
    population: &[CandidateSolution<G>],
    offspring: &[CandidateSolution<G>],
    op: ReplacementOp,
    size: usize,
) -> Vec<CandidateSolution<G>> {
    let union: Vec<&CandidateSolution<G>> = population.iter().chain(offspring).collect();
    let size = size.min(union.len());
    let quality = Quality::new(union);
    let mut chosen: Vec<usize> = match op {
        ReplacementOp::Elitist => quality.order().into_iter().take(size).collect(),
        ReplacementOp::Generational => {
            let first_child = population.len();
            let mut chosen: Vec<usize> =
                (first_child..first_child + offspring.len()).take(size).collect();
            if chosen.len() < size {
                let parents = quality.order().into_iter().filter(|&i| i < first_child);
                chosen.extend(parents.take(size - chosen.len()));
            }
            let best = quality.order()[0];
            if !chosen.contains(&best) {
                let worst = (0..chosen.len())
                    .max_by(|&a, &b| quality.cmp(chosen[a], chosen[b]))
                    .expect("size is positive");
                chosen[worst] = best;
            }
            chosen
        }
    };
    chosen.sort_unstable();
    chosen.into_iter().map(|i| quality.members[i].clone()).collect()
}

/// True when the last `window` consecutive increments of `trace` are all
/// below `tolerance`. Needs `window + 1` entries.
pub fn stagnation(trace: &[f64], window: usize, tolerance: f64) -> bool {
    if window == 0 || trace.len() < window + 1 {
        return false;
    }
    trace[trace.len() - window - 1..]
        .windows(2)
        .all(|w| w[1] - w[0] < tolerance)
}

/// `ceil(fraction * size)`, tolerant of representation error, capped so
/// at least one member survives.
pub fn immigrant_count(fraction: f64, size: usize) -> usize {
    let x = fraction * size as f64;
    let k = if (x - x.round()).abs() < 1e-9 { x.round() } else { x.ceil() };
    (k.max(0.0) as usize).min(size.saturating_sub(1))
}

/// Replaces the worst-ranked `immigrant_count(fraction, N)` members; the
/// rest, including the best-ranked member, survive. Returns the new
/// population and how many members were replaced (fewer only when the
/// evaluation budget runs out).
pub fn random_immigrants<P: Problem, R: Rng>(
    population: &[Solution<P>],
    archive: &[Solution<P>],
    op: ImmigrationOp,
    fraction: f64,
    evaluator: &mut Evaluator<'_, P>,
    rng: &mut R,
) -> Result<(Vec<Solution<P>>, usize), EngineError> {
    let problem = evaluator.problem();
    let k = immigrant_count(fraction, population.len());
    let quality = Quality::new(population.iter().collect());
    let worst_first: Vec<usize> = quality.order().into_iter().rev().take(k).collect();
    let mut next = population.to_vec();
    let mut replaced = 0;
    for slot in worst_first {
        if evaluator.exhausted() {
            break;
        }
        let genotype = match op {
            ImmigrationOp::Fresh => problem
                .random_genotype(rng)
                .map_err(EngineError::Instance)?,
            ImmigrationOp::ArchiveMutation => {
                let pool = if archive.is_empty() { population } else { archive };
                let source = &pool[rng.gen_range(0..pool.len())];
                problem.heavy_mutate(&source.genotype, rng)
            }
        };
        next[slot] = evaluator.evaluate(genotype).map_err(EngineError::Instance)?;
        replaced += 1;
    }
    Ok((next, replaced))
}

/// Share of `population` not dominated by any archive member.
pub fn nondominated_fraction<G>(
    population: &[CandidateSolution<G>],
    archive: &[CandidateSolution<G>],
) -> f64 {
    if population.is_empty() {
        return 0.0;
    }
    let free = population
        .iter()
        .filter(|p| !archive.iter().any(|a| a.objectives.dominates(&p.objectives)))
        .count();
    free as f64 / population.len() as f64
}
