//! Objective-space primitives: objective vectors, Pareto dominance under
//! minimization, and the [`Problem`] trait consumed by the optimizer.

use std::cmp::Ordering;
use std::fmt;

use rand::RngCore;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MooError {
    #[error("objective vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("objective vector must have at least one component")]
    Empty,
    #[error("objective component {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
}

/// Errors raised by a problem when asked to evaluate or generate genotypes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    /// The genotype violates a validity constraint; the message names it.
    #[error("invalid genotype: {0}")]
    Invalid(String),
    /// The problem could not produce a valid genotype.
    #[error("infeasible instance: {0}")]
    Infeasible(String),
}

/// A point in objective space. All components are finite; smaller is better.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Result<Self, MooError> {
        if values.is_empty() {
            return Err(MooError::Empty);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(MooError::NonFinite { index, value });
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// Lexicographic comparison; total because components are finite.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    /// Shorthand for `dominance(self, other) == Ok(Dominance::Dominates)`.
    pub fn dominates(&self, other: &Self) -> bool {
        matches!(dominance(self, other), Ok(Dominance::Dominates))
    }

    /// True when `self` dominates or equals `other`.
    pub fn weakly_dominates(&self, other: &Self) -> bool {
        matches!(
            dominance(self, other),
            Ok(Dominance::Dominates | Dominance::Equal)
        )
    }
}

impl TryFrom<Vec<f64>> for ObjectiveVector {
    type Error = MooError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(values)
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Outcome of comparing two objective vectors under minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dominance {
    Dominates,
    DominatedBy,
    Incomparable,
    Equal,
}

impl Dominance {
    pub fn flip(self) -> Self {
        match self {
            Dominance::Dominates => Dominance::DominatedBy,
            Dominance::DominatedBy => Dominance::Dominates,
            other => other,
        }
    }
}

/// Pareto comparison of `a` against `b`. Equality is exact floating-point
/// equality.
pub fn dominance(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<Dominance, MooError> {
    if a.len() != b.len() {
        return Err(MooError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let mut better = false;
    let mut worse = false;
    for (x, y) in a.values().iter().zip(b.values()) {
        if x < y {
            better = true;
        } else if x > y {
            worse = true;
        }
        if better && worse {
            return Ok(Dominance::Incomparable);
        }
    }
    Ok(match (better, worse) {
        (true, false) => Dominance::Dominates,
        (false, true) => Dominance::DominatedBy,
        (false, false) => Dominance::Equal,
        (true, true) => unreachable!(),
    })
}

/// A genotype paired with its evaluated objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSolution<G> {
    pub genotype: G,
    pub objectives: ObjectiveVector,
}

impl<G: Ord> CandidateSolution<G> {
    /// Canonical order: objectives lexicographically, then genotype.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.objectives
            .lex_cmp(&other.objectives)
            .then_with(|| self.genotype.cmp(&other.genotype))
    }
}

/// A multi-objective minimization problem together with the variation
/// machinery the optimizer needs.
///
/// `evaluate` must be pure: the same genotype always yields a bit-identical
/// objective vector.
pub trait Problem: Sync {
    type Genotype: Clone + Ord + fmt::Debug + Send + Sync;

    fn objective_count(&self) -> usize;

    /// Checks the validity predicate, naming the violated constraint.
    fn validate(&self, genotype: &Self::Genotype) -> Result<(), ProblemError>;

    fn evaluate(&self, genotype: &Self::Genotype) -> Result<ObjectiveVector, ProblemError>;

    fn random_genotype(&self, rng: &mut dyn RngCore) -> Result<Self::Genotype, ProblemError>;

    /// Small perturbation; must return a valid genotype.
    fn mutate(&self, genotype: &Self::Genotype, rng: &mut dyn RngCore) -> Self::Genotype;

    /// Large perturbation used to seed immigrants from archive members.
    fn heavy_mutate(&self, genotype: &Self::Genotype, rng: &mut dyn RngCore) -> Self::Genotype;

    /// Recombination of two valid parents into one valid child.
    fn crossover(
        &self,
        a: &Self::Genotype,
        b: &Self::Genotype,
        rng: &mut dyn RngCore,
    ) -> Self::Genotype;

    /// All valid single-move neighbours in a deterministic order.
    fn neighborhood(&self, genotype: &Self::Genotype) -> Vec<Self::Genotype>;

    /// Stable textual form of a genotype, used in output files.
    fn encode(&self, genotype: &Self::Genotype) -> String;
}

/// Validates and evaluates `genotype`.
pub fn evaluate<P: Problem + ?Sized>(
    problem: &P,
    genotype: &P::Genotype,
) -> Result<ObjectiveVector, ProblemError> {
    problem.validate(genotype)?;
    problem.evaluate(genotype)
}
