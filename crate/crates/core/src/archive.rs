//! Bounded archive of mutually nondominated solutions.
//!
//! Members are kept in canonical order (objectives lexicographically, then
//! genotype), which makes every tie-break in this module deterministic.

use thiserror::Error;

use crate::measures::{hypervolume_clipped, ReferencePoint};
use crate::moo::{dominance, CandidateSolution, Dominance, MooError, ObjectiveVector};
use crate::ranking::crowding_distances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArchiveError {
    #[error("archive capacity must be at least 1")]
    ZeroCapacity,
    #[error(transparent)]
    Objectives(#[from] MooError),
}

/// How an over-full archive chooses which member to drop next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionPolicy {
    /// Drop the member with the smallest crowding distance, recomputing
    /// after each removal.
    Crowding,
    /// Drop the member whose removal loses the least hypervolume.
    HypervolumeContribution,
}

impl ReductionPolicy {
    pub const ALL: [ReductionPolicy; 2] =
        [ReductionPolicy::Crowding, ReductionPolicy::HypervolumeContribution];

    pub fn name(self) -> &'static str {
        match self {
            ReductionPolicy::Crowding => "crowding",
            ReductionPolicy::HypervolumeContribution => "hv_contribution",
        }
    }
}

#[derive(Debug, Clone)]
pub struct NondominatedArchive<G> {
    members: Vec<CandidateSolution<G>>,
    capacity: Option<usize>,
}

impl<G: Clone + Ord> NondominatedArchive<G> {
    /// Empty archive; `None` means unbounded.
    pub fn new(capacity: Option<usize>) -> Result<Self, ArchiveError> {
        if capacity == Some(0) {
            return Err(ArchiveError::ZeroCapacity);
        }
        Ok(Self {
            members: Vec::new(),
            capacity,
        })
    }

    pub fn unbounded() -> Self {
        Self {
            members: Vec::new(),
            capacity: None,
        }
    }

    /// The nondominated subset of `solutions`, with genotype duplicates
    /// collapsed. The result is unbounded.
    pub fn nondom<I>(solutions: I) -> Result<Self, ArchiveError>
    where
        I: IntoIterator<Item = CandidateSolution<G>>,
    {
        let solutions: Vec<_> = solutions.into_iter().collect();
        if let Some(first) = solutions.first() {
            let n = first.objectives.len();
            if let Some(bad) = solutions.iter().find(|s| s.objectives.len() != n) {
                return Err(MooError::LengthMismatch {
                    left: n,
                    right: bad.objectives.len(),
                }
                .into());
            }
        }
        let mut archive = Self::unbounded();
        for s in solutions {
            archive.offer(s);
        }
        Ok(archive)
    }

    pub fn members(&self) -> &[CandidateSolution<G>] {
        &self.members
    }

    pub fn into_members(self) -> Vec<CandidateSolution<G>> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn capacity(&self) -> Option<usize> {
        self.capacity
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.members.iter().map(|m| m.objectives.clone()).collect()
    }

    pub fn contains_genotype(&self, genotype: &G, objectives: &ObjectiveVector) -> bool {
        self.position(genotype, objectives).is_ok()
    }

    fn position(&self, genotype: &G, objectives: &ObjectiveVector) -> Result<usize, usize> {
        self.members.binary_search_by(|m| {
            m.objectives
                .lex_cmp(objectives)
                .then_with(|| m.genotype.cmp(genotype))
        })
    }

    /// Adds `s` unless it is dominated by a member or duplicates a member's
    /// genotype; members dominated by `s` are dropped. Never truncates.
    pub fn offer(&mut self, s: CandidateSolution<G>) -> bool {
        let slot = match self.position(&s.genotype, &s.objectives) {
            Ok(_) => return false,
            Err(slot) => slot,
        };
        let mut dominated = Vec::new();
        for (i, m) in self.members.iter().enumerate() {
            match dominance(&s.objectives, &m.objectives) {
                Ok(Dominance::DominatedBy) => return false,
                Ok(Dominance::Dominates) => dominated.push(i),
                _ => {}
            }
        }
        self.members.insert(slot, s);
        // indices at or after the slot moved by one
        for &i in dominated.iter().rev() {
            let i = if i >= slot { i + 1 } else { i };
            self.members.remove(i);
        }
        true
    }

    /// Insert with the default crowding reduction.
    pub fn insert(&mut self, s: CandidateSolution<G>) -> bool {
        self.insert_with(s, ReductionPolicy::Crowding)
    }

    /// Returns whether `s` was accepted (nondominated and new); on
    /// acceptance an over-full archive is reduced with `policy`.
    pub fn insert_with(&mut self, s: CandidateSolution<G>, policy: ReductionPolicy) -> bool {
        let accepted = self.offer(s);
        if accepted {
            self.reduce(policy);
        }
        accepted
    }

    /// Offers a whole batch, then reduces once. The returned flags tell
    /// which batch members are present in the archive afterwards.
    pub fn merge(
        &mut self,
        batch: &[CandidateSolution<G>],
        policy: ReductionPolicy,
    ) -> (Vec<bool>, usize) {
        let offered: Vec<bool> = batch.iter().map(|s| self.offer(s.clone())).collect();
        let removed = self.reduce(policy);
        let present = batch
            .iter()
            .zip(offered)
            .map(|(s, ok)| ok && self.contains_genotype(&s.genotype, &s.objectives))
            .collect();
        (present, removed)
    }

    /// Truncates to capacity, returning how many members were removed.
    pub fn reduce(&mut self, policy: ReductionPolicy) -> usize {
        let Some(cap) = self.capacity else {
            return 0;
        };
        let mut removed = 0;
        while self.members.len() > cap {
            let scores = match policy {
                ReductionPolicy::Crowding => self.crowding_scores(),
                ReductionPolicy::HypervolumeContribution => self.contribution_scores(),
            };
            // lowest score goes; ties drop the canonically largest member
            let victim = scores
                .iter()
                .enumerate()
                .min_by(|(i, a), (j, b)| a.total_cmp(b).then(j.cmp(i)))
                .map(|(i, _)| i)
                .expect("archive is non-empty");
            self.members.remove(victim);
            removed += 1;
        }
        removed
    }

    /// Index of the first member of each run of equal objective vectors.
    fn distinct_leaders(&self) -> Vec<usize> {
        let mut leaders: Vec<usize> = Vec::new();
        for (i, m) in self.members.iter().enumerate() {
            match leaders.last() {
                Some(&l) if self.members[l].objectives == m.objectives => {}
                _ => leaders.push(i),
            }
        }
        leaders
    }

    /// Crowding over distinct objective vectors; duplicates of a vector
    /// score zero so they go before any distinct point.
    fn crowding_scores(&self) -> Vec<f64> {
        let leaders = self.distinct_leaders();
        let points: Vec<&ObjectiveVector> =
            leaders.iter().map(|&i| &self.members[i].objectives).collect();
        let mut scores = vec![0.0; self.members.len()];
        for (d, &i) in crowding_distances(&points).into_iter().zip(&leaders) {
            scores[i] = d;
        }
        scores
    }

    fn contribution_scores(&self) -> Vec<f64> {
        let n = self.members.len();
        let dims = self.members[0].objectives.len();
        if dims > 3 {
            return self.crowding_scores();
        }
        let leaders = self.distinct_leaders();
        let points: Vec<ObjectiveVector> =
            leaders.iter().map(|&i| self.members[i].objectives.clone()).collect();
        let mut upper = points[0].values().to_vec();
        let mut lower = upper.clone();
        for p in &points {
            for k in 0..dims {
                upper[k] = upper[k].max(p.get(k));
                lower[k] = lower[k].min(p.get(k));
            }
        }
        let upper: Vec<f64> = upper.into_iter().map(|u| u + 1.0).collect();
        let reference = ReferencePoint::new(
            ObjectiveVector::new(upper).expect("finite reference"),
        );
        let total = hypervolume_clipped(&points, &reference).expect("dimension checked");
        let mut scores = vec![0.0; n];
        for (li, &i) in leaders.iter().enumerate() {
            let p = &points[li];
            let extreme = (0..dims).any(|k| {
                p.get(k) == lower[k]
                    && points[..li].iter().all(|q| q.get(k) != lower[k])
            });
            scores[i] = if extreme {
                f64::INFINITY
            } else {
                let rest: Vec<ObjectiveVector> = points
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != li)
                    .map(|(_, q)| q.clone())
                    .collect();
                total - hypervolume_clipped(&rest, &reference).expect("dimension checked")
            };
        }
        scores
    }
}
