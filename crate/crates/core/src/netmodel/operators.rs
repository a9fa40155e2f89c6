//! Randomised construction, mutation, recombination and the single-move
//! neighbourhood. Every operator maps valid assignments to valid
//! assignments.

use rand::seq::SliceRandom;
use rand::Rng;

use super::assignment::RouteAssignment;
use super::instance::{NetworkInstance, Node};

/// Attempts before construction gives up.
pub const ATTACH_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no feasible attachment order found after {attempts} attempts")]
pub struct Infeasible {
    pub attempts: usize,
}

impl NetworkInstance {
    /// Attaches every MR in `pending` (in the given order) to a uniformly
    /// chosen candidate whose parent is already rooted and shallow enough.
    /// `depth` holds the current depth of rooted MRs and is updated.
    fn attach_in_order<R: Rng + ?Sized>(
        &self,
        links: &mut [usize],
        depth: &mut [Option<usize>],
        pending: &[usize],
        rng: &mut R,
    ) -> bool {
        let mut options = Vec::new();
        for &m in pending {
            options.clear();
            for &l in &self.candidates[m] {
                let d = match self.links[l].parent {
                    Node::Access(_) => 1,
                    Node::Mobile(p) => match depth[p] {
                        Some(dp) => dp + 1,
                        None => continue,
                    },
                };
                if d <= self.max_depth {
                    options.push((l, d));
                }
            }
            let Some(&(l, d)) = options.choose(rng) else {
                return false;
            };
            links[m] = l;
            depth[m] = Some(d);
        }
        true
    }

    /// Randomised topological attachment: MRs are visited in random order
    /// and each picks uniformly among links to an already rooted parent.
    pub fn random_assignment<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<RouteAssignment, Infeasible> {
        let n = self.mr_count();
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..ATTACH_RETRIES {
            order.shuffle(rng);
            let mut links = vec![usize::MAX; n];
            let mut depth = vec![None; n];
            if self.attach_in_order(&mut links, &mut depth, &order, rng) {
                return Ok(RouteAssignment { links });
            }
        }
        Err(Infeasible {
            attempts: ATTACH_RETRIES,
        })
    }

    /// Valid alternatives to MR `m`'s current link, in candidate order.
    fn alternatives(&self, a: &RouteAssignment, m: usize) -> Vec<RouteAssignment> {
        self.candidates[m]
            .iter()
            .filter(|&&l| l != a.links[m])
            .filter_map(|&l| {
                let mut trial = a.clone();
                trial.links[m] = l;
                self.is_valid(&trial).then_some(trial)
            })
            .collect()
    }

    fn reattach<R: Rng + ?Sized>(&self, a: &RouteAssignment, m: usize, rng: &mut R) -> RouteAssignment {
        let mut options = self.alternatives(a, m);
        if options.is_empty() {
            return a.clone();
        }
        let i = rng.gen_range(0..options.len());
        options.swap_remove(i)
    }

    /// Moves one uniformly chosen MR to a different feasible candidate link.
    pub fn mutate_reattach<R: Rng + ?Sized>(&self, a: &RouteAssignment, rng: &mut R) -> RouteAssignment {
        let m = rng.gen_range(0..self.mr_count());
        self.reattach(a, m, rng)
    }

    /// Reattaches ceil(|MR|/2) distinct MRs one after another.
    pub fn mutate_reattach_heavy<R: Rng + ?Sized>(&self, a: &RouteAssignment, rng: &mut R) -> RouteAssignment {
        let n = self.mr_count();
        let picks = rand::seq::index::sample(rng, n, n.div_ceil(2)).into_vec();
        let mut current = a.clone();
        for m in picks {
            current = self.reattach(&current, m, rng);
        }
        current
    }

    /// Each MR inherits its link from `a` or `b` with equal probability.
    /// MRs left on a cycle or too deep are reattached by randomised
    /// topological attachment beneath the intact part; if that keeps
    /// failing the child is a copy of `a`.
    pub fn crossover_parentmix<R: Rng + ?Sized>(
        &self,
        a: &RouteAssignment,
        b: &RouteAssignment,
        rng: &mut R,
    ) -> RouteAssignment {
        let mut child = RouteAssignment {
            links: a
                .links
                .iter()
                .zip(&b.links)
                .map(|(&la, &lb)| if rng.gen::<bool>() { la } else { lb })
                .collect(),
        };
        let rooted = self.rooted_depths(&child);
        let mut broken: Vec<usize> = (0..self.mr_count()).filter(|&m| rooted[m].is_none()).collect();
        if broken.is_empty() {
            return child;
        }
        for _ in 0..ATTACH_RETRIES {
            broken.shuffle(rng);
            let mut depth = rooted.clone();
            let mut links = child.links.clone();
            if self.attach_in_order(&mut links, &mut depth, &broken, rng) {
                child.links = links;
                return child;
            }
        }
        a.clone()
    }

    /// All valid single-MR reattachments, ordered by MR then candidate.
    pub fn neighborhood(&self, a: &RouteAssignment) -> Vec<RouteAssignment> {
        (0..self.mr_count())
            .flat_map(|m| self.alternatives(a, m))
            .collect()
    }
}
