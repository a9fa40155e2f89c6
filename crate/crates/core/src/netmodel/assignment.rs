use std::fmt;

use thiserror::Error;

use super::instance::{NetworkInstance, Node};

/// Genotype: for each mobile router (in sorted-id order) the index of its
/// chosen link in [`NetworkInstance::links`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RouteAssignment {
    pub links: Vec<usize>,
}

impl RouteAssignment {
    pub fn new(links: Vec<usize>) -> Self {
        Self { links }
    }

    /// Number of mobile routers whose chosen link differs.
    pub fn distance(&self, other: &Self) -> usize {
        self.links
            .iter()
            .zip(&other.links)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Why an assignment is not a valid attachment forest.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidAssignment {
    #[error("assignment covers {found} mobile routers, instance has {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("link {link} is not a candidate link of `{mr}`")]
    NotCandidate { mr: String, link: usize },
    #[error("`{mr}` lies on a parent cycle")]
    Cycle { mr: String },
    #[error("`{mr}` is {depth} hops from its access router (max {max})")]
    TooDeep { mr: String, depth: usize, max: usize },
}

/// Per-MR path facts used by both objectives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSummary {
    pub hops: usize,
    pub cost: f64,
    pub survival: f64,
}

impl NetworkInstance {
    /// Hop count from `m` to its access router, or the reason there is none.
    fn depth_of(&self, a: &RouteAssignment, m: usize) -> Result<usize, InvalidAssignment> {
        let mut node = m;
        // A valid path visits each MR at most once, so more hops than MRs
        // means a cycle.
        for hops in 1..=self.mr_count() {
            match self.links[a.links[node]].parent {
                Node::Access(_) => {
                    return if hops <= self.max_depth {
                        Ok(hops)
                    } else {
                        Err(InvalidAssignment::TooDeep {
                            mr: self.mobile_routers[m].clone(),
                            depth: hops,
                            max: self.max_depth,
                        })
                    };
                }
                Node::Mobile(p) => node = p,
            }
        }
        Err(InvalidAssignment::Cycle {
            mr: self.mobile_routers[m].clone(),
        })
    }

    fn check_shape(&self, a: &RouteAssignment) -> Result<(), InvalidAssignment> {
        if a.links.len() != self.mr_count() {
            return Err(InvalidAssignment::WrongLength {
                expected: self.mr_count(),
                found: a.links.len(),
            });
        }
        for (m, &l) in a.links.iter().enumerate() {
            if l >= self.links.len() || self.links[l].child != m {
                return Err(InvalidAssignment::NotCandidate {
                    mr: self.mobile_routers[m].clone(),
                    link: l,
                });
            }
        }
        Ok(())
    }

    /// Forest, depth and candidate-membership check.
    pub fn validate_assignment(&self, a: &RouteAssignment) -> Result<(), InvalidAssignment> {
        self.check_shape(a)?;
        for m in 0..self.mr_count() {
            self.depth_of(a, m)?;
        }
        Ok(())
    }

    pub fn is_valid(&self, a: &RouteAssignment) -> bool {
        self.validate_assignment(a).is_ok()
    }

    /// Depth of every MR that reaches an access router within `max_depth`
    /// hops; `None` for MRs on a cycle or too deep. Assumes the shape
    /// (length and candidate membership) is already valid.
    pub(crate) fn rooted_depths(&self, a: &RouteAssignment) -> Vec<Option<usize>> {
        (0..self.mr_count())
            .map(|m| self.depth_of(a, m).ok())
            .collect()
    }

    /// Cost and survival probability of `m`'s path, walking from the MR up
    /// to its access router and finally its base station.
    pub fn path_summary(&self, a: &RouteAssignment, m: usize) -> PathSummary {
        let mut cost = 0.0;
        let mut survival = 1.0;
        let mut hops = 0;
        let mut node = m;
        loop {
            let link = &self.links[a.links[node]];
            hops += 1;
            cost += link.cost;
            survival *= 1.0 - link.failure_probability;
            match link.parent {
                Node::Access(ar) => {
                    let bs = self.access_routers[ar].base_station;
                    survival *= 1.0 - self.base_stations[bs].failure_probability;
                    return PathSummary { hops, cost, survival };
                }
                Node::Mobile(p) => node = p,
            }
        }
    }

    /// Aggregated route cost: each MR pays every link on its path, so
    /// traffic of nested routers burdens the links above them.
    pub fn cost_z1(&self, a: &RouteAssignment) -> Result<f64, InvalidAssignment> {
        self.validate_assignment(a)?;
        Ok(self.objectives_unchecked(a).0)
    }

    /// Expected number of MRs that lose service when every link and base
    /// station fails independently with its own probability.
    pub fn risk_z2(&self, a: &RouteAssignment) -> Result<f64, InvalidAssignment> {
        self.validate_assignment(a)?;
        Ok(self.objectives_unchecked(a).1)
    }

    pub(crate) fn objectives_unchecked(&self, a: &RouteAssignment) -> (f64, f64) {
        let mut z1 = 0.0;
        let mut z2 = 0.0;
        for m in 0..self.mr_count() {
            let path = self.path_summary(a, m);
            z1 += path.cost;
            z2 += 1.0 - path.survival;
        }
        (z1, z2)
    }

    /// `MR=parent;…` in sorted MR order.
    pub fn encode_assignment(&self, a: &RouteAssignment) -> String {
        let mut out = String::new();
        for (m, &l) in a.links.iter().enumerate() {
            if m > 0 {
                out.push(';');
            }
            out.push_str(&self.mobile_routers[m]);
            out.push('=');
            out.push_str(self.node_id(self.links[l].parent));
        }
        out
    }

    /// Inverse of [`encode_assignment`](Self::encode_assignment).
    pub fn decode_assignment(&self, text: &str) -> Option<RouteAssignment> {
        let mut links = vec![usize::MAX; self.mr_count()];
        for part in text.split(';') {
            let (mr, parent) = part.split_once('=')?;
            let m = self.mobile_routers.iter().position(|id| id == mr)?;
            let l = *self.candidates[m]
                .iter()
                .find(|&&l| self.node_id(self.links[l].parent) == parent)?;
            links[m] = l;
        }
        links
            .iter()
            .all(|&l| l != usize::MAX)
            .then_some(RouteAssignment { links })
    }
}

impl fmt::Display for RouteAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.links)
    }
}
