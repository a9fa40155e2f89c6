//! Exhaustive Pareto front of small instances, used as a test oracle.

use thiserror::Error;

use super::assignment::RouteAssignment;
use super::instance::NetworkInstance;
use crate::moo::ObjectiveVector;

/// Largest raw search space the oracle will enumerate.
pub const ORACLE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search space of {size} assignments exceeds the oracle limit of {limit}")]
pub struct OracleScopeError {
    pub size: u128,
    pub limit: u128,
}

/// One point of the exact front with the smallest witness assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontPoint {
    pub objectives: ObjectiveVector,
    pub witness: RouteAssignment,
}

impl NetworkInstance {
    /// Enumerates every assignment, keeps the valid ones and returns the
    /// exact nondominated set, sorted lexicographically by objectives.
    pub fn brute_force_pareto(&self) -> Result<Vec<FrontPoint>, OracleScopeError> {
        let size = self.search_space_size();
        if size > ORACLE_LIMIT {
            return Err(OracleScopeError {
                size,
                limit: ORACLE_LIMIT,
            });
        }
        let n = self.mr_count();
        let mut slot = vec![0usize; n];
        let mut front: Vec<FrontPoint> = Vec::new();
        loop {
            let a = RouteAssignment::new((0..n).map(|m| self.candidates[m][slot[m]]).collect());
            if self.is_valid(&a) {
                let (z1, z2) = self.objectives_unchecked(&a);
                let z = [z1, z2];
                // enumeration is in increasing genotype order, so the first
                // witness seen for a point is the smallest
                let covered = front.iter().any(|p| {
                    let q = p.objectives.values();
                    q[0] <= z[0] && q[1] <= z[1]
                });
                if !covered {
                    front.retain(|p| {
                        let q = p.objectives.values();
                        !(z[0] <= q[0] && z[1] <= q[1])
                    });
                    front.push(FrontPoint {
                        objectives: ObjectiveVector::new(z.to_vec()).expect("finite objectives"),
                        witness: a,
                    });
                }
            }
            // odometer, last MR fastest
            let mut m = n;
            loop {
                if m == 0 {
                    front.sort_by(|a, b| a.objectives.lex_cmp(&b.objectives));
                    return Ok(front);
                }
                m -= 1;
                slot[m] += 1;
                if slot[m] < self.candidates[m].len() {
                    break;
                }
                slot[m] = 0;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_link_single_router() {
        let inst = NetworkInstance::parse(
            "BS B1 0\nAR A1 B1\nAR A2 B1\nMR M1\nLINK M1 A1 1 0.3\nLINK M1 A2 5 0\n",
        )
        .unwrap();
        let front = inst.brute_force_pareto().unwrap();
        let pts: Vec<Vec<f64>> = front.iter().map(|p| p.objectives.values().to_vec()).collect();
        assert_eq!(pts, vec![vec![1.0, 1.0 - 0.7 * (1.0 - 0.0)], vec![5.0, 0.0]]);
    }

    #[test]
    fn dominated_link_is_dropped() {
        let inst = NetworkInstance::parse(
            "BS B1 0\nAR A1 B1\nAR A2 B1\nMR M1\nLINK M1 A1 1 0\nLINK M1 A2 5 0.2\n",
        )
        .unwrap();
        let front = inst.brute_force_pareto().unwrap();
        assert_eq!(front.len(), 1);
        assert_eq!(front[0].witness, RouteAssignment::new(vec![0]));
    }

    #[test]
    fn guard_rejects_large_spaces() {
        let mut text = String::from("BS B1 0\n");
        for a in 0..8 {
            text.push_str(&format!("AR A{a} B1\n"));
        }
        for m in 0..7 {
            text.push_str(&format!("MR M{m}\n"));
            for a in 0..8 {
                text.push_str(&format!("LINK M{m} A{a} 1 0\n"));
            }
        }
        let inst = NetworkInstance::parse(&text).unwrap();
        let err = inst.brute_force_pareto().unwrap_err();
        assert_eq!(err.size, 8u128.pow(7));
    }
}
