//! Nondominated sorting and crowding distance.

use crate::moo::{dominance, Dominance, ObjectiveVector};

/// Pareto rank of every point (0 = nondominated) by the fast
/// nondominated sort. Points must share one objective count.
pub fn pareto_ranks(points: &[&ObjectiveVector]) -> Vec<usize> {
    let n = points.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            match dominance(points[i], points[j]).expect("objective counts must agree") {
                Dominance::Dominates => {
                    dominates[i].push(j);
                    dominated_by_count[j] += 1;
                }
                Dominance::DominatedBy => {
                    dominates[j].push(i);
                    dominated_by_count[i] += 1;
                }
                _ => {}
            }
        }
    }

    let mut ranks = vec![usize::MAX; n];
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    let mut rank = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            ranks[i] = rank;
            for &j in &dominates[i] {
                dominated_by_count[j] -= 1;
                if dominated_by_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        current = next;
        rank += 1;
    }
    ranks
}

/// Crowding distance of each point within `points` (one front).
///
/// Per objective, points are ordered by value with ties broken by input
/// index; the two ends get infinite distance and interior points add the
/// normalised gap between their neighbours. Objectives with zero range
/// contribute nothing to interior points.
pub fn crowding_distances(points: &[&ObjectiveVector]) -> Vec<f64> {
    let n = points.len();
    let mut distance = vec![0.0; n];
    if n == 0 {
        return distance;
    }
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = points[0].len();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..m {
        order.sort_by(|&a, &b| points[a].get(k).total_cmp(&points[b].get(k)).then(a.cmp(&b)));
        let lo = points[order[0]].get(k);
        let hi = points[order[n - 1]].get(k);
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..(n - 1) {
            let idx = order[w];
            if distance[idx].is_finite() {
                distance[idx] +=
                    (points[order[w + 1]].get(k) - points[order[w - 1]].get(k)) / range;
            }
        }
    }
    distance
}

/// Ranks plus per-front crowding for a whole set, as used by tournament
/// selection and survival.
pub fn rank_and_crowding(points: &[&ObjectiveVector]) -> (Vec<usize>, Vec<f64>) {
    let ranks = pareto_ranks(points);
    let mut crowding = vec![0.0; points.len()];
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    for r in 0..=max_rank {
        let members: Vec<usize> = (0..points.len()).filter(|&i| ranks[i] == r).collect();
        if members.is_empty() {
            continue;
        }
        let front: Vec<&ObjectiveVector> = members.iter().map(|&i| points[i]).collect();
        for (d, &i) in crowding_distances(&front).into_iter().zip(&members) {
            crowding[i] = d;
        }
    }
    (ranks, crowding)
}
