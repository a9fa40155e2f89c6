//! Success-driven operator scheduling.
//!
//! Each pipeline stage owns an [`OperatorPool`]. A pool keeps a sliding
//! window of recent success flags per operator and samples operators by
//! probability matching over Laplace-smoothed success rates, with a floor
//! probability so no operator is ever starved.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchedulerError {
    #[error("operator pool must contain at least one operator")]
    EmptyPool,
    #[error("window length must be positive")]
    ZeroWindow,
    #[error("probability floor {floor} must lie in [0, 1/{count}]")]
    FloorOutOfRange { floor: f64, count: usize },
    #[error("operator {0} does not belong to this pool")]
    UnknownOperator(String),
}

/// The six stages of the memetic loop that choose among operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PoolKind {
    Selection,
    Variation,
    LocalSearch,
    Replacement,
    Reduction,
    Immigration,
}

impl PoolKind {
    pub const ALL: [PoolKind; 6] = [
        PoolKind::Selection,
        PoolKind::Variation,
        PoolKind::LocalSearch,
        PoolKind::Replacement,
        PoolKind::Reduction,
        PoolKind::Immigration,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PoolKind::Selection => "SEL",
            PoolKind::Variation => "VAR",
            PoolKind::LocalSearch => "LS",
            PoolKind::Replacement => "REP",
            PoolKind::Reduction => "RED",
            PoolKind::Immigration => "IMM",
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Anything a pool can schedule.
pub trait Operator: Copy + Eq + fmt::Debug {
    fn name(&self) -> &'static str;
}

impl Operator for crate::archive::ReductionPolicy {
    fn name(&self) -> &'static str {
        crate::archive::ReductionPolicy::name(*self)
    }
}

#[derive(Debug, Clone)]
struct Slot<O> {
    op: O,
    window: VecDeque<bool>,
    trials: u64,
    successes: u64,
}

impl<O> Slot<O> {
    fn smoothed_rate(&self) -> f64 {
        let wins = self.window.iter().filter(|&&s| s).count();
        (wins as f64 + 1.0) / (self.window.len() as f64 + 2.0)
    }
}

#[derive(Debug, Clone)]
pub struct OperatorPool<O> {
    kind: PoolKind,
    slots: Vec<Slot<O>>,
    window: usize,
    floor: f64,
}

/// Lifetime statistics of one operator, for run summaries.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorStats {
    pub name: &'static str,
    pub probability: f64,
    pub trials: u64,
    pub successes: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolStats {
    pub kind: PoolKind,
    pub operators: Vec<OperatorStats>,
}

impl<O: Operator> OperatorPool<O> {
    pub fn new(
        kind: PoolKind,
        operators: Vec<O>,
        window: usize,
        floor: f64,
    ) -> Result<Self, SchedulerError> {
        if operators.is_empty() {
            return Err(SchedulerError::EmptyPool);
        }
        if window == 0 {
            return Err(SchedulerError::ZeroWindow);
        }
        let count = operators.len();
        if !(0.0..=1.0 / count as f64).contains(&floor) {
            return Err(SchedulerError::FloorOutOfRange { floor, count });
        }
        let slots = operators
            .into_iter()
            .map(|op| Slot {
                op,
                window: VecDeque::with_capacity(window),
                trials: 0,
                successes: 0,
            })
            .collect();
        Ok(Self {
            kind,
            slots,
            window,
            floor,
        })
    }

    pub fn kind(&self) -> PoolKind {
        self.kind
    }

    pub fn operators(&self) -> impl Iterator<Item = O> + '_ {
        self.slots.iter().map(|s| s.op)
    }

    /// Laplace-smoothed success rate of each operator over its window.
    pub fn success_estimates(&self) -> Vec<f64> {
        self.slots.iter().map(Slot::smoothed_rate).collect()
    }

    /// Selection probabilities: `floor + (1 - k*floor) * s_i / sum(s)`.
    pub fn probabilities(&self) -> Vec<f64> {
        let k = self.slots.len();
        if k == 1 {
            return vec![1.0];
        }
        let rates = self.success_estimates();
        let total: f64 = rates.iter().sum();
        let free = 1.0 - k as f64 * self.floor;
        rates.iter().map(|r| self.floor + free * r / total).collect()
    }

    /// Cumulative sampling with a given uniform draw in `[0, 1)`.
    pub fn choose_with(&self, draw: f64) -> O {
        let mut acc = 0.0;
        let probs = self.probabilities();
        for (slot, p) in self.slots.iter().zip(&probs) {
            acc += p;
            if draw < acc {
                return slot.op;
            }
        }
        self.slots[self.slots.len() - 1].op
    }

    /// Samples one operator using exactly one draw from `rng`.
    pub fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> O {
        let draw: f64 = rng.gen();
        self.choose_with(draw)
    }

    /// Records one outcome for `op`, evicting the oldest beyond the window.
    pub fn report(&mut self, op: O, success: bool) -> Result<(), SchedulerError> {
        let window = self.window;
        let slot = self
            .slots
            .iter_mut()
            .find(|s| s.op == op)
            .ok_or_else(|| SchedulerError::UnknownOperator(op.name().to_string()))?;
        if slot.window.len() == window {
            slot.window.pop_front();
        }
        slot.window.push_back(success);
        slot.trials += 1;
        slot.successes += u64::from(success);
        Ok(())
    }

    pub fn stats(&self) -> PoolStats {
        let probs = self.probabilities();
        PoolStats {
            kind: self.kind,
            operators: self
                .slots
                .iter()
                .zip(probs)
                .map(|(s, probability)| OperatorStats {
                    name: s.op.name(),
                    probability,
                    trials: s.trials,
                    successes: s.successes,
                })
                .collect(),
        }
    }
}
