//! Adapters between the round model (`k` queries per round) and the batch
//! model (unlimited queries per batch, few batches).

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::algorithms::{AlgorithmError, BatchAlgorithm, RoundAlgorithm};
use crate::instance::{ElementId, Instance};
use crate::knowledge::KnowledgeState;
use crate::rational::Rational;
use crate::solved::instance_solved;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("alpha must be at least 1, got {0}")]
    Alpha(Rational),
    #[error("at least one batch is needed")]
    NoBatches,
}

fn fresh(ids: Vec<ElementId>, knowledge: &KnowledgeState) -> Vec<ElementId> {
    let mut seen = HashSet::new();
    ids.into_iter()
        .filter(|&id| knowledge.needs_query(id) && seen.insert(id))
        .collect()
}

/// Runs a batch algorithm in rounds: every batch is queried in full, `k` at
/// a time, before the next batch is requested.
pub struct BatchesToRounds {
    inner: Box<dyn BatchAlgorithm>,
    queue: VecDeque<ElementId>,
    batches: usize,
}

impl BatchesToRounds {
    pub fn new(inner: Box<dyn BatchAlgorithm>) -> Self {
        BatchesToRounds {
            inner,
            queue: VecDeque::new(),
            batches: 0,
        }
    }

    pub fn batches_used(&self) -> usize {
        self.batches
    }

    pub fn max_batches(&self) -> usize {
        self.inner.max_batches()
    }
}

impl RoundAlgorithm for BatchesToRounds {
    fn name(&self) -> String {
        format!("{}/rounds", self.inner.name())
    }

    fn next_round(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        self.queue.retain(|&id| knowledge.needs_query(id));
        if self.queue.is_empty() {
            if instance_solved(instance, knowledge) {
                return Ok(Vec::new());
            }
            let batch = fresh(self.inner.next_batch(instance, knowledge)?, knowledge);
            self.batches += 1;
            if batch.is_empty() {
                return Err(AlgorithmError::Internal(format!(
                    "{} returned an empty batch on an unsolved instance",
                    self.inner.name()
                )));
            }
            self.queue.extend(batch);
        }
        let take = self.queue.len().min(instance.k());
        Ok(self.queue.drain(..take).collect())
    }
}

/// For each `i = 1..=x`, the smallest integer `K` with `K^x >= n^(i-1)`.
pub fn k_schedule(n: usize, x: usize) -> Vec<usize> {
    let n = BigUint::from(n.max(1));
    (0..x)
        .map(|i| {
            let target = n.pow(i as u32);
            let mut k = target.nth_root(x as u32);
            if k.pow(x as u32) < target {
                k += BigUint::one();
            }
            k.to_usize().unwrap_or(usize::MAX)
        })
        .collect()
}

pub type RoundFactory = Box<dyn Fn() -> Box<dyn RoundAlgorithm> + Send>;

/// Runs a round algorithm in batches: `x` phases of `floor(alpha)` rounds
/// each with a growing per-round limit, then one batch with everything left.
pub struct RoundsToBatches {
    factory: RoundFactory,
    name: String,
    per_phase: usize,
    schedule: Vec<usize>,
    phase: usize,
    current: Option<(Box<dyn RoundAlgorithm>, Instance, usize)>,
}

impl RoundsToBatches {
    /// `r` is the batch budget and `n` the instance size.
    pub fn new(factory: RoundFactory, alpha: &Rational, r: usize, n: usize) -> Result<Self, ReductionError> {
        if *alpha < Rational::one() {
            return Err(ReductionError::Alpha(alpha.clone()));
        }
        if r == 0 {
            return Err(ReductionError::NoBatches);
        }
        let per_phase = alpha.floor().to_usize().unwrap_or(usize::MAX);
        let x = (r - 1) / per_phase;
        let name = format!("{}/batches", factory().name());
        Ok(RoundsToBatches {
            factory,
            name,
            per_phase,
            schedule: k_schedule(n, x),
            phase: 0,
            current: None,
        })
    }

    pub fn schedule(&self) -> &[usize] {
        &self.schedule
    }
}

impl BatchAlgorithm for RoundsToBatches {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn max_batches(&self) -> usize {
        self.per_phase * self.schedule.len() + 1
    }

    fn next_batch(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        loop {
            let Some(&k) = self.schedule.get(self.phase) else {
                return Ok(instance.ids().filter(|&id| knowledge.needs_query(id)).collect());
            };
            if self.current.is_none() {
                let scaled = instance
                    .with_k(k)
                    .map_err(|e| AlgorithmError::Internal(e.to_string()))?;
                self.current = Some(((self.factory)(), scaled, 0));
            }
            let (alg, scaled, used) = self.current.as_mut().unwrap();
            if *used == self.per_phase {
                self.current = None;
                self.phase += 1;
                continue;
            }
            *used += 1;
            return alg.next_round(scaled, knowledge);
        }
    }
}
