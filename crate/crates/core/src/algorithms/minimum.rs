use std::collections::HashSet;

use super::{require, AlgorithmError, RoundAlgorithm};
use crate::instance::{ElementId, Instance, ProblemKind};
use crate::interval::cmp_lower;
use crate::knowledge::KnowledgeState;
use crate::solved::minimum_pending;

/// Pending elements (unqueried, not yet discarded, in left-endpoint order)
/// of every unsolved set; solved sets get an empty list.
pub(crate) fn pending_lists(instance: &Instance, knowledge: &KnowledgeState) -> Vec<Vec<ElementId>> {
    instance
        .sets()
        .iter()
        .map(|s| minimum_pending(&s.members, knowledge))
        .collect()
}

/// The `k` leftmost pending elements over all unsolved sets. With a single
/// set this is the classic prefix strategy.
#[derive(Debug, Clone, Default)]
pub struct MinSingle;

impl RoundAlgorithm for MinSingle {
    fn name(&self) -> String {
        "min-single".into()
    }

    fn next_round(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        require("min-single", instance, instance.problem() == ProblemKind::Minimum)?;
        let mut all: Vec<ElementId> = pending_lists(instance, knowledge).into_iter().flatten().collect();
        all.sort_by(|&a, &b| cmp_lower(knowledge.state(a), knowledge.state(b)).then(a.cmp(&b)));
        all.dedup();
        all.truncate(instance.k());
        Ok(all)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalPolicy {
    /// Each query goes to an unsolved set with the shortest queried prefix
    /// this round, lowest set index first.
    MinPrefix,
    /// A cyclic cursor over the sets that persists across rounds and starts
    /// just before the first set.
    RoundRobin,
}

/// Balanced distribution of each round's queries over the unsolved sets.
#[derive(Debug, Clone)]
pub struct Bal {
    policy: BalPolicy,
    cursor: Option<usize>,
}

impl Bal {
    pub fn new(policy: BalPolicy) -> Self {
        Bal { policy, cursor: None }
    }
}

impl RoundAlgorithm for Bal {
    fn name(&self) -> String {
        match self.policy {
            BalPolicy::MinPrefix => "bal",
            BalPolicy::RoundRobin => "bal-rr",
        }
        .into()
    }

    fn next_round(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        require(&self.name(), instance, instance.problem() == ProblemKind::Minimum)?;
        let pending = pending_lists(instance, knowledge);
        let m = pending.len();
        let mut taken: HashSet<ElementId> = HashSet::new();
        let mut round = Vec::new();
        // per set: how many leading pending elements are already in the round
        let mut prefix = vec![0usize; m];
        let advance = |prefix: &mut Vec<usize>, taken: &HashSet<ElementId>| {
            for s in 0..m {
                while prefix[s] < pending[s].len() && taken.contains(&pending[s][prefix[s]]) {
                    prefix[s] += 1;
                }
            }
        };
        let cursor = self.cursor.get_or_insert(m - 1);
        while round.len() < instance.k() {
            advance(&mut prefix, &taken);
            let open = |s: usize| prefix[s] < pending[s].len();
            let pick = match self.policy {
                BalPolicy::MinPrefix => (0..m).filter(|&s| open(s)).min_by_key(|&s| (prefix[s], s)),
                BalPolicy::RoundRobin => (1..=m).map(|step| (*cursor + step) % m).find(|&s| open(s)),
            };
            let Some(s) = pick else { break };
            if self.policy == BalPolicy::RoundRobin {
                *cursor = s;
            }
            let e = pending[s][prefix[s]];
            taken.insert(e);
            round.push(e);
        }
        Ok(round)
    }
}
