//! Budget-based round construction for possibly overlapping sets.
//!
//! Seed the round with the leftmost pending element of every unsolved set.
//! If that leaves room, every unsolved set earns budget at the same rate; an
//! element is bought once the sets having it as their leftmost pending
//! element outside the round can jointly pay 1, and those sets' budgets
//! reset. Time advances event by event in exact arithmetic.

use std::collections::{BTreeMap, HashSet};

use super::minimum::pending_lists;
use super::{require, AlgorithmError, RoundAlgorithm};
use crate::instance::{ElementId, Instance, ProblemKind};
use crate::knowledge::KnowledgeState;
use crate::rational::Rational;

/// One bought element and what each paying set contributed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Charge {
    pub element: ElementId,
    pub payers: Vec<(usize, Rational)>,
    /// Budget clock when the element was bought.
    pub time: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RoundCharges {
    /// Elements placed by the seeding step.
    pub seeded: Vec<ElementId>,
    pub charges: Vec<Charge>,
}

#[derive(Debug, Clone, Default)]
pub struct BudgetAlgorithm {
    log: Vec<RoundCharges>,
}

impl RoundAlgorithm for BudgetAlgorithm {
    fn name(&self) -> String {
        "budget".into()
    }

    fn next_round(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        require("budget", instance, instance.problem() == ProblemKind::Minimum)?;
        let (round, record) = build_round(&pending_lists(instance, knowledge), instance.k());
        self.log.push(record);
        Ok(round)
    }

    fn charges(&self) -> &[RoundCharges] {
        &self.log
    }
}

/// `pending[s]` is set `s`'s pending list (empty once solved).
pub(crate) fn build_round(pending: &[Vec<ElementId>], k: usize) -> (Vec<ElementId>, RoundCharges) {
    let active: Vec<usize> = (0..pending.len()).filter(|&s| !pending[s].is_empty()).collect();
    let mut seeds: Vec<ElementId> = active.iter().map(|&s| pending[s][0]).collect();
    seeds.sort();
    seeds.dedup();
    let mut record = RoundCharges::default();
    if seeds.len() >= k {
        seeds.truncate(k);
        record.seeded = seeds.clone();
        return (seeds, record);
    }
    record.seeded = seeds.clone();
    let mut in_round: HashSet<ElementId> = seeds.iter().copied().collect();
    let mut round = seeds;
    let mut budget: BTreeMap<usize, Rational> = active.iter().map(|&s| (s, Rational::zero())).collect();
    let mut head = vec![0usize; pending.len()];
    let mut clock = Rational::zero();

    while round.len() < k {
        // F_e for every element that heads some set outside the round
        let mut heads: BTreeMap<ElementId, Vec<usize>> = BTreeMap::new();
        for &s in &active {
            while head[s] < pending[s].len() && in_round.contains(&pending[s][head[s]]) {
                head[s] += 1;
            }
            if let Some(&e) = pending[s].get(head[s]) {
                heads.entry(e).or_default().push(s);
            }
        }
        // earliest trigger; ties go to more payers, then the lower id
        let next = heads
            .iter()
            .map(|(&e, payers)| {
                let paid: Rational = payers.iter().map(|s| &budget[s]).sum();
                let wait = (Rational::one() - paid) / Rational::from(payers.len());
                (wait, std::cmp::Reverse(payers.len()), e)
            })
            .min();
        let Some((wait, _, e)) = next else { break };
        debug_assert!(!wait.is_negative(), "budgets never overshoot");
        clock += &wait;
        for b in budget.values_mut() {
            *b += &wait;
        }
        let payers = heads.remove(&e).unwrap();
        let paid = payers
            .iter()
            .map(|&s| (s, std::mem::replace(budget.get_mut(&s).unwrap(), Rational::zero())))
            .collect();
        record.charges.push(Charge {
            element: e,
            payers: paid,
            time: clock.clone(),
        });
        in_round.insert(e);
        round.push(e);
    }
    (round, record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<ElementId> {
        v.iter().map(|&i| ElementId(i)).collect()
    }

    /// The overlapping instance with k = 3 and three groups: shared elements
    /// 1, 4, 7 sit in 6, 4 and 2 sets respectively.
    fn nested() -> Vec<Vec<ElementId>> {
        vec![
            ids(&[1, 2]),
            ids(&[1, 3]),
            ids(&[1, 4, 5]),
            ids(&[1, 4, 6]),
            ids(&[1, 4, 7, 8]),
            ids(&[1, 4, 7, 9]),
        ]
    }

    #[test]
    fn nested_sharing_buys_the_shared_elements() {
        let (round, record) = build_round(&nested(), 3);
        assert_eq!(round, ids(&[1, 4, 7]));
        assert_eq!(record.seeded, ids(&[1]));
        let times: Vec<_> = record.charges.iter().map(|c| c.time.clone()).collect();
        assert_eq!(times, vec![Rational::new(1, 4), Rational::new(3, 4)]);
        assert_eq!(record.charges[0].payers.len(), 4);
        assert_eq!(record.charges[1].payers.len(), 2);
        assert!(record.charges[1].payers.iter().all(|(_, b)| *b == Rational::new(1, 2)));
    }

    #[test]
    fn seeds_overflow_keeps_lowest_ids() {
        let pending = vec![ids(&[5]), ids(&[3]), ids(&[9]), ids(&[1])];
        let (round, record) = build_round(&pending, 2);
        assert_eq!(round, ids(&[1, 3]));
        assert!(record.charges.is_empty());
    }

    #[test]
    fn disjoint_sets_fill_evenly() {
        let pending = vec![ids(&[1, 2, 3]), ids(&[4, 5, 6])];
        let (round, _) = build_round(&pending, 5);
        assert_eq!(round, ids(&[1, 4, 2, 5, 3]));
    }

    #[test]
    fn stops_when_everything_is_in_the_round() {
        let pending = vec![ids(&[1]), ids(&[2])];
        let (round, _) = build_round(&pending, 5);
        assert_eq!(round, ids(&[1, 2]));
    }
}
