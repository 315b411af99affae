use super::ValueOracle;
use crate::instance::{ElementId, Instance, ProblemKind, Realization};
use crate::interval::UncertainInterval;
use crate::knowledge::KnowledgeState;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairState {
    Untouched,
    /// The lower interval was queried alone first.
    LowFirst,
    /// The upper interval was queried alone first.
    HighFirst,
    Together,
}

/// `k*c` copies of two overlapping intervals `[0,2]` and `[1,3]` (shifted by
/// 10 per copy). Whichever side is queried first lands inside the other, so
/// the other must be queried too, while a single query would have sufficed.
#[derive(Debug, Clone)]
pub struct PairAdversary {
    pairs: Vec<PairState>,
    instance: Instance,
}

pub fn sorting_pair_adversary(c: usize, k: usize) -> (Instance, PairAdversary) {
    assert!(c >= 1 && k >= 1, "c and k must be positive");
    let mut intervals = Vec::with_capacity(2 * c * k);
    for p in 0..c * k {
        let off = Rational::from(10 * p);
        let iv =
            |a: i64, b: i64| UncertainInterval::closed(&off + &Rational::from(a), &off + &Rational::from(b)).unwrap();
        intervals.push(iv(0, 2));
        intervals.push(iv(1, 3));
    }
    let instance = Instance::single_set(intervals, ProblemKind::Sorting, k).expect("valid pairs");
    let adv = PairAdversary {
        pairs: vec![PairState::Untouched; c * k],
        instance: instance.clone(),
    };
    (instance, adv)
}

impl PairAdversary {
    fn value(&self, id: ElementId) -> Rational {
        let p = id.idx() / 2;
        let low = id.idx().is_multiple_of(2);
        let offset = match (self.pairs[p], low) {
            (PairState::LowFirst, true) => Rational::new(3, 2),
            (PairState::LowFirst, false) => Rational::new(5, 2),
            (PairState::HighFirst, true) => Rational::new(1, 2),
            (PairState::HighFirst, false) => Rational::new(3, 2),
            (PairState::Together | PairState::Untouched, true) => Rational::new(1, 2),
            (PairState::Together, false) => Rational::new(3, 2),
            (PairState::Untouched, false) => Rational::new(5, 2),
        };
        Rational::from(10 * p) + offset
    }
}

impl ValueOracle for PairAdversary {
    fn answer_round(&mut self, knowledge: &KnowledgeState, round: &[ElementId]) -> Vec<Rational> {
        for p in 0..self.pairs.len() {
            if self.pairs[p] != PairState::Untouched {
                continue;
            }
            let low = ElementId::from_idx(2 * p);
            let high = ElementId::from_idx(2 * p + 1);
            let (ql, qh) = (round.contains(&low), round.contains(&high));
            // a side queried in an earlier round already fixed the state
            debug_assert!(!knowledge.is_known(low) && !knowledge.is_known(high));
            self.pairs[p] = match (ql, qh) {
                (true, true) => PairState::Together,
                (true, false) => PairState::LowFirst,
                (false, true) => PairState::HighFirst,
                (false, false) => PairState::Untouched,
            };
        }
        round.iter().map(|&id| self.value(id)).collect()
    }

    fn finalize(&mut self, _: &KnowledgeState) -> Realization {
        let values = self.instance.ids().map(|id| self.value(id)).collect();
        Realization::new(&self.instance, values).expect("pair values are admissible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opt::{opt1_bruteforce, DEFAULT_CAP};

    #[test]
    fn first_queried_side_forces_the_other() {
        let (inst, mut adv) = sorting_pair_adversary(1, 1);
        let mut k = KnowledgeState::new(&inst);
        let v = adv.answer_round(&k, &[ElementId(2)]);
        k.reveal(ElementId(2), v[0].clone()).unwrap();
        assert!(!crate::solved::sorting_solved(&inst.sets()[0].members, &k));
        let r = adv.finalize(&k);
        assert_eq!(r.values(), &[Rational::new(1, 2), Rational::new(3, 2)]);
        let opt = opt1_bruteforce(&inst, &r, DEFAULT_CAP).unwrap();
        assert_eq!(opt.opt_set, vec![ElementId(1)]);
    }

    #[test]
    fn untouched_pairs_need_one_query() {
        let (inst, mut adv) = sorting_pair_adversary(2, 3);
        assert_eq!(inst.n(), 12);
        let k = KnowledgeState::new(&inst);
        let r = adv.finalize(&k);
        assert_eq!(opt1_bruteforce(&inst, &r, DEFAULT_CAP).unwrap().opt1, 6);
    }
}
