use super::ValueOracle;
use crate::instance::{ElementId, Instance, ProblemKind, Realization};
use crate::interval::UncertainInterval;
use crate::knowledge::KnowledgeState;
use crate::rational::Rational;

fn iv(text: &str) -> UncertainInterval {
    text.parse().expect("literal interval")
}

/// `i-1` copies of `[0,3]`, `i-1` copies of `[5,8]` and one middle interval
/// `[2,6]` (last id), with rank `i` and `k = i`. The middle value is decided
/// after round 1: 4 if the middle was not queried, else 11/2 when more left
/// than right copies were queried, else 5/2.
#[derive(Debug, Clone)]
pub struct SelectionFullAdversary {
    instance: Instance,
    copies: usize,
    middle: Option<Rational>,
}

pub fn selection_full_lb_adversary(i: usize) -> (Instance, SelectionFullAdversary) {
    assert!(i >= 2, "rank must be at least 2");
    let copies = i - 1;
    let mut intervals = vec![iv("[0,3]"); copies];
    intervals.extend(vec![iv("[5,8]"); copies]);
    intervals.push(iv("[2,6]"));
    let instance =
        Instance::single_set(intervals, ProblemKind::SelectionFull { rank: i }, i).expect("valid selection instance");
    (
        instance.clone(),
        SelectionFullAdversary {
            instance,
            copies,
            middle: None,
        },
    )
}

impl SelectionFullAdversary {
    fn middle_id(&self) -> ElementId {
        ElementId::from_idx(2 * self.copies)
    }

    fn value(&self, id: ElementId) -> Rational {
        if id == self.middle_id() {
            self.middle.clone().unwrap_or(Rational::from(4i64))
        } else if id.idx() < self.copies {
            Rational::one()
        } else {
            Rational::from(7i64)
        }
    }
}

impl ValueOracle for SelectionFullAdversary {
    fn answer_round(&mut self, _: &KnowledgeState, round: &[ElementId]) -> Vec<Rational> {
        if self.middle.is_none() {
            let left = round.iter().filter(|id| id.idx() < self.copies).count();
            let right = round
                .iter()
                .filter(|id| (self.copies..2 * self.copies).contains(&id.idx()))
                .count();
            self.middle = Some(if !round.contains(&self.middle_id()) {
                Rational::from(4i64)
            } else if left > right {
                Rational::new(11, 2)
            } else {
                Rational::new(5, 2)
            });
        }
        round.iter().map(|&id| self.value(id)).collect()
    }

    fn finalize(&mut self, _: &KnowledgeState) -> Realization {
        let values = self.instance.ids().map(|id| self.value(id)).collect();
        Realization::new(&self.instance, values).expect("admissible")
    }
}

/// `i` copies of `(0,5)` then `i` copies of `{3}`, rank `i`. The first `i-1`
/// open copies to be queried (by id within a round) get 1, the rest 4, so
/// the answer 3 is pinned only once the last open copy is queried.
#[derive(Debug, Clone)]
pub struct SelectionValueAdversary {
    instance: Instance,
    copies: usize,
    given: Vec<Option<Rational>>,
    ones: usize,
}

pub fn selection_value_lb_adversary(i: usize, k: usize) -> (Instance, SelectionValueAdversary) {
    assert!(i >= 1 && k >= 1, "rank and k must be positive");
    let mut intervals = vec![iv("(0,5)"); i];
    intervals.extend(vec![iv("{3}"); i]);
    let instance =
        Instance::single_set(intervals, ProblemKind::SelectionValue { rank: i }, k).expect("valid selection instance");
    (
        instance.clone(),
        SelectionValueAdversary {
            instance,
            copies: i,
            given: vec![None; i],
            ones: 0,
        },
    )
}

impl SelectionValueAdversary {
    fn assign(&mut self, id: ElementId) -> Rational {
        if id.idx() >= self.copies {
            return Rational::from(3i64);
        }
        if let Some(v) = &self.given[id.idx()] {
            return v.clone();
        }
        let v = if self.ones + 1 < self.copies {
            self.ones += 1;
            Rational::one()
        } else {
            Rational::from(4i64)
        };
        self.given[id.idx()] = Some(v.clone());
        v
    }
}

impl ValueOracle for SelectionValueAdversary {
    fn answer_round(&mut self, _: &KnowledgeState, round: &[ElementId]) -> Vec<Rational> {
        let mut order: Vec<ElementId> = round.to_vec();
        order.sort();
        for id in order {
            self.assign(id);
        }
        round.iter().map(|&id| self.assign(id)).collect()
    }

    fn finalize(&mut self, _: &KnowledgeState) -> Realization {
        let ids: Vec<ElementId> = self.instance.ids().collect();
        let values = ids.into_iter().map(|id| self.assign(id)).collect();
        Realization::new(&self.instance, values).expect("admissible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opt::{opt1_bruteforce, opt1_selection_full, DEFAULT_CAP};

    #[test]
    fn full_adversary_middle_rules() {
        let (inst, mut adv) = selection_full_lb_adversary(3);
        let k = KnowledgeState::new(&inst);
        adv.answer_round(&k, &[ElementId(1), ElementId(2), ElementId(3)]);
        let r = adv.finalize(&k);
        assert_eq!(r.value(ElementId(5)), &Rational::from(4i64));
        assert_eq!(opt1_selection_full(&inst, &r).unwrap().opt1, 1);

        let (_, mut adv) = selection_full_lb_adversary(3);
        adv.answer_round(&k, &[ElementId(5), ElementId(1), ElementId(2)]);
        assert_eq!(adv.finalize(&k).value(ElementId(5)), &Rational::new(11, 2));

        let (_, mut adv) = selection_full_lb_adversary(3);
        let v = adv.answer_round(&k, &[ElementId(5), ElementId(1), ElementId(3)]);
        assert_eq!(v[0], Rational::new(5, 2));
        let r = adv.finalize(&k);
        assert_eq!(opt1_selection_full(&inst, &r).unwrap().opt1, 3);
    }

    #[test]
    fn value_adversary_pins_three() {
        let (inst, mut adv) = selection_value_lb_adversary(3, 3);
        let k = KnowledgeState::new(&inst);
        let v = adv.answer_round(&k, &[ElementId(3), ElementId(1)]);
        assert_eq!(v, vec![Rational::one(), Rational::one()]);
        let r = adv.finalize(&k);
        assert_eq!(r.value(ElementId(2)), &Rational::from(4i64));
        assert_eq!(r.kth_smallest(3), &Rational::from(3i64));
        let opt = opt1_bruteforce(&inst, &r, DEFAULT_CAP).unwrap();
        assert_eq!(opt.opt_set, vec![ElementId(2)]);
    }
}
