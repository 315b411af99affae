use super::{staircase_interval, staircase_value, ValueOracle};
use crate::instance::{ElementId, Instance, NamedSet, ProblemKind, Realization};
use crate::knowledge::KnowledgeState;
use crate::rational::Rational;

/// Disjoint sets of identical staircases; element `i` of set `s` has global
/// id `s * len + i`.
#[derive(Debug, Clone)]
struct Staircases {
    instance: Instance,
    len: usize,
    eps: Rational,
    /// Position of each set's minimum once committed.
    min_at: Vec<Option<usize>>,
}

impl Staircases {
    fn build(m: usize, len: usize, k: usize) -> Self {
        let eps = Rational::new(1, m as i64);
        let mut intervals = Vec::with_capacity(m * len);
        let mut sets = Vec::with_capacity(m);
        for s in 0..m {
            intervals.extend((1..=len).map(|i| staircase_interval(i, &eps)));
            sets.push(NamedSet {
                name: format!("S{}", s + 1),
                members: (0..len).map(|i| ElementId::from_idx(s * len + i)).collect(),
            });
        }
        let instance = Instance::new(intervals, sets, ProblemKind::Minimum, k).expect("valid staircases");
        Staircases {
            instance,
            len,
            eps,
            min_at: vec![None; m],
        }
    }

    fn locate(&self, id: ElementId) -> (usize, usize) {
        (id.idx() / self.len, id.idx() % self.len + 1)
    }

    fn value(&self, id: ElementId) -> Rational {
        let (s, i) = self.locate(id);
        staircase_value(i, self.min_at[s], &self.eps)
    }

    /// Per set, the number of queries in `round` and the leftmost position.
    fn tally(&self, round: &[ElementId]) -> Vec<(usize, usize)> {
        let mut out = vec![(0, usize::MAX); self.min_at.len()];
        for &id in round {
            let (s, i) = self.locate(id);
            out[s].0 += 1;
            out[s].1 = out[s].1.min(i);
        }
        out
    }

    fn finalize(&mut self, knowledge: &KnowledgeState) -> Realization {
        for s in 0..self.min_at.len() {
            if self.min_at[s].is_none() {
                self.min_at[s] =
                    (1..=self.len).find(|&i| !knowledge.is_known(ElementId::from_idx(s * self.len + i - 1)));
            }
        }
        let values = self.instance.ids().map(|id| self.value(id)).collect();
        Realization::new(&self.instance, values).expect("staircase values are admissible")
    }
}

/// Adversary forcing `M` rounds while a single round suffices offline:
/// `M^M` sets, `k = M^(M+1)`, `M*k` elements per set. Each round the sets
/// holding the most queries are solved at their leftmost query until they
/// cover a `(M-1)/M` share of the round; in round `M` every queried set is
/// solved. Equal query counts go to the lower set index.
#[derive(Debug, Clone)]
pub struct WlbAdversary {
    base: Staircases,
    big_m: usize,
    k: usize,
    round: usize,
    notes: Vec<String>,
}

pub fn minimum_wlb_adversary(big_m: usize) -> (Instance, WlbAdversary) {
    assert!((2..=3).contains(&big_m), "M must be 2 or 3");
    let m = big_m.pow(big_m as u32);
    let k = big_m.pow(big_m as u32 + 1);
    let base = Staircases::build(m, big_m * k, k);
    let instance = base.instance.clone();
    let adv = WlbAdversary {
        base,
        big_m,
        k,
        round: 0,
        notes: Vec::new(),
    };
    (instance, adv)
}

impl ValueOracle for WlbAdversary {
    fn answer_round(&mut self, _: &KnowledgeState, round: &[ElementId]) -> Vec<Rational> {
        self.round += 1;
        let tally = self.base.tally(round);
        let mut heavy: Vec<usize> = (0..tally.len())
            .filter(|&s| self.base.min_at[s].is_none() && tally[s].0 > 0)
            .collect();
        heavy.sort_by(|&a, &b| tally[b].0.cmp(&tally[a].0).then(a.cmp(&b)));
        let mut chosen = Vec::new();
        if self.round >= self.big_m {
            chosen = heavy;
        } else {
            let mut covered = 0;
            for s in heavy {
                if covered * self.big_m >= (self.big_m - 1) * self.k {
                    break;
                }
                covered += tally[s].0;
                chosen.push(s);
            }
        }
        for &s in &chosen {
            self.base.min_at[s] = Some(tally[s].1);
        }
        let names: Vec<String> = chosen.iter().map(|s| format!("S{}", s + 1)).collect();
        self.notes
            .push(format!("round {}: solve {}", self.round, names.join(" ")));
        round.iter().map(|&id| self.base.value(id)).collect()
    }

    fn finalize(&mut self, knowledge: &KnowledgeState) -> Realization {
        self.base.finalize(knowledge)
    }

    fn notes(&self) -> Vec<String> {
        self.notes.clone()
    }
}

/// Adversary forcing `k (H(m) - 1)` wasted queries with `k = m`: after every
/// round the set with the most queries (lowest index on ties) is solved at
/// its leftmost query; all others stay active.
#[derive(Debug, Clone)]
pub struct AdditiveAdversary {
    base: Staircases,
    round: usize,
    notes: Vec<String>,
}

pub fn minimum_additive_adversary(m: usize) -> (Instance, AdditiveAdversary) {
    assert!(m >= 2, "m must be at least 2");
    let base = Staircases::build(m, m * m + 1, m);
    let instance = base.instance.clone();
    (
        instance,
        AdditiveAdversary {
            base,
            round: 0,
            notes: Vec::new(),
        },
    )
}

impl ValueOracle for AdditiveAdversary {
    fn answer_round(&mut self, _: &KnowledgeState, round: &[ElementId]) -> Vec<Rational> {
        self.round += 1;
        let tally = self.base.tally(round);
        let pick = (0..tally.len())
            .filter(|&s| self.base.min_at[s].is_none() && tally[s].0 > 0)
            .max_by(|&a, &b| tally[a].0.cmp(&tally[b].0).then(b.cmp(&a)));
        if let Some(s) = pick {
            self.base.min_at[s] = Some(tally[s].1);
            self.notes.push(format!("round {}: solve S{}", self.round, s + 1));
        }
        round.iter().map(|&id| self.base.value(id)).collect()
    }

    fn finalize(&mut self, knowledge: &KnowledgeState) -> Realization {
        self.base.finalize(knowledge)
    }

    fn notes(&self) -> Vec<String> {
        self.notes.clone()
    }
}
