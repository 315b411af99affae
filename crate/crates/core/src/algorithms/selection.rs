use std::cmp::Ordering;

use super::{require, AlgorithmError, RoundAlgorithm};
use crate::instance::{ElementId, Instance, ProblemKind};
use crate::interval::{cmp_lower, cmp_upper, intersects, ElementState};
use crate::knowledge::KnowledgeState;
use crate::solved::{categorize, selection_full_solved, target_area, Category};

fn mirror_state(s: &ElementState) -> ElementState {
    match s {
        ElementState::Interval(i) => ElementState::Interval(i.mirrored()),
        ElementState::Known(v) => ElementState::Known(-v),
    }
}

/// Query the `k` leftmost unresolved intervals that still meet the target
/// area. Ranks above the middle are handled on the mirrored instance.
#[derive(Debug, Clone, Default)]
pub struct SelectionValue {
    /// (mirrored, effective rank), fixed at the first round.
    view: Option<(bool, usize)>,
}

impl RoundAlgorithm for SelectionValue {
    fn name(&self) -> String {
        "sel-value".into()
    }

    fn next_round(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        let ProblemKind::SelectionValue { rank } = instance.problem() else {
            return Err(require("sel-value", instance, false).unwrap_err());
        };
        let n = instance.n();
        let (mirrored, rank) = *self.view.get_or_insert_with(|| {
            if rank > n.div_ceil(2) {
                (true, n - rank + 1)
            } else {
                (false, rank)
            }
        });
        let states: Vec<ElementState> = if mirrored {
            knowledge.states().iter().map(mirror_state).collect()
        } else {
            knowledge.states().to_vec()
        };
        let ta = target_area(&states, rank);
        if ta.point().is_some() {
            return Ok(Vec::new());
        }
        let mut cand: Vec<ElementId> = instance
            .ids()
            .filter(|id| states[id.idx()].needs_query() && intersects(&states[id.idx()], &ta))
            .collect();
        cand.sort_by(|&a, &b| cmp_lower(&states[a.idx()], &states[b.idx()]).then(a.cmp(&b)));
        cand.truncate(instance.k());
        if cand.is_empty() {
            return Err(AlgorithmError::Internal(
                "no interval meets an unresolved target area".into(),
            ));
        }
        Ok(cand)
    }
}

/// Sizes of the four categories when a round was built: unresolved
/// intervals containing the target area (`a`), all elements strictly inside
/// it (`b`), unresolved ones covering only its left end (`c`) or only its
/// right end (`d`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CategoryCounts {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// Containers first, then intervals inside the target area, then left and
/// right overlaps alternately, left first.
#[derive(Debug, Clone, Default)]
pub struct SelectionFull {
    log: Vec<CategoryCounts>,
}

impl RoundAlgorithm for SelectionFull {
    fn name(&self) -> String {
        "sel-full".into()
    }

    fn next_round(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        let ProblemKind::SelectionFull { rank } = instance.problem() else {
            return Err(require("sel-full", instance, false).unwrap_err());
        };
        if selection_full_solved(knowledge, rank) {
            return Ok(Vec::new());
        }
        let ta = target_area(knowledge.states(), rank);
        let mut cats: [Vec<ElementId>; 4] = Default::default();
        let mut counts = CategoryCounts::default();
        for id in instance.ids() {
            let s = knowledge.state(id);
            let Some(cat) = categorize(s, &ta) else { continue };
            if cat == Category::Inside {
                counts.b += 1;
            }
            if !s.needs_query() {
                continue;
            }
            let slot = match cat {
                Category::Contains => 0,
                Category::Inside => 1,
                Category::Left => 2,
                Category::Right => 3,
            };
            cats[slot].push(id);
        }
        counts.a = cats[0].len();
        counts.c = cats[2].len();
        counts.d = cats[3].len();
        self.log.push(counts);
        if counts.a == 0 || counts.b + 1 > counts.a {
            return Err(AlgorithmError::Internal(format!(
                "category counts a={} b={} break the container bound",
                counts.a, counts.b
            )));
        }
        let by_lower =
            |x: &ElementId, y: &ElementId| cmp_lower(knowledge.state(*x), knowledge.state(*y)).then(x.cmp(y));
        cats[0].sort_by(by_lower);
        cats[1].sort_by(by_lower);
        cats[2].sort_by(|x, y| match cmp_upper(knowledge.state(*x), knowledge.state(*y)) {
            Ordering::Equal => x.cmp(y),
            o => o.reverse(),
        });
        cats[3].sort_by(by_lower);

        let k = instance.k();
        let mut round: Vec<ElementId> = cats[0].iter().chain(&cats[1]).copied().take(k).collect();
        let (mut left, mut right) = (cats[2].iter(), cats[3].iter());
        let mut take_left = true;
        while round.len() < k {
            let next = if take_left {
                left.next().or_else(|| right.next())
            } else {
                right.next().or_else(|| left.next())
            };
            let Some(&id) = next else { break };
            round.push(id);
            take_left = !take_left;
        }
        Ok(round)
    }

    fn categories(&self) -> &[CategoryCounts] {
        &self.log
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;

    fn first_round(alg: &mut dyn RoundAlgorithm, text: &str) -> Vec<u32> {
        let (inst, _) = parse_instance(text).unwrap();
        let k = KnowledgeState::new(&inst);
        alg.next_round(&inst, &k).unwrap().into_iter().map(|e| e.0).collect()
    }

    #[test]
    fn full_starts_with_the_container_then_alternates() {
        let text = "k 3\nproblem selection-full i=3\n\
            interval 1 [0,3]\ninterval 2 [0,3]\ninterval 3 [5,8]\ninterval 4 [5,8]\ninterval 5 [2,6]\n";
        let mut alg = SelectionFull::default();
        assert_eq!(first_round(&mut alg, text), vec![5, 1, 3]);
        assert_eq!(alg.categories(), &[CategoryCounts { a: 1, b: 0, c: 2, d: 2 }]);
    }

    #[test]
    fn full_left_overlaps_go_by_decreasing_right_end() {
        let text = "k 4\nproblem selection-full i=3\n\
            interval 1 [0,3]\ninterval 2 [0,4]\ninterval 3 [0,9]\ninterval 4 [5,9]\ninterval 5 [6,9]\n";
        // target area [0,9]: 3 contains it, 1 and 2 cover the left end
        let mut alg = SelectionFull::default();
        assert_eq!(first_round(&mut alg, text), vec![3, 2, 4, 1]);
    }

    #[test]
    fn full_inside_before_overlaps() {
        let text = "k 4\nproblem selection-full i=2\n\
            interval 1 [0,3]\ninterval 2 [0,5]\ninterval 3 [1,2]\ninterval 4 [4,9]\n";
        let mut alg = SelectionFull::default();
        assert_eq!(first_round(&mut alg, text), vec![1, 2, 3]);
        assert_eq!(alg.categories()[0], CategoryCounts { a: 2, b: 1, c: 0, d: 0 });
    }

    #[test]
    fn full_solved_gives_empty_round() {
        let text = "k 2\nproblem selection-full i=1\ninterval 1 {1}\ninterval 2 (2,3)\n";
        assert!(first_round(&mut SelectionFull::default(), text).is_empty());
    }

    #[test]
    fn value_takes_leftmost_meeting_the_target() {
        let text = "k 2\nproblem selection-value i=2\n\
            interval 1 (0,5)\ninterval 2 (0,5)\ninterval 3 {3}\ninterval 4 {3}\ninterval 5 (6,7)\n";
        assert_eq!(first_round(&mut SelectionValue::default(), text), vec![1, 2]);
    }

    #[test]
    fn value_mirrors_high_ranks() {
        let text = "k 1\nproblem selection-value i=3\n\
            interval 1 (0,2)\ninterval 2 (1,4)\ninterval 3 (3,6)\n";
        // third smallest is the largest: rightmost candidates first
        assert_eq!(first_round(&mut SelectionValue::default(), text), vec![3]);
    }

    #[test]
    fn wrong_problem_is_rejected() {
        let (inst, _) = parse_instance("k 1\nproblem minimum\ninterval 1 (0,1)\n").unwrap();
        let k = KnowledgeState::new(&inst);
        assert!(SelectionValue::default().next_round(&inst, &k).is_err());
        assert!(SelectionFull::default().next_round(&inst, &k).is_err());
    }
}
