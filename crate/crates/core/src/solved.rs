//! When is a set, or a whole instance, solved by what is currently known,
//! and what is the provable answer.

use std::cmp::Ordering;

use crate::instance::{ElementId, Instance, ProblemKind, Realization};
use crate::interval::{cmp_lower, cmp_upper, dependent, intersects, strictly_below, Bounds, ElementState, Endpoint};
use crate::knowledge::KnowledgeState;
use crate::rational::Rational;

/// No two members of the set are still dependent.
pub fn sorting_solved(members: &[ElementId], k: &KnowledgeState) -> bool {
    members
        .iter()
        .enumerate()
        .all(|(i, &a)| members[i + 1..].iter().all(|&b| !dependent(k.state(a), k.state(b))))
}

/// Unresolved members that are certainly larger than some other member.
pub fn minimum_discard(members: &[ElementId], k: &KnowledgeState) -> Vec<ElementId> {
    // the member with the smallest upper bound is the strongest witness; keep
    // the runner-up for when that member is the candidate itself
    let mut by_upper: Vec<ElementId> = members.to_vec();
    by_upper.sort_by(|&a, &b| cmp_upper(k.state(a), k.state(b)).then(a.cmp(&b)));
    members
        .iter()
        .copied()
        .filter(|&j| {
            let s = k.state(j);
            s.needs_query()
                && by_upper
                    .iter()
                    .take(2)
                    .any(|&i| i != j && strictly_below(k.state(i), s))
        })
        .collect()
}

/// Unresolved, undiscarded members in left-endpoint order (ties by id).
/// For open-or-trivial instances this is empty exactly when the set is solved.
pub fn minimum_pending(members: &[ElementId], k: &KnowledgeState) -> Vec<ElementId> {
    let discarded = minimum_discard(members, k);
    let mut out: Vec<ElementId> = members
        .iter()
        .copied()
        .filter(|&j| k.needs_query(j) && !discarded.contains(&j))
        .collect();
    out.sort_by(|&a, &b| cmp_lower(k.state(a), k.state(b)).then(a.cmp(&b)));
    out
}

/// The minimum and an element attaining it, if knowledge proves them.
pub fn minimum_solution(members: &[ElementId], k: &KnowledgeState) -> Option<(ElementId, Rational)> {
    let (best, v) = members
        .iter()
        .filter_map(|&i| k.value(i).map(|v| (i, v)))
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))?;
    let proven = members.iter().all(|&j| !k.needs_query(j) || k.state(j).lower() >= v);
    proven.then(|| (best, v.clone()))
}

pub fn minimum_solved(members: &[ElementId], k: &KnowledgeState) -> bool {
    minimum_solution(members, k).is_some()
}

/// The interval from the `rank`-th left endpoint to the `rank`-th right
/// endpoint; it always contains the `rank`-th smallest value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetArea {
    pub lower: Rational,
    pub lower_kind: Endpoint,
    pub upper: Rational,
    pub upper_kind: Endpoint,
}

impl Bounds for TargetArea {
    fn lower(&self) -> &Rational {
        &self.lower
    }
    fn lower_kind(&self) -> Endpoint {
        self.lower_kind
    }
    fn upper(&self) -> &Rational {
        &self.upper
    }
    fn upper_kind(&self) -> Endpoint {
        self.upper_kind
    }
}

impl TargetArea {
    pub fn point(&self) -> Option<&Rational> {
        (self.lower == self.upper && self.lower_kind.is_closed() && self.upper_kind.is_closed()).then_some(&self.lower)
    }
}

pub fn target_area(states: &[ElementState], rank: usize) -> TargetArea {
    assert!(rank >= 1 && rank <= states.len(), "rank out of range");
    let mut by_lower: Vec<&ElementState> = states.iter().collect();
    by_lower.sort_by(|a, b| cmp_lower(*a, *b));
    let mut by_upper: Vec<&ElementState> = states.iter().collect();
    by_upper.sort_by(|a, b| cmp_upper(*a, *b));
    let lo = by_lower[rank - 1];
    let hi = by_upper[rank - 1];
    TargetArea {
        lower: lo.lower().clone(),
        lower_kind: lo.lower_kind(),
        upper: hi.upper().clone(),
        upper_kind: hi.upper_kind(),
    }
}

/// The `rank`-th smallest value, if knowledge pins it down.
pub fn selection_value(k: &KnowledgeState, rank: usize) -> Option<Rational> {
    target_area(k.states(), rank).point().cloned()
}

/// The value is pinned and no unresolved interval may still equal it.
pub fn selection_full_solved(k: &KnowledgeState, rank: usize) -> bool {
    match selection_value(k, rank) {
        Some(v) => k.states().iter().all(|s| !s.needs_query() || !s.contains(&v)),
        None => false,
    }
}

pub fn set_solved(instance: &Instance, set: usize, k: &KnowledgeState) -> bool {
    let members = &instance.sets()[set].members;
    match instance.problem() {
        ProblemKind::Sorting => sorting_solved(members, k),
        ProblemKind::Minimum => minimum_solved(members, k),
        ProblemKind::SelectionValue { rank } => selection_value(k, rank).is_some(),
        ProblemKind::SelectionFull { rank } => selection_full_solved(k, rank),
    }
}

pub fn instance_solved(instance: &Instance, k: &KnowledgeState) -> bool {
    (0..instance.m()).all(|s| set_solved(instance, s, k))
}

/// The provable answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionCertificate {
    /// One order per set.
    Sorting(Vec<Vec<ElementId>>),
    /// One minimum per set.
    Minimum(Vec<(ElementId, Rational)>),
    SelectionValue(Rational),
    SelectionFull {
        value: Rational,
        holders: Vec<ElementId>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("certificate kind does not match the problem")]
    WrongKind,
    #[error("set {set}: {reason}")]
    Set { set: usize, reason: String },
    #[error("{0}")]
    Selection(String),
}

fn sorted_order(members: &[ElementId], k: &KnowledgeState) -> Vec<ElementId> {
    let mut order = members.to_vec();
    order.sort_by(|&a, &b| {
        cmp_lower(k.state(a), k.state(b))
            .then_with(|| cmp_upper(k.state(a), k.state(b)))
            .then(a.cmp(&b))
    });
    order
}

/// Reads the answer off the knowledge state, if the instance is solved.
pub fn extract_certificate(instance: &Instance, k: &KnowledgeState) -> Option<SolutionCertificate> {
    if !instance_solved(instance, k) {
        return None;
    }
    Some(match instance.problem() {
        ProblemKind::Sorting => {
            SolutionCertificate::Sorting(instance.sets().iter().map(|s| sorted_order(&s.members, k)).collect())
        }
        ProblemKind::Minimum => SolutionCertificate::Minimum(
            instance
                .sets()
                .iter()
                .map(|s| minimum_solution(&s.members, k).expect("solved set"))
                .collect(),
        ),
        ProblemKind::SelectionValue { rank } => {
            SolutionCertificate::SelectionValue(selection_value(k, rank).expect("solved"))
        }
        ProblemKind::SelectionFull { rank } => {
            let value = selection_value(k, rank).expect("solved");
            let holders = instance.ids().filter(|&id| k.value(id) == Some(&value)).collect();
            SolutionCertificate::SelectionFull { value, holders }
        }
    })
}

/// Checks the certificate twice: provable from knowledge alone, and true
/// under the realization.
pub fn verify_certificate(
    instance: &Instance,
    k: &KnowledgeState,
    cert: &SolutionCertificate,
    realization: &Realization,
) -> Result<(), CertificateError> {
    let set_err = |set: usize, reason: String| CertificateError::Set { set, reason };
    match (instance.problem(), cert) {
        (ProblemKind::Sorting, SolutionCertificate::Sorting(orders)) => {
            if orders.len() != instance.m() {
                return Err(CertificateError::WrongKind);
            }
            for (s, (set, order)) in instance.sets().iter().zip(orders).enumerate() {
                let mut a = set.members.clone();
                let mut b = order.clone();
                a.sort();
                b.sort();
                if a != b {
                    return Err(set_err(s, "order is not a permutation of the set".into()));
                }
                for (p, &x) in order.iter().enumerate() {
                    for &y in &order[p + 1..] {
                        if k.state(x).upper() > k.state(y).lower() {
                            return Err(set_err(s, format!("{x} before {y} is not provable")));
                        }
                    }
                }
                for w in order.windows(2) {
                    if realization.value(w[0]) > realization.value(w[1]) {
                        return Err(set_err(s, format!("{} and {} are out of order", w[0], w[1])));
                    }
                }
            }
        }
        (ProblemKind::Minimum, SolutionCertificate::Minimum(mins)) => {
            if mins.len() != instance.m() {
                return Err(CertificateError::WrongKind);
            }
            for (s, (set, (id, v))) in instance.sets().iter().zip(mins).enumerate() {
                if !set.members.contains(id) || k.value(*id) != Some(v) {
                    return Err(set_err(s, format!("{id} is not a known member with value {v}")));
                }
                let provable = set.members.iter().all(|&j| match k.value(j) {
                    Some(w) => w >= v,
                    None => k.state(j).lower() >= v,
                });
                if !provable {
                    return Err(set_err(s, format!("{v} is not provably the minimum")));
                }
                let truth = set.members.iter().map(|&j| realization.value(j)).min().unwrap();
                if truth != v {
                    return Err(set_err(s, format!("true minimum is {truth}, not {v}")));
                }
            }
        }
        (ProblemKind::SelectionValue { rank }, SolutionCertificate::SelectionValue(v)) => {
            check_selection_value(k, rank, v, realization)?;
        }
        (ProblemKind::SelectionFull { rank }, SolutionCertificate::SelectionFull { value, holders }) => {
            check_selection_value(k, rank, value, realization)?;
            if k.states().iter().any(|s| s.needs_query() && s.contains(value)) {
                return Err(CertificateError::Selection(format!(
                    "an unqueried interval still contains {value}"
                )));
            }
            let known: Vec<ElementId> = instance.ids().filter(|&id| k.value(id) == Some(value)).collect();
            let truth: Vec<ElementId> = instance.ids().filter(|&id| realization.value(id) == value).collect();
            if &known != holders || &truth != holders {
                return Err(CertificateError::Selection(format!(
                    "holders of {value} differ: claimed {holders:?}, provable {known:?}, true {truth:?}"
                )));
            }
        }
        _ => return Err(CertificateError::WrongKind),
    }
    Ok(())
}

fn check_selection_value(
    k: &KnowledgeState,
    rank: usize,
    v: &Rational,
    realization: &Realization,
) -> Result<(), CertificateError> {
    if selection_value(k, rank).as_ref() != Some(v) {
        return Err(CertificateError::Selection(format!("{v} is not provable")));
    }
    let truth = realization.kth_smallest(rank);
    if truth != v {
        return Err(CertificateError::Selection(format!("true value is {truth}, not {v}")));
    }
    Ok(())
}

/// Classification of intervals meeting the target area.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    /// Contains the whole target area.
    Contains,
    /// Lies strictly inside, missing points on both sides.
    Inside,
    /// Covers the left end only.
    Left,
    /// Covers the right end only.
    Right,
}

/// Category of `s` relative to `ta`, or `None` if they are disjoint.
pub fn categorize<S: Bounds + ?Sized>(s: &S, ta: &TargetArea) -> Option<Category> {
    if !intersects(s, ta) {
        return None;
    }
    let left = cmp_lower(s, ta) != Ordering::Greater;
    let right = cmp_upper(s, ta) != Ordering::Less;
    Some(match (left, right) {
        (true, true) => Category::Contains,
        (false, false) => Category::Inside,
        (true, false) => Category::Left,
        (false, true) => Category::Right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::UncertainInterval;

    fn knowledge(specs: &[&str]) -> KnowledgeState {
        let ivs: Vec<UncertainInterval> = specs.iter().map(|s| s.parse().unwrap()).collect();
        KnowledgeState::from_intervals(&ivs)
    }

    fn ids(v: &[u32]) -> Vec<ElementId> {
        v.iter().map(|&i| ElementId(i)).collect()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn minimum_examples() {
        let mut k = knowledge(&["(1,3)", "(2,4)", "(5,6)"]);
        k.reveal(ElementId(1), q("2.5")).unwrap();
        k.reveal(ElementId(2), q("3.5")).unwrap();
        let set = ids(&[1, 2, 3]);
        assert_eq!(minimum_solution(&set, &k), Some((ElementId(1), q("2.5"))));
        assert_eq!(minimum_discard(&set, &k), ids(&[3]));

        let k = knowledge(&["(1,3)"]);
        assert!(!minimum_solved(&ids(&[1]), &k));

        let k = knowledge(&["{2}", "(3,4)"]);
        assert_eq!(minimum_solution(&ids(&[1, 2]), &k), Some((ElementId(1), q("2"))));
        assert!(minimum_pending(&ids(&[1, 2]), &k).is_empty());
    }

    #[test]
    fn discard_uses_upper_endpoints() {
        let k = knowledge(&["(0,1)", "(1,2)", "(1/2,3)"]);
        assert_eq!(minimum_discard(&ids(&[1, 2, 3]), &k), ids(&[2]));
        assert_eq!(minimum_pending(&ids(&[1, 2, 3]), &k), ids(&[1, 3]));
    }

    #[test]
    fn sorting_examples() {
        // the two configurations of a dependent pair where both or one query suffice
        let mut both = knowledge(&["[0,2]", "[1,3]"]);
        both.reveal(ElementId(1), q("1.5")).unwrap();
        assert!(!sorting_solved(&ids(&[1, 2]), &both));
        both.reveal(ElementId(2), q("1.8")).unwrap();
        assert!(sorting_solved(&ids(&[1, 2]), &both));
        assert!(!sorting_solved(&ids(&[1, 2]), &knowledge(&["[0,2]", "[1,3]"])));
        assert!(sorting_solved(&ids(&[1, 2]), &knowledge(&["{1}", "{1}"])));
    }

    #[test]
    fn target_area_with_mixed_kinds() {
        let k = knowledge(&["(0,3]", "[1,2)", "[1,5]"]);
        let ta = target_area(k.states(), 2);
        assert_eq!((ta.lower.clone(), ta.lower_kind), (q("1"), Endpoint::Closed));
        assert_eq!((ta.upper.clone(), ta.upper_kind), (q("3"), Endpoint::Closed));
        let k = knowledge(&["(0,1)", "(1,2)"]);
        let ta = target_area(k.states(), 1);
        assert_eq!(ta.lower_kind, Endpoint::Open);
        assert_eq!(ta.upper_kind, Endpoint::Open);
    }

    #[test]
    fn selection_examples() {
        // i-1 left copies, i-1 right copies, one middle interval, with i = 3
        let mut k = knowledge(&["[0,3]", "[0,3]", "[5,8]", "[5,8]", "[2,6]"]);
        assert!(!selection_full_solved(&k, 3));
        for (id, v) in [(1, "1"), (2, "1"), (5, "2.5")] {
            k.reveal(ElementId(id), q(v)).unwrap();
        }
        assert_eq!(selection_value(&k, 3), Some(q("2.5")));
        assert!(selection_full_solved(&k, 3));

        let k = knowledge(&["{1}", "{2}", "{2}"]);
        assert!(selection_full_solved(&k, 2));

        // i copies of (0,5) and i copies of {3}; i-1 copies answered 1
        let mut k = knowledge(&["(0,5)", "(0,5)", "(0,5)", "{3}", "{3}", "{3}"]);
        k.reveal(ElementId(1), q("1")).unwrap();
        k.reveal(ElementId(2), q("1")).unwrap();
        assert_eq!(selection_value(&k, 3), None);
        k.reveal(ElementId(3), q("4")).unwrap();
        assert_eq!(selection_value(&k, 3), Some(q("3")));
    }

    #[test]
    fn categories() {
        let k = knowledge(&["[0,3]", "[0,6]", "[2,9]", "[3,4]", "[5,8]"]);
        let ta = target_area(k.states(), 3);
        let cats: Vec<_> = k.states().iter().map(|s| categorize(s, &ta)).collect();
        assert_eq!(ta.lower, q("2"));
        assert_eq!(ta.upper, q("6"));
        assert_eq!(
            cats,
            vec![
                Some(Category::Left),
                Some(Category::Contains),
                Some(Category::Contains),
                Some(Category::Inside),
                Some(Category::Right),
            ]
        );
        let far = UncertainInterval::closed(q("9"), q("10")).unwrap();
        assert_eq!(categorize(&far, &ta), None);
    }
}
