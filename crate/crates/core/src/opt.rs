//! Offline optima: the fewest queries that make an instance solved under a
//! known realization.

use std::fmt;

use crate::instance::{ElementId, Instance, ProblemKind, Realization};
use crate::interval::{cmp_lower, dependent, Bounds, ElementState};
use crate::knowledge::KnowledgeState;
use crate::solved::instance_solved;

pub const DEFAULT_CAP: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptMethod {
    ClosedForm,
    BruteForce,
}

impl fmt::Display for OptMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptMethod::ClosedForm => "closed-form",
            OptMethod::BruteForce => "brute-force",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptReport {
    pub opt1: usize,
    /// Sorted ascending.
    pub opt_set: Vec<ElementId>,
    pub opt_k: usize,
    pub method: OptMethod,
}

impl OptReport {
    fn new(instance: &Instance, mut opt_set: Vec<ElementId>, method: OptMethod) -> Self {
        opt_set.sort();
        opt_set.dedup();
        OptReport {
            opt1: opt_set.len(),
            opt_k: opt_k(opt_set.len(), instance.k()),
            opt_set,
            method,
        }
    }

    pub fn contains(&self, id: ElementId) -> bool {
        self.opt_set.binary_search(&id).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OptError {
    #[error("{candidates} candidate queries exceed the brute-force cap of {cap}")]
    CapExceeded { candidates: usize, cap: usize },
    #[error("no closed form for {0}")]
    NoClosedForm(ProblemKind),
}

/// Rounds needed for `opt1` queries at `k` per round.
pub fn opt_k(opt1: usize, k: usize) -> usize {
    opt1.div_ceil(k)
}

fn knowledge_after(instance: &Instance, r: &Realization, queried: &[ElementId]) -> KnowledgeState {
    KnowledgeState::with_revealed(instance, queried, |id| r.value(id).clone())
        .expect("realization values lie in their intervals")
}

/// Does querying exactly `queried` solve the instance under `r`?
pub fn is_feasible(instance: &Instance, r: &Realization, queried: &[ElementId]) -> bool {
    instance_solved(instance, &knowledge_after(instance, r, queried))
}

/// Per set, every non-trivial element whose left endpoint lies strictly below
/// the set's minimum value.
pub fn opt1_minimum(instance: &Instance, r: &Realization) -> Result<OptReport, OptError> {
    if instance.problem() != ProblemKind::Minimum {
        return Err(OptError::NoClosedForm(instance.problem()));
    }
    let mut set = Vec::new();
    for s in instance.sets() {
        let min = s.members.iter().map(|&j| r.value(j)).min().expect("nonempty set");
        set.extend(s.members.iter().copied().filter(|&j| {
            let iv = instance.interval(j);
            !iv.is_trivial() && iv.lower() < min
        }));
    }
    Ok(OptReport::new(instance, set, OptMethod::ClosedForm))
}

/// Every non-trivial interval containing the selected value.
pub fn opt1_selection_full(instance: &Instance, r: &Realization) -> Result<OptReport, OptError> {
    let ProblemKind::SelectionFull { rank } = instance.problem() else {
        return Err(OptError::NoClosedForm(instance.problem()));
    };
    let v = r.kth_smallest(rank);
    let set = instance
        .ids()
        .filter(|&j| {
            let iv = instance.interval(j);
            !iv.is_trivial() && iv.contains(v)
        })
        .collect();
    Ok(OptReport::new(instance, set, OptMethod::ClosedForm))
}

/// Minimum feasible set by exhaustive search in order of size; among sets of
/// minimum size the lexicographically smallest is returned.
pub fn opt1_bruteforce(instance: &Instance, r: &Realization, cap: usize) -> Result<OptReport, OptError> {
    if instance.problem() == ProblemKind::Sorting {
        return sorting_bruteforce(instance, r, cap);
    }
    let candidates: Vec<ElementId> = instance
        .ids()
        .filter(|&id| !instance.interval(id).is_trivial())
        .collect();
    if candidates.len() > cap {
        return Err(OptError::CapExceeded {
            candidates: candidates.len(),
            cap,
        });
    }
    for size in 0..=candidates.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let pick: Vec<ElementId> = idx.iter().map(|&i| candidates[i]).collect();
            if is_feasible(instance, r, &pick) {
                return Ok(OptReport::new(instance, pick, OptMethod::BruteForce));
            }
            if !next_combination(&mut idx, candidates.len()) {
                break;
            }
        }
    }
    unreachable!("querying every non-trivial element always solves the instance")
}

/// Advances `idx` to the next `idx.len()`-subset of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let size = idx.len();
    for pos in (0..size).rev() {
        if idx[pos] < n - size + pos {
            idx[pos] += 1;
            for later in pos + 1..size {
                idx[later] = idx[later - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// One pair of elements that share a set and are dependent before any query.
/// `ok[qa][qb]` says whether the pair is resolved when a (resp. b) is queried.
struct PairConstraint {
    a: usize,
    b: usize,
    ok: [[bool; 2]; 2],
}

/// Sorting feasibility decomposes over pairs, and pairs group into connected
/// components that can be searched independently. The union of per-component
/// lexicographic minima is the global lexicographic minimum.
fn sorting_bruteforce(instance: &Instance, r: &Realization, cap: usize) -> Result<OptReport, OptError> {
    let n = instance.n();
    let state = |id: usize, queried: bool| {
        let eid = ElementId::from_idx(id);
        if queried {
            ElementState::Known(r.value(eid).clone())
        } else {
            ElementState::Interval(instance.interval(eid).clone())
        }
    };
    let trivial: Vec<bool> = instance.intervals().iter().map(|i| i.is_trivial()).collect();
    let mut seen = std::collections::HashSet::new();
    let mut pairs = Vec::new();
    for set in instance.sets() {
        for (p, &x) in set.members.iter().enumerate() {
            for &y in &set.members[p + 1..] {
                let (a, b) = (x.idx().min(y.idx()), x.idx().max(y.idx()));
                if !dependent(&state(a, false), &state(b, false)) || !seen.insert((a, b)) {
                    continue;
                }
                let ok = [false, true].map(|qa| {
                    [false, true].map(|qb| {
                        let legal = !(qa && trivial[a]) && !(qb && trivial[b]);
                        legal && !dependent(&state(a, qa), &state(b, qb))
                    })
                });
                pairs.push(PairConstraint { a, b, ok });
            }
        }
    }

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut root = x;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = x;
        while parent[cur] != root {
            cur = std::mem::replace(&mut parent[cur], root);
        }
        root
    }
    for p in &pairs {
        let (ra, rb) = (find(&mut parent, p.a), find(&mut parent, p.b));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut components: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for p in &pairs {
        for v in [p.a, p.b] {
            let root = find(&mut parent, v);
            components.entry(root).or_default().push(v);
        }
    }

    let mut chosen = Vec::new();
    for (root, mut nodes) in components {
        nodes.sort_unstable();
        nodes.dedup();
        let candidates = nodes.iter().filter(|&&v| !trivial[v]).count();
        if candidates > cap {
            return Err(OptError::CapExceeded { candidates, cap });
        }
        let local: Vec<&PairConstraint> = pairs.iter().filter(|p| find(&mut parent, p.a) == root).collect();
        let pos_of = |v: usize| nodes.binary_search(&v).unwrap();
        // constraints checked when the later endpoint (in node order) is decided
        let mut by_last: Vec<Vec<Check>> = vec![Vec::new(); nodes.len()];
        for p in local {
            let (pa, pb) = (pos_of(p.a), pos_of(p.b));
            by_last[pb].push((pa, pb, p.ok));
        }
        let mut pick = vec![false; nodes.len()];
        let mut found = None;
        for size in 0..=candidates {
            if search(&nodes, &trivial, &by_last, &mut pick, 0, 0, size) {
                found = Some(pick.clone());
                break;
            }
        }
        let pick = found.expect("querying every candidate resolves all pairs");
        chosen.extend(
            nodes
                .iter()
                .zip(&pick)
                .filter(|(_, &p)| p)
                .map(|(&v, _)| ElementId::from_idx(v)),
        );
    }
    Ok(OptReport::new(instance, chosen, OptMethod::BruteForce))
}

/// Positions of a pair and its allowed (query a, query b) combinations.
type Check = (usize, usize, [[bool; 2]; 2]);

/// Include-first depth-first search over nodes in id order, so the first
/// assignment found with exactly `size` picks is the lexicographic minimum.
fn search(
    nodes: &[usize],
    trivial: &[bool],
    by_last: &[Vec<Check>],
    pick: &mut [bool],
    pos: usize,
    used: usize,
    size: usize,
) -> bool {
    if pos == nodes.len() {
        return used == size;
    }
    let options: &[bool] = if trivial[nodes[pos]] || used == size {
        &[false]
    } else {
        &[true, false]
    };
    for &take in options {
        pick[pos] = take;
        let consistent = by_last[pos]
            .iter()
            .all(|&(pa, pb, ok)| ok[pick[pa] as usize][pick[pb] as usize]);
        if consistent && search(nodes, trivial, by_last, pick, pos + 1, used + take as usize, size) {
            return true;
        }
    }
    pick[pos] = false;
    false
}

/// The fixed reference optimum used for wasted-query accounting: the closed
/// form where one exists, otherwise the brute-force lexicographic minimum.
pub fn canonical_opt(instance: &Instance, r: &Realization, cap: usize) -> Result<OptReport, OptError> {
    match instance.problem() {
        ProblemKind::Minimum => opt1_minimum(instance, r),
        ProblemKind::SelectionFull { .. } => opt1_selection_full(instance, r),
        ProblemKind::Sorting | ProblemKind::SelectionValue { .. } => opt1_bruteforce(instance, r, cap),
    }
}

/// For Minimum: within each set, the optimum restricted to the set is a
/// prefix of the left-endpoint order (ties by id) over non-trivial members.
pub fn is_prefix_per_set(instance: &Instance, report: &OptReport) -> bool {
    instance.sets().iter().all(|s| {
        let mut order: Vec<ElementId> = s
            .members
            .iter()
            .copied()
            .filter(|&j| !instance.interval(j).is_trivial())
            .collect();
        order.sort_by(|&a, &b| cmp_lower(instance.interval(a), instance.interval(b)).then(a.cmp(&b)));
        let flags: Vec<bool> = order.iter().map(|&j| report.contains(j)).collect();
        flags.windows(2).all(|w| w[0] || !w[1])
    })
}
