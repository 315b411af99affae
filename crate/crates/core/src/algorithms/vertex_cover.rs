//! Vertex covers of the dependency graph.

use crate::instance::{ElementId, Instance};
use crate::interval::{cmp_upper, dependent, ElementState};
use crate::knowledge::KnowledgeState;

/// Largest component the exact branch-and-bound solver accepts.
pub const GENERAL_EXACT_CAP: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Greedy independent set by right endpoint; exact on interval graphs.
    IntervalExact,
    /// Branch and bound per connected component.
    GeneralExact,
    /// Both endpoints of a greedy maximal matching.
    Matching,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("interval-exact cover needs a single-set instance")]
    NotIntervalGraph,
    #[error("component with {0} vertices exceeds the exact cover cap of {GENERAL_EXACT_CAP}")]
    TooLarge(usize),
}

/// Elements joined when they are dependent and share a set.
#[derive(Debug, Clone)]
pub struct DependencyGraph {
    states: Vec<ElementState>,
    adj: Vec<Vec<usize>>,
    single_set: bool,
}

impl DependencyGraph {
    pub fn build(instance: &Instance, knowledge: &KnowledgeState) -> Self {
        let n = instance.n();
        let mut adj = vec![Vec::new(); n];
        for set in instance.sets() {
            for (p, &a) in set.members.iter().enumerate() {
                for &b in &set.members[p + 1..] {
                    if dependent(knowledge.state(a), knowledge.state(b)) {
                        adj[a.idx()].push(b.idx());
                        adj[b.idx()].push(a.idx());
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        DependencyGraph {
            states: knowledge.states().to_vec(),
            adj,
            single_set: instance.m() == 1,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, list)| {
            list.iter()
                .filter(move |&&b| b > a)
                .map(move |&b| (ElementId::from_idx(a), ElementId::from_idx(b)))
        })
    }

    pub fn is_cover(&self, cover: &[ElementId]) -> bool {
        let mut inside = vec![false; self.states.len()];
        for id in cover {
            inside[id.idx()] = true;
        }
        self.edges().all(|(a, b)| inside[a.idx()] || inside[b.idx()])
    }

    /// A cover using only elements that can still be queried. Edges touching
    /// a resolved element force the other endpoint into the cover.
    pub fn min_vertex_cover(&self, mode: CoverMode) -> Result<Vec<ElementId>, CoverError> {
        let n = self.states.len();
        let queryable: Vec<bool> = self.states.iter().map(ElementState::needs_query).collect();
        let mut forced = vec![false; n];
        for (v, nbrs) in self.adj.iter().enumerate() {
            if !queryable[v] {
                for &u in nbrs {
                    forced[u] = true;
                }
            }
        }
        // the rest of the graph: queryable, unforced vertices
        let alive: Vec<bool> = (0..n).map(|v| queryable[v] && !forced[v]).collect();
        let rest = match mode {
            CoverMode::IntervalExact => {
                if !self.single_set {
                    return Err(CoverError::NotIntervalGraph);
                }
                self.interval_cover(&alive)
            }
            CoverMode::GeneralExact => self.exact_cover(&alive)?,
            CoverMode::Matching => self.matching_cover(&alive),
        };
        let mut cover: Vec<ElementId> = (0..n)
            .filter(|&v| forced[v] || rest[v])
            .map(ElementId::from_idx)
            .collect();
        cover.sort();
        Ok(cover)
    }

    fn live_neighbours<'a>(&'a self, v: usize, alive: &'a [bool]) -> impl Iterator<Item = usize> + 'a {
        self.adj[v].iter().copied().filter(move |&u| alive[u])
    }

    fn interval_cover(&self, alive: &[bool]) -> Vec<bool> {
        let mut order: Vec<usize> = (0..alive.len())
            .filter(|&v| alive[v] && self.live_neighbours(v, alive).next().is_some())
            .collect();
        order.sort_by(|&a, &b| cmp_upper(&self.states[a], &self.states[b]).then(a.cmp(&b)));
        let mut in_cover = vec![false; alive.len()];
        let mut last: Option<usize> = None;
        for v in order {
            match last {
                Some(l) if self.adj[l].binary_search(&v).is_ok() => in_cover[v] = true,
                _ => last = Some(v),
            }
        }
        in_cover
    }

    fn matching_cover(&self, alive: &[bool]) -> Vec<bool> {
        let mut in_cover = vec![false; alive.len()];
        for (a, b) in self.edges() {
            let (a, b) = (a.idx(), b.idx());
            if alive[a] && alive[b] && !in_cover[a] && !in_cover[b] {
                in_cover[a] = true;
                in_cover[b] = true;
            }
        }
        in_cover
    }

    fn exact_cover(&self, alive: &[bool]) -> Result<Vec<bool>, CoverError> {
        let n = alive.len();
        let mut in_cover = vec![false; n];
        let mut seen = vec![false; n];
        for start in 0..n {
            if !alive[start] || seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < comp.len() {
                let v = comp[head];
                head += 1;
                for u in self.live_neighbours(v, alive) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                    }
                }
            }
            if comp.len() == 1 {
                continue;
            }
            if comp.len() > GENERAL_EXACT_CAP {
                return Err(CoverError::TooLarge(comp.len()));
            }
            comp.sort_unstable();
            let masks: Vec<u64> = comp
                .iter()
                .map(|&v| {
                    self.live_neighbours(v, alive)
                        .map(|u| 1u64 << comp.binary_search(&u).unwrap())
                        .fold(0, |m, b| m | b)
                })
                .collect();
            let full = if comp.len() == 64 {
                u64::MAX
            } else {
                (1u64 << comp.len()) - 1
            };
            let mut best = (comp.len() as u32 + 1, 0u64);
            branch(&masks, full, 0, &mut best);
            for (i, &v) in comp.iter().enumerate() {
                in_cover[v] = best.1 >> i & 1 == 1;
            }
        }
        Ok(in_cover)
    }
}

/// Lower bound on the cover of the remaining graph: a greedy matching.
fn matching_bound(adj: &[u64], active: u64) -> u32 {
    let mut left = active;
    let mut size = 0;
    while left != 0 {
        let v = left.trailing_zeros() as usize;
        left &= !(1 << v);
        let nb = adj[v] & left;
        if nb != 0 {
            left &= !(1 << nb.trailing_zeros());
            size += 1;
        }
    }
    size
}

fn branch(adj: &[u64], active: u64, chosen: u64, best: &mut (u32, u64)) {
    let taken = chosen.count_ones();
    if taken + matching_bound(adj, active) >= best.0 {
        return;
    }
    // highest-degree vertex, lowest index on ties
    let mut pick = None;
    let mut top = 0;
    let mut rest = active;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & active).count_ones();
        if d > top {
            top = d;
            pick = Some(v);
        }
    }
    let Some(v) = pick else {
        *best = (taken, chosen);
        return;
    };
    let nb = adj[v] & active;
    if top == 1 {
        // a leaf: taking its neighbour is never worse
        let u = nb.trailing_zeros();
        branch(adj, active & !(1 << u) & !(1 << v), chosen | 1 << u, best);
        return;
    }
    branch(adj, active & !(1 << v), chosen | 1 << v, best);
    branch(adj, active & !nb & !(1 << v), chosen | nb, best);
}
