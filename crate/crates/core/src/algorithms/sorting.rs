use super::vertex_cover::{CoverMode, DependencyGraph};
use super::{require, AlgorithmError, BatchAlgorithm, RoundAlgorithm};
use crate::instance::{ElementId, Instance, ProblemKind};
use crate::interval::dependent;
use crate::knowledge::KnowledgeState;
use crate::solved::instance_solved;

/// Elements still in a dependent pair within some set; after a full vertex
/// cover has been queried these are exactly the intervals containing a
/// revealed or trivial point.
fn still_dependent(instance: &Instance, knowledge: &KnowledgeState) -> Vec<ElementId> {
    let mut hit = vec![false; instance.n()];
    for set in instance.sets() {
        for (p, &a) in set.members.iter().enumerate() {
            for &b in &set.members[p + 1..] {
                if dependent(knowledge.state(a), knowledge.state(b)) {
                    hit[a.idx()] |= knowledge.needs_query(a);
                    hit[b.idx()] |= knowledge.needs_query(b);
                }
            }
        }
    }
    instance.ids().filter(|id| hit[id.idx()]).collect()
}

fn cover_for(
    instance: &Instance,
    knowledge: &KnowledgeState,
    matching: bool,
) -> Result<Vec<ElementId>, AlgorithmError> {
    let g = DependencyGraph::build(instance, knowledge);
    let mode = match (matching, instance.m()) {
        (true, _) => CoverMode::Matching,
        (false, 1) => CoverMode::IntervalExact,
        (false, _) => CoverMode::GeneralExact,
    };
    Ok(g.min_vertex_cover(mode)?)
}

/// Query a vertex cover of the dependency graph, `k` at a time, then every
/// interval that still contains a known point.
#[derive(Debug, Clone)]
pub struct SortingAlgorithm {
    matching: bool,
    cover: Option<Vec<ElementId>>,
}

impl SortingAlgorithm {
    pub fn exact() -> Self {
        SortingAlgorithm {
            matching: false,
            cover: None,
        }
    }

    pub fn matching() -> Self {
        SortingAlgorithm {
            matching: true,
            cover: None,
        }
    }
}

impl RoundAlgorithm for SortingAlgorithm {
    fn name(&self) -> String {
        if self.matching {
            "sorting-matching"
        } else {
            "sorting-vc"
        }
        .into()
    }

    fn next_round(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        require(&self.name(), instance, instance.problem() == ProblemKind::Sorting)?;
        if instance_solved(instance, knowledge) {
            return Ok(Vec::new());
        }
        if self.cover.is_none() {
            self.cover = Some(cover_for(instance, knowledge, self.matching)?);
        }
        let cover = self.cover.as_ref().unwrap();
        let phase_one: Vec<ElementId> = cover
            .iter()
            .copied()
            .filter(|&id| knowledge.needs_query(id))
            .take(instance.k())
            .collect();
        if !phase_one.is_empty() {
            return Ok(phase_one);
        }
        let mut rest = still_dependent(instance, knowledge);
        rest.truncate(instance.k());
        Ok(rest)
    }
}

/// Two batches: a minimum vertex cover, then everything still dependent.
/// At most twice the optimal number of queries.
#[derive(Debug, Clone, Default)]
pub struct SortingBatches {
    used: usize,
}

impl BatchAlgorithm for SortingBatches {
    fn name(&self) -> String {
        "sorting-batches".into()
    }

    fn max_batches(&self) -> usize {
        2
    }

    fn next_batch(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        require(&self.name(), instance, instance.problem() == ProblemKind::Sorting)?;
        self.used += 1;
        match self.used {
            1 => cover_for(instance, knowledge, false),
            2 => Ok(still_dependent(instance, knowledge)),
            _ => Err(AlgorithmError::Internal("sorting needs only two batches".into())),
        }
    }
}
