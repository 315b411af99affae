//! Online round-building algorithms.
//!
//! Every algorithm answers one question per round: given the instance and
//! what is known so far, which (at most `k`) elements to query next.

mod budget;
mod minimum;
mod selection;
mod sorting;
pub mod vertex_cover;

pub use budget::{BudgetAlgorithm, Charge, RoundCharges};
pub use minimum::{Bal, BalPolicy, MinSingle};
pub use selection::{CategoryCounts, SelectionFull, SelectionValue};
pub use sorting::{SortingAlgorithm, SortingBatches};
pub use vertex_cover::{CoverMode, DependencyGraph};

use crate::instance::{ElementId, Instance, ProblemKind};
use crate::knowledge::KnowledgeState;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgorithmError {
    #[error("{alg} does not handle {problem} instances")]
    WrongProblem { alg: String, problem: String },
    #[error("{0}")]
    Cover(#[from] vertex_cover::CoverError),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("unknown algorithm `{0}`")]
    Unknown(String),
}

pub trait RoundAlgorithm: Send {
    fn name(&self) -> String;

    /// At most `instance.k()` distinct, unqueried, non-trivial ids. Empty
    /// only when the instance is already solved.
    fn next_round(&mut self, instance: &Instance, knowledge: &KnowledgeState)
        -> Result<Vec<ElementId>, AlgorithmError>;

    /// Per-round charging record, for algorithms that keep one.
    fn charges(&self) -> &[RoundCharges] {
        &[]
    }

    /// Per-round category counts, for algorithms that keep them.
    fn categories(&self) -> &[CategoryCounts] {
        &[]
    }
}

/// An algorithm with unlimited queries per batch and a limited number of
/// batches.
pub trait BatchAlgorithm: Send {
    fn name(&self) -> String;

    /// The most batches this algorithm will ask for.
    fn max_batches(&self) -> usize;

    fn next_batch(&mut self, instance: &Instance, knowledge: &KnowledgeState)
        -> Result<Vec<ElementId>, AlgorithmError>;
}

/// One batch holding every element that still needs a query.
#[derive(Debug, Clone, Default)]
pub struct QueryAll;

impl BatchAlgorithm for QueryAll {
    fn name(&self) -> String {
        "query-all".into()
    }

    fn max_batches(&self) -> usize {
        1
    }

    fn next_batch(
        &mut self,
        instance: &Instance,
        knowledge: &KnowledgeState,
    ) -> Result<Vec<ElementId>, AlgorithmError> {
        Ok(instance.ids().filter(|&id| knowledge.needs_query(id)).collect())
    }
}

pub const ROUND_ALGORITHMS: [&str; 8] = [
    "sorting-vc",
    "sorting-matching",
    "min-single",
    "bal",
    "bal-rr",
    "budget",
    "sel-value",
    "sel-full",
];

pub const BATCH_ALGORITHMS: [&str; 2] = ["sorting-batches", "query-all"];

pub fn round_algorithm(name: &str) -> Result<Box<dyn RoundAlgorithm>, AlgorithmError> {
    Ok(match name {
        "sorting-vc" => Box::new(SortingAlgorithm::exact()),
        "sorting-matching" => Box::new(SortingAlgorithm::matching()),
        "min-single" => Box::new(MinSingle),
        "bal" => Box::new(Bal::new(BalPolicy::MinPrefix)),
        "bal-rr" => Box::new(Bal::new(BalPolicy::RoundRobin)),
        "budget" => Box::new(BudgetAlgorithm::default()),
        "sel-value" => Box::new(SelectionValue::default()),
        "sel-full" => Box::new(SelectionFull::default()),
        _ => return Err(AlgorithmError::Unknown(name.to_string())),
    })
}

pub fn batch_algorithm(name: &str) -> Result<Box<dyn BatchAlgorithm>, AlgorithmError> {
    Ok(match name {
        "sorting-batches" => Box::new(SortingBatches::default()),
        "query-all" => Box::new(QueryAll),
        _ => return Err(AlgorithmError::Unknown(name.to_string())),
    })
}

/// Which problems each selector handles.
pub fn supports(name: &str, problem: ProblemKind) -> bool {
    match name {
        "sorting-vc" | "sorting-matching" | "sorting-batches" => problem == ProblemKind::Sorting,
        "min-single" | "bal" | "bal-rr" | "budget" => problem == ProblemKind::Minimum,
        "sel-value" => matches!(problem, ProblemKind::SelectionValue { .. }),
        "sel-full" => matches!(problem, ProblemKind::SelectionFull { .. }),
        "query-all" => true,
        _ => false,
    }
}

pub(crate) fn require(alg: &str, instance: &Instance, ok: bool) -> Result<(), AlgorithmError> {
    if ok {
        Ok(())
    } else {
        Err(AlgorithmError::WrongProblem {
            alg: alg.to_string(),
            problem: instance.problem().keyword().to_string(),
        })
    }
}
