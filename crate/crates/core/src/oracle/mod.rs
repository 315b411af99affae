//! The answering side of a run: fixed realizations and adaptive adversaries.
//!
//! Oracles see a whole round before answering any of it. After the run,
//! `finalize` must return a realization that agrees with every answer given.

mod minimum;
mod selection;
mod sorting_pairs;

pub use minimum::{minimum_additive_adversary, minimum_wlb_adversary, AdditiveAdversary, WlbAdversary};
pub use selection::{
    selection_full_lb_adversary, selection_value_lb_adversary, SelectionFullAdversary, SelectionValueAdversary,
};
pub use sorting_pairs::{sorting_pair_adversary, PairAdversary};

use crate::instance::{ElementId, Realization};
use crate::knowledge::KnowledgeState;
use crate::rational::Rational;

pub trait ValueOracle: Send {
    /// Values for every id in `round`, in the same order.
    fn answer_round(&mut self, knowledge: &KnowledgeState, round: &[ElementId]) -> Vec<Rational>;

    /// A complete realization consistent with all answers so far.
    fn finalize(&mut self, knowledge: &KnowledgeState) -> Realization;

    /// Free-form remarks about adaptive choices, one per line.
    fn notes(&self) -> Vec<String> {
        Vec::new()
    }
}

/// Answers from a fixed realization.
#[derive(Debug, Clone)]
pub struct FixedOracle {
    realization: Realization,
}

impl FixedOracle {
    pub fn new(realization: Realization) -> Self {
        FixedOracle { realization }
    }
}

impl ValueOracle for FixedOracle {
    fn answer_round(&mut self, _: &KnowledgeState, round: &[ElementId]) -> Vec<Rational> {
        round.iter().map(|&id| self.realization.value(id).clone()).collect()
    }

    fn finalize(&mut self, _: &KnowledgeState) -> Realization {
        self.realization.clone()
    }
}

/// Intervals `(1 + i*eps, 100 + i*eps)` for `i = 1..=len`; the shape used by
/// both minimum adversaries. A set with its minimum at position `j` has that
/// element valued `1 + (j + 1/2) eps` and every other `100 + (i - 1/2) eps`.
pub(crate) fn staircase_value(i: usize, min_at: Option<usize>, eps: &Rational) -> Rational {
    let half = Rational::new(1, 2);
    let pos = Rational::from(i);
    if min_at == Some(i) {
        Rational::one() + (pos + half) * eps
    } else {
        Rational::from(100i64) + (pos - half) * eps
    }
}

pub(crate) fn staircase_interval(i: usize, eps: &Rational) -> crate::interval::UncertainInterval {
    let shift = Rational::from(i) * eps;
    crate::interval::UncertainInterval::open(Rational::one() + &shift, Rational::from(100i64) + shift)
        .expect("staircase interval")
}
