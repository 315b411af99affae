//! The algorithm's view of the instance: original intervals plus revealed
//! values.

use crate::instance::{ElementId, Instance};
use crate::interval::{Bounds, ElementState, UncertainInterval};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RevealError {
    #[error("element {0} does not exist")]
    Unknown(ElementId),
    #[error("element {0} was already queried")]
    AlreadyKnown(ElementId),
    #[error("element {0} is trivial and cannot be queried")]
    Trivial(ElementId),
    #[error("value {value} for element {id} lies outside {interval}")]
    Outside {
        id: ElementId,
        value: Rational,
        interval: UncertainInterval,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeState {
    states: Vec<ElementState>,
}

impl KnowledgeState {
    pub fn new(instance: &Instance) -> Self {
        Self::from_intervals(instance.intervals())
    }

    pub fn from_intervals(intervals: &[UncertainInterval]) -> Self {
        KnowledgeState {
            states: intervals.iter().cloned().map(ElementState::Interval).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, id: ElementId) -> &ElementState {
        &self.states[id.idx()]
    }

    pub fn states(&self) -> &[ElementState] {
        &self.states
    }

    pub fn value(&self, id: ElementId) -> Option<&Rational> {
        self.state(id).value()
    }

    pub fn is_known(&self, id: ElementId) -> bool {
        self.state(id).is_known()
    }

    /// Non-trivial and not yet queried.
    pub fn needs_query(&self, id: ElementId) -> bool {
        self.state(id).needs_query()
    }

    /// Records the answer to a query. The value must lie in the interval.
    pub fn reveal(&mut self, id: ElementId, value: Rational) -> Result<(), RevealError> {
        let slot = self
            .states
            .get_mut(id.0.wrapping_sub(1) as usize)
            .ok_or(RevealError::Unknown(id))?;
        match slot {
            ElementState::Known(_) => Err(RevealError::AlreadyKnown(id)),
            ElementState::Interval(i) if i.is_trivial() => Err(RevealError::Trivial(id)),
            ElementState::Interval(i) if !i.contains(&value) => Err(RevealError::Outside {
                id,
                value,
                interval: i.clone(),
            }),
            ElementState::Interval(_) => {
                *slot = ElementState::Known(value);
                Ok(())
            }
        }
    }

    pub fn queried(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.states
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_known())
            .map(|(i, _)| ElementId::from_idx(i))
    }

    /// Knowledge after querying exactly `ids` under the given values.
    pub fn with_revealed<'a>(
        instance: &Instance,
        ids: impl IntoIterator<Item = &'a ElementId>,
        value_of: impl Fn(ElementId) -> Rational,
    ) -> Result<Self, RevealError> {
        let mut k = KnowledgeState::new(instance);
        for &id in ids {
            k.reveal(id, value_of(id))?;
        }
        Ok(k)
    }
}
