//! Problem instances and realizations.

use std::fmt;

use crate::interval::{Bounds, UncertainInterval};
use crate::rational::Rational;

/// External element id, 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub u32);

impl ElementId {
    pub fn from_idx(idx: usize) -> Self {
        ElementId(idx as u32 + 1)
    }

    pub fn idx(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Sorting,
    Minimum,
    SelectionValue { rank: usize },
    SelectionFull { rank: usize },
}

impl ProblemKind {
    pub fn rank(self) -> Option<usize> {
        match self {
            ProblemKind::SelectionValue { rank } | ProblemKind::SelectionFull { rank } => Some(rank),
            _ => None,
        }
    }

    pub fn is_selection(self) -> bool {
        self.rank().is_some()
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ProblemKind::Sorting => "sorting",
            ProblemKind::Minimum => "minimum",
            ProblemKind::SelectionValue { .. } => "selection-value",
            ProblemKind::SelectionFull { .. } => "selection-full",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rank() {
            Some(i) => write!(f, "{} i={i}", self.keyword()),
            None => f.write_str(self.keyword()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSet {
    pub name: String,
    pub members: Vec<ElementId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("k must be positive")]
    ZeroK,
    #[error("instance has no elements")]
    NoElements,
    #[error("set `{0}` is empty")]
    EmptySet(String),
    #[error("set `{set}` refers to unknown element {id}")]
    UnknownElement { set: String, id: u32 },
    #[error("set `{set}` lists element {id} twice")]
    DuplicateMember { set: String, id: u32 },
    #[error("duplicate set name `{0}`")]
    DuplicateSetName(String),
    #[error("rank {rank} out of range 1..={n}")]
    RankOutOfRange { rank: usize, n: usize },
    #[error("selection instances need exactly one set containing every element")]
    SelectionFamily,
    #[error("element {id} has interval {interval}; this problem needs open or trivial intervals")]
    NotOpenOrTrivial { id: ElementId, interval: UncertainInterval },
    #[error("realization has {got} values for {n} elements")]
    RealizationLength { got: usize, n: usize },
    #[error("value {value} of element {id} lies outside {interval}")]
    ValueOutside {
        id: ElementId,
        value: Rational,
        interval: UncertainInterval,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    intervals: Vec<UncertainInterval>,
    sets: Vec<NamedSet>,
    problem: ProblemKind,
    k: usize,
}

impl Instance {
    pub fn new(
        intervals: Vec<UncertainInterval>,
        sets: Vec<NamedSet>,
        problem: ProblemKind,
        k: usize,
    ) -> Result<Self, InstanceError> {
        let inst = Instance {
            intervals,
            sets,
            problem,
            k,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// One set named `S` holding every element.
    pub fn single_set(
        intervals: Vec<UncertainInterval>,
        problem: ProblemKind,
        k: usize,
    ) -> Result<Self, InstanceError> {
        let all = (0..intervals.len()).map(ElementId::from_idx).collect();
        Self::new(
            intervals,
            vec![NamedSet {
                name: "S".to_string(),
                members: all,
            }],
            problem,
            k,
        )
    }

    fn validate(&self) -> Result<(), InstanceError> {
        if self.k == 0 {
            return Err(InstanceError::ZeroK);
        }
        let n = self.intervals.len();
        if n == 0 {
            return Err(InstanceError::NoElements);
        }
        let mut names = std::collections::HashSet::new();
        for set in &self.sets {
            if !names.insert(set.name.as_str()) {
                return Err(InstanceError::DuplicateSetName(set.name.clone()));
            }
            if set.members.is_empty() {
                return Err(InstanceError::EmptySet(set.name.clone()));
            }
            let mut seen = vec![false; n];
            for &id in &set.members {
                if id.0 == 0 || id.idx() >= n {
                    return Err(InstanceError::UnknownElement {
                        set: set.name.clone(),
                        id: id.0,
                    });
                }
                if std::mem::replace(&mut seen[id.idx()], true) {
                    return Err(InstanceError::DuplicateMember {
                        set: set.name.clone(),
                        id: id.0,
                    });
                }
            }
        }
        if self.sets.is_empty() {
            return Err(InstanceError::EmptySet("<none>".into()));
        }
        if let Some(rank) = self.problem.rank() {
            if rank == 0 || rank > n {
                return Err(InstanceError::RankOutOfRange { rank, n });
            }
            if self.sets.len() != 1 || self.sets[0].members.len() != n {
                return Err(InstanceError::SelectionFamily);
            }
        }
        if matches!(self.problem, ProblemKind::Minimum | ProblemKind::SelectionValue { .. }) {
            for (idx, interval) in self.intervals.iter().enumerate() {
                if !interval.is_open_or_trivial() {
                    return Err(InstanceError::NotOpenOrTrivial {
                        id: ElementId::from_idx(idx),
                        interval: interval.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.intervals.len()
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn problem(&self) -> ProblemKind {
        self.problem
    }

    pub fn intervals(&self) -> &[UncertainInterval] {
        &self.intervals
    }

    pub fn interval(&self, id: ElementId) -> &UncertainInterval {
        &self.intervals[id.idx()]
    }

    pub fn sets(&self) -> &[NamedSet] {
        &self.sets
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> {
        (0..self.n()).map(ElementId::from_idx)
    }

    /// Same instance with a different round width.
    pub fn with_k(&self, k: usize) -> Result<Self, InstanceError> {
        if k == 0 {
            return Err(InstanceError::ZeroK);
        }
        Ok(Instance { k, ..self.clone() })
    }

    /// Indices of the sets containing each element.
    pub fn memberships(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n()];
        for (s, set) in self.sets.iter().enumerate() {
            for id in &set.members {
                out[id.idx()].push(s);
            }
        }
        out
    }

    /// True iff no element belongs to two sets.
    pub fn is_disjoint(&self) -> bool {
        self.memberships().iter().all(|m| m.len() <= 1)
    }

    pub fn non_trivial_count(&self) -> usize {
        self.intervals.iter().filter(|i| !i.is_trivial()).count()
    }
}

/// Precise values, one per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    values: Vec<Rational>,
}

impl Realization {
    pub fn new(instance: &Instance, values: Vec<Rational>) -> Result<Self, InstanceError> {
        if values.len() != instance.n() {
            return Err(InstanceError::RealizationLength {
                got: values.len(),
                n: instance.n(),
            });
        }
        for (idx, (v, interval)) in values.iter().zip(instance.intervals()).enumerate() {
            if !interval.contains(v) {
                return Err(InstanceError::ValueOutside {
                    id: ElementId::from_idx(idx),
                    value: v.clone(),
                    interval: interval.clone(),
                });
            }
        }
        Ok(Realization { values })
    }

    pub fn value(&self, id: ElementId) -> &Rational {
        &self.values[id.idx()]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// The `rank`-th smallest value (1-based).
    pub fn kth_smallest(&self, rank: usize) -> &Rational {
        let mut sorted: Vec<&Rational> = self.values.iter().collect();
        sorted.sort();
        sorted[rank - 1]
    }
}
