//! Uncertainty intervals, per-element knowledge and the order relations
//! between them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::rational::{Rational, RationalError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Open,
    Closed,
}

impl Endpoint {
    pub fn is_open(self) -> bool {
        self == Endpoint::Open
    }

    pub fn is_closed(self) -> bool {
        self == Endpoint::Closed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("lower endpoint {lower} exceeds upper endpoint {upper}")]
    Reversed { lower: Rational, upper: Rational },
    #[error("degenerate interval at {0} must be closed on both sides")]
    DegenerateOpen(Rational),
    #[error("malformed interval `{0}`")]
    Malformed(String),
    #[error("bad endpoint in `{text}`: {source}")]
    Number {
        text: String,
        #[source]
        source: RationalError,
    },
}

/// Read access to the endpoints of anything interval-shaped.
///
/// Known values behave like the trivial closed interval `[v, v]`.
pub trait Bounds {
    fn lower(&self) -> &Rational;
    fn lower_kind(&self) -> Endpoint;
    fn upper(&self) -> &Rational;
    fn upper_kind(&self) -> Endpoint;

    fn is_point(&self) -> bool {
        self.lower() == self.upper()
    }

    fn contains(&self, v: &Rational) -> bool {
        let above = match self.lower_kind() {
            Endpoint::Open => v > self.lower(),
            Endpoint::Closed => v >= self.lower(),
        };
        let below = match self.upper_kind() {
            Endpoint::Open => v < self.upper(),
            Endpoint::Closed => v <= self.upper(),
        };
        above && below
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UncertainInterval {
    lower: Rational,
    lower_kind: Endpoint,
    upper: Rational,
    upper_kind: Endpoint,
}

impl UncertainInterval {
    pub fn new(
        lower: Rational,
        lower_kind: Endpoint,
        upper: Rational,
        upper_kind: Endpoint,
    ) -> Result<Self, IntervalError> {
        match lower.cmp(&upper) {
            Ordering::Greater => return Err(IntervalError::Reversed { lower, upper }),
            Ordering::Equal if lower_kind.is_open() || upper_kind.is_open() => {
                return Err(IntervalError::DegenerateOpen(lower))
            }
            _ => {}
        }
        Ok(UncertainInterval {
            lower,
            lower_kind,
            upper,
            upper_kind,
        })
    }

    pub fn open(lower: Rational, upper: Rational) -> Result<Self, IntervalError> {
        Self::new(lower, Endpoint::Open, upper, Endpoint::Open)
    }

    pub fn closed(lower: Rational, upper: Rational) -> Result<Self, IntervalError> {
        Self::new(lower, Endpoint::Closed, upper, Endpoint::Closed)
    }

    pub fn trivial(value: Rational) -> Self {
        UncertainInterval {
            lower: value.clone(),
            lower_kind: Endpoint::Closed,
            upper: value,
            upper_kind: Endpoint::Closed,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.is_point()
    }

    /// Open on both sides, or trivial.
    pub fn is_open_or_trivial(&self) -> bool {
        self.is_trivial() || (self.lower_kind.is_open() && self.upper_kind.is_open())
    }

    /// The interval reflected through zero: `(a, b]` becomes `[-b, -a)`.
    pub fn mirrored(&self) -> Self {
        UncertainInterval {
            lower: -&self.upper,
            lower_kind: self.upper_kind,
            upper: -&self.lower,
            upper_kind: self.lower_kind,
        }
    }
}

impl Bounds for UncertainInterval {
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

impl fmt::Display for UncertainInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "{{{}}}", self.lower);
        }
        let open = if self.lower_kind.is_open() { '(' } else { '[' };
        let close = if self.upper_kind.is_open() { ')' } else { ']' };
        write!(f, "{open}{},{}{close}", self.lower, self.upper)
    }
}

impl fmt::Debug for UncertainInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for UncertainInterval {
    type Err = IntervalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let number = |part: &str| {
            part.trim().parse::<Rational>().map_err(|source| IntervalError::Number {
                text: text.to_string(),
                source,
            })
        };
        if let Some(inner) = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            return Ok(UncertainInterval::trivial(number(inner)?));
        }
        let malformed = || IntervalError::Malformed(text.to_string());
        let mut chars = text.chars();
        let lower_kind = match chars.next() {
            Some('(') => Endpoint::Open,
            Some('[') => Endpoint::Closed,
            _ => return Err(malformed()),
        };
        let upper_kind = match chars.next_back() {
            Some(')') => Endpoint::Open,
            Some(']') => Endpoint::Closed,
            _ => return Err(malformed()),
        };
        let (a, b) = chars.as_str().split_once(',').ok_or_else(malformed)?;
        UncertainInterval::new(number(a)?, lower_kind, number(b)?, upper_kind)
    }
}

/// What the algorithm currently knows about one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementState {
    Interval(UncertainInterval),
    Known(Rational),
}

impl ElementState {
    /// Exact value, if the element was queried or is trivial.
    pub fn value(&self) -> Option<&Rational> {
        match self {
            ElementState::Known(v) => Some(v),
            ElementState::Interval(i) if i.is_trivial() => Some(i.lower()),
            ElementState::Interval(_) => None,
        }
    }

    pub fn is_resolved(&self) -> bool {
        self.value().is_some()
    }

    /// Non-trivial and not yet queried.
    pub fn needs_query(&self) -> bool {
        !self.is_resolved()
    }

    pub fn is_known(&self) -> bool {
        matches!(self, ElementState::Known(_))
    }
}

impl Bounds for ElementState {
    fn lower(&self) -> &Rational {
        match self {
            ElementState::Interval(i) => i.lower(),
            ElementState::Known(v) => v,
        }
    }
    fn lower_kind(&self) -> Endpoint {
        match self {
            ElementState::Interval(i) => i.lower_kind(),
            ElementState::Known(_) => Endpoint::Closed,
        }
    }
    fn upper(&self) -> &Rational {
        match self {
            ElementState::Interval(i) => i.upper(),
            ElementState::Known(v) => v,
        }
    }
    fn upper_kind(&self) -> Endpoint {
        match self {
            ElementState::Interval(i) => i.upper_kind(),
            ElementState::Known(_) => Endpoint::Closed,
        }
    }
}

pub fn contains(interval: &UncertainInterval, v: &Rational) -> bool {
    interval.contains(v)
}

/// True iff the relative order of the two values cannot be deduced from the
/// bounds alone. Two exact values are never dependent.
pub fn dependent<A: Bounds + ?Sized, B: Bounds + ?Sized>(a: &A, b: &B) -> bool {
    a.upper() > b.lower() && b.upper() > a.lower()
}

/// Every admissible value of `a` is strictly smaller than every admissible
/// value of `b`.
pub fn strictly_below<A: Bounds + ?Sized, B: Bounds + ?Sized>(a: &A, b: &B) -> bool {
    match a.upper().cmp(b.lower()) {
        Ordering::Less => true,
        Ordering::Equal => a.upper_kind().is_open() || b.lower_kind().is_open(),
        Ordering::Greater => false,
    }
}

/// The left-endpoint preorder: by value, closed before open at ties.
pub fn cmp_lower<A: Bounds + ?Sized, B: Bounds + ?Sized>(a: &A, b: &B) -> Ordering {
    a.lower()
        .cmp(b.lower())
        .then_with(|| match (a.lower_kind(), b.lower_kind()) {
            (Endpoint::Closed, Endpoint::Open) => Ordering::Less,
            (Endpoint::Open, Endpoint::Closed) => Ordering::Greater,
            _ => Ordering::Equal,
        })
}

/// The right-endpoint preorder: by value, open before closed at ties.
pub fn cmp_upper<A: Bounds + ?Sized, B: Bounds + ?Sized>(a: &A, b: &B) -> Ordering {
    a.upper()
        .cmp(b.upper())
        .then_with(|| match (a.upper_kind(), b.upper_kind()) {
            (Endpoint::Open, Endpoint::Closed) => Ordering::Less,
            (Endpoint::Closed, Endpoint::Open) => Ordering::Greater,
            _ => Ordering::Equal,
        })
}

/// The two sets share at least one point.
pub fn intersects<A: Bounds + ?Sized, B: Bounds + ?Sized>(a: &A, b: &B) -> bool {
    let (lo, lo_kind) = match cmp_lower(a, b) {
        Ordering::Less => (b.lower(), b.lower_kind()),
        _ => (a.lower(), a.lower_kind()),
    };
    let (hi, hi_kind) = match cmp_upper(a, b) {
        Ordering::Greater => (b.upper(), b.upper_kind()),
        _ => (a.upper(), a.upper_kind()),
    };
    match lo.cmp(hi) {
        Ordering::Less => true,
        Ordering::Equal => lo_kind.is_closed() && hi_kind.is_closed(),
        Ordering::Greater => false,
    }
}

pub fn precedes_lower<A: Bounds + ?Sized, B: Bounds + ?Sized>(a: &A, b: &B) -> bool {
    cmp_lower(a, b) == Ordering::Less
}

pub fn precedes_upper<A: Bounds + ?Sized, B: Bounds + ?Sized>(a: &A, b: &B) -> bool {
    cmp_upper(a, b) == Ordering::Less
}
