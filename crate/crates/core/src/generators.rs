//! Fixed-realization instances: the two hand-built minimum instances and a
//! seeded random generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{ElementId, Instance, InstanceError, NamedSet, ProblemKind, Realization};
use crate::interval::{Endpoint, UncertainInterval};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("{0}")]
    Params(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn open(lo: Rational, hi: Rational) -> UncertainInterval {
    UncertainInterval::open(lo, hi).expect("generator builds valid intervals")
}

fn ids(range: std::ops::Range<usize>) -> Vec<ElementId> {
    range.map(ElementId::from_idx).collect()
}

/// Three disjoint sets of 6, 6 and 5 open intervals `(j, 100)`, `k = 5`.
/// The minima sit at positions 3, 3 and 5, so the optimum queries prefixes
/// of those lengths.
pub fn fig2() -> (Instance, Realization) {
    let mut intervals = Vec::new();
    let mut values = Vec::new();
    let mut sets = Vec::new();
    for (s, (len, min_at)) in [(6, 3), (6, 3), (5, 5)].into_iter().enumerate() {
        let start = intervals.len();
        for j in 1..=len {
            intervals.push(open(Rational::from(j), Rational::from(100)));
            values.push(if j == min_at {
                Rational::from(j) + Rational::new(1, 2)
            } else {
                Rational::from(50 + j)
            });
        }
        sets.push(NamedSet {
            name: format!("S{}", s + 1),
            members: ids(start..intervals.len()),
        });
    }
    let inst = Instance::new(intervals, sets, ProblemKind::Minimum, 5).expect("valid");
    let r = Realization::new(&inst, values).expect("valid");
    (inst, r)
}

/// `c` groups of `k - 1` sets each. Group `j` shares the elements
/// `s_1..s_j` and gives every set one private element on top. Querying the
/// `c` shared elements solves everything; `s_j` is the minimum of group `j`.
pub fn fig3(k: usize, c: usize) -> Result<(Instance, Realization), GenError> {
    if k < 2 || c < 1 {
        return Err(GenError::Params(format!("need k >= 2 and c >= 1, got k={k}, c={c}")));
    }
    let m = c * (k - 1);
    let delta = Rational::new(1, 2 * m as i64);
    let mut intervals = Vec::new();
    let mut values = Vec::new();
    let mut shared = Vec::new();
    let mut sets = Vec::new();
    for j in 1..=c {
        let jd = &delta * &Rational::from(j);
        let low = Rational::one() + &delta * &Rational::from(c - j);
        shared.push(ElementId::from_idx(intervals.len()));
        intervals.push(open(jd.clone(), Rational::from(2) + &jd));
        values.push(low.clone());
        for t in 1..k {
            let private = ElementId::from_idx(intervals.len());
            intervals.push(open(low.clone(), &low + &Rational::from(2)));
            values.push(&low + &Rational::one());
            let mut members = shared.clone();
            members.push(private);
            sets.push(NamedSet {
                name: format!("G{j}.{t}"),
                members,
            });
        }
    }
    let inst = Instance::new(intervals, sets, ProblemKind::Minimum, k)?;
    let r = Realization::new(&inst, values)?;
    Ok((inst, r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetMode {
    /// One set with every element.
    Single,
    /// A partition into `m` non-empty sets.
    Disjoint,
    /// `m` random subsets.
    Overlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ends {
    Open,
    Closed,
    /// Each endpoint open or closed at random.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub mode: SetMode,
    pub problem: ProblemKind,
    /// Defaults to open for minimum and selection-value, mixed otherwise.
    pub ends: Option<Ends>,
}

impl RandomParams {
    pub fn new(n: usize, m: usize, k: usize, mode: SetMode, problem: ProblemKind) -> Self {
        RandomParams {
            n,
            m,
            k,
            mode,
            problem,
            ends: None,
        }
    }
}

fn random_interval(rng: &mut ChaCha8Rng, grid: i64, ends: Ends) -> (UncertainInterval, Rational) {
    if rng.random_ratio(1, 8) {
        let v = Rational::new(rng.random_range(0..=2 * grid), 2);
        return (UncertainInterval::trivial(v.clone()), v);
    }
    let a = rng.random_range(0..grid);
    let b = a + rng.random_range(1..=(grid / 2).max(1));
    let mut kind = || match ends {
        Ends::Open => Endpoint::Open,
        Ends::Closed => Endpoint::Closed,
        Ends::Mixed if rng.random_bool(0.5) => Endpoint::Open,
        Ends::Mixed => Endpoint::Closed,
    };
    let (lk, uk) = (kind(), kind());
    let lo_t = if lk.is_closed() { 0 } else { 1 };
    let hi_t = if uk.is_closed() { 4 } else { 3 };
    let t = rng.random_range(lo_t..=hi_t);
    let value = Rational::from(a) + Rational::new((b - a) * t, 4);
    let iv = UncertainInterval::new(Rational::from(a), lk, Rational::from(b), uk).expect("a < b");
    (iv, value)
}

/// Deterministic in `seed`. Endpoints sit on a small integer grid and values
/// on quarter points, so ties and shared endpoints are common.
pub fn random(seed: u64, p: &RandomParams) -> Result<(Instance, Realization), GenError> {
    if p.n == 0 || p.m == 0 || p.k == 0 {
        return Err(GenError::Params("n, m and k must be positive".into()));
    }
    let mode = if p.problem.is_selection() {
        SetMode::Single
    } else {
        p.mode
    };
    if mode == SetMode::Disjoint && p.m > p.n {
        return Err(GenError::Params(format!(
            "{} disjoint sets need at least as many elements, got {}",
            p.m, p.n
        )));
    }
    let ends = p.ends.unwrap_or(match p.problem {
        ProblemKind::Minimum | ProblemKind::SelectionValue { .. } => Ends::Open,
        _ => Ends::Mixed,
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = (p.n as i64).max(4);
    let (intervals, values): (Vec<_>, Vec<_>) = (0..p.n).map(|_| random_interval(&mut rng, grid, ends)).unzip();
    let sets = match mode {
        SetMode::Single => vec![NamedSet {
            name: "S".into(),
            members: ids(0..p.n),
        }],
        SetMode::Disjoint => {
            let mut order = ids(0..p.n);
            order.shuffle(&mut rng);
            let mut members = vec![Vec::new(); p.m];
            for (pos, id) in order.into_iter().enumerate() {
                let s = if pos < p.m { pos } else { rng.random_range(0..p.m) };
                members[s].push(id);
            }
            named(members)
        }
        SetMode::Overlap => {
            let members = (0..p.m)
                .map(|_| {
                    let size = rng.random_range(1..=p.n.min(p.n * 2 / 3 + 1));
                    let mut pick = ids(0..p.n);
                    pick.shuffle(&mut rng);
                    pick.truncate(size);
                    pick
                })
                .collect();
            named(members)
        }
    };
    let inst = Instance::new(intervals, sets, p.problem, p.k)?;
    let r = Realization::new(&inst, values)?;
    Ok((inst, r))
}

fn named(members: Vec<Vec<ElementId>>) -> Vec<NamedSet> {
    members
        .into_iter()
        .enumerate()
        .map(|(s, mut members)| {
            members.sort();
            NamedSet {
                name: format!("S{}", s + 1),
                members,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_instance, serialize_instance};
    use crate::opt::{canonical_opt, opt1_bruteforce, opt1_minimum, DEFAULT_CAP};
    use proptest::prelude::*;

    #[test]
    fn fig2_optimum() {
        let (inst, r) = fig2();
        assert_eq!((inst.n(), inst.m(), inst.k()), (17, 3, 5));
        let opt = canonical_opt(&inst, &r, DEFAULT_CAP).unwrap();
        assert_eq!((opt.opt1, opt.opt_k), (11, 3));
    }

    #[test]
    fn fig3_default_shape() {
        let (inst, r) = fig3(3, 3).unwrap();
        assert_eq!((inst.n(), inst.m()), (9, 6));
        let opt = canonical_opt(&inst, &r, DEFAULT_CAP).unwrap();
        assert_eq!(opt.opt_set, vec![ElementId(1), ElementId(4), ElementId(7)]);
        let sizes: Vec<usize> = inst.memberships().iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![6, 1, 1, 4, 1, 1, 2, 1, 1]);
        assert!(fig3(1, 3).is_err());
    }

    #[test]
    fn fig3_text() {
        let (inst, r) = fig3(2, 2).unwrap();
        let text = serialize_instance(&inst, Some(&r));
        assert_eq!(
            text,
            "k 2\nproblem minimum\n\
             interval 1 (1/4,9/4)\ninterval 2 (5/4,13/4)\n\
             interval 3 (1/2,5/2)\ninterval 4 (1,3)\n\
             set G1.1 1 2\nset G2.1 1 3 4\n\
             value 1 5/4\nvalue 2 9/4\nvalue 3 1\nvalue 4 2\n"
        );
    }

    #[test]
    fn random_is_deterministic_and_round_trips() {
        let p = RandomParams::new(10, 3, 2, SetMode::Disjoint, ProblemKind::Minimum);
        let (a, ra) = random(1, &p).unwrap();
        let (b, rb) = random(1, &p).unwrap();
        assert_eq!((&a, &ra), (&b, &rb));
        let text = serialize_instance(&a, Some(&ra));
        let (c, rc) = parse_instance(&text).unwrap();
        assert_eq!(serialize_instance(&c, rc.as_ref()), text);
    }

    #[test]
    fn random_rejects_bad_params() {
        let p = RandomParams::new(2, 3, 2, SetMode::Disjoint, ProblemKind::Minimum);
        assert!(random(0, &p).is_err());
    }

    proptest! {
        #[test]
        fn random_minimum_matches_bruteforce(seed in 0u64..5000, n in 1usize..9, m in 1usize..4) {
            let mode = if seed % 2 == 0 { SetMode::Disjoint } else { SetMode::Overlap };
            let p = RandomParams::new(n.max(m), m, 2, mode, ProblemKind::Minimum);
            let (inst, r) = random(seed, &p).unwrap();
            let closed = opt1_minimum(&inst, &r).unwrap();
            let brute = opt1_bruteforce(&inst, &r, DEFAULT_CAP).unwrap();
            prop_assert_eq!(closed.opt1, brute.opt1);
        }

        #[test]
        fn random_sets_are_valid(seed in 0u64..5000, n in 1usize..12, m in 1usize..5) {
            let p = RandomParams::new(n, m, 3, SetMode::Overlap, ProblemKind::Sorting);
            let (inst, _) = random(seed, &p).unwrap();
            prop_assert_eq!(inst.m(), m);
        }
    }
}
