//! Named instance sources: `name[:key=value,...]`.
//!
//! ```text
//! fig2
//! fig3:k=3,c=3
//! random:n=10,m=3,k=2,mode=disjoint,problem=minimum
//! random:n=9,k=3,problem=selection-full,i=4,ends=mixed
//! fig1-pairs:c=4,k=3
//! wlb:M=2
//! additive:m=4
//! sel-full-lb:i=3
//! sel-value-lb:i=3,k=3
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::generators::{self, Ends, GenError, RandomParams, SetMode};
use crate::instance::{Instance, ProblemKind, Realization};
use crate::oracle::{
    minimum_additive_adversary, minimum_wlb_adversary, selection_full_lb_adversary, selection_value_lb_adversary,
    sorting_pair_adversary, FixedOracle, ValueOracle,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SourceError {
    #[error("bad source `{text}`: {reason}")]
    Syntax { text: String, reason: String },
    #[error(transparent)]
    Gen(#[from] GenError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Fig2,
    Fig3 { k: usize, c: usize },
    Random { params: RandomParams, seed: Option<u64> },
    Pairs { c: usize, k: usize },
    Wlb { big_m: usize },
    Additive { m: usize },
    SelFullLb { i: usize },
    SelValueLb { i: usize, k: usize },
}

/// An instance with the oracle that answers for it.
pub struct Built {
    pub instance: Instance,
    pub oracle: Box<dyn ValueOracle>,
    /// Present for fixed-realization sources.
    pub realization: Option<Realization>,
}

impl Source {
    /// True for adversaries that pick values as the run goes.
    pub fn is_adaptive(&self) -> bool {
        !matches!(self, Source::Fig2 | Source::Fig3 { .. } | Source::Random { .. })
    }

    /// `seed` only matters for random sources without their own seed.
    pub fn build(&self, seed: u64) -> Result<Built, SourceError> {
        let fixed = |(instance, r): (Instance, Realization)| Built {
            instance,
            oracle: Box::new(FixedOracle::new(r.clone())),
            realization: Some(r),
        };
        fn adaptive<O: ValueOracle + 'static>((instance, o): (Instance, O)) -> Built {
            Built {
                instance,
                oracle: Box::new(o),
                realization: None,
            }
        }
        Ok(match *self {
            Source::Fig2 => fixed(generators::fig2()),
            Source::Fig3 { k, c } => fixed(generators::fig3(k, c)?),
            Source::Random { ref params, seed: own } => fixed(generators::random(own.unwrap_or(seed), params)?),
            Source::Pairs { c, k } => adaptive(sorting_pair_adversary(c, k)),
            Source::Wlb { big_m } => adaptive(minimum_wlb_adversary(big_m)),
            Source::Additive { m } => adaptive(minimum_additive_adversary(m)),
            Source::SelFullLb { i } => adaptive(selection_full_lb_adversary(i)),
            Source::SelValueLb { i, k } => adaptive(selection_value_lb_adversary(i, k)),
        })
    }
}

fn parse_problem(word: &str, rank: Option<usize>, n: usize) -> Option<ProblemKind> {
    let rank = rank.unwrap_or(n.div_ceil(2));
    Some(match word {
        "sorting" => ProblemKind::Sorting,
        "minimum" => ProblemKind::Minimum,
        "selection-value" => ProblemKind::SelectionValue { rank },
        "selection-full" => ProblemKind::SelectionFull { rank },
        _ => return None,
    })
}

impl FromStr for Source {
    type Err = SourceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| SourceError::Syntax {
            text: s.to_string(),
            reason,
        };
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut opts = BTreeMap::new();
        for pair in rest.split(',').filter(|p| !p.is_empty()) {
            let (key, val) = pair
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{pair}`")))?;
            if opts.insert(key, val).is_some() {
                return Err(err(format!("`{key}` given twice")));
            }
        }
        let allowed: &[&str] = match name {
            "fig2" => &[],
            "fig3" => &["k", "c"],
            "random" => &["n", "m", "k", "mode", "problem", "i", "ends", "seed"],
            "fig1-pairs" => &["c", "k"],
            "wlb" => &["M"],
            "additive" => &["m"],
            "sel-full-lb" => &["i"],
            "sel-value-lb" => &["i", "k"],
            _ => return Err(err(format!("unknown source `{name}`"))),
        };
        if let Some(key) = opts.keys().find(|k| !allowed.contains(k)) {
            return Err(err(format!("unknown option `{key}`")));
        }
        let num = |key: &str, default: Option<u64>, min: u64| -> Result<u64, SourceError> {
            let v = match opts.get(key) {
                Some(v) => v
                    .parse::<u64>()
                    .map_err(|_| err(format!("`{key}` must be a number, got `{v}`")))?,
                None => default.ok_or_else(|| err(format!("`{key}` is required")))?,
            };
            if v < min {
                return Err(err(format!("`{key}` must be at least {min}")));
            }
            Ok(v)
        };
        Ok(match name {
            "fig2" => Source::Fig2,
            "fig3" => Source::Fig3 {
                k: num("k", Some(3), 2)? as usize,
                c: num("c", Some(3), 1)? as usize,
            },
            "fig1-pairs" => Source::Pairs {
                c: num("c", None, 1)? as usize,
                k: num("k", Some(1), 1)? as usize,
            },
            "wlb" => {
                let big_m = num("M", None, 2)? as usize;
                if big_m > 3 {
                    return Err(err("`M` must be 2 or 3".into()));
                }
                Source::Wlb { big_m }
            }
            "additive" => Source::Additive {
                m: num("m", None, 2)? as usize,
            },
            "sel-full-lb" => Source::SelFullLb {
                i: num("i", None, 2)? as usize,
            },
            "sel-value-lb" => {
                let i = num("i", None, 1)? as usize;
                Source::SelValueLb {
                    i,
                    k: num("k", Some(i as u64), 1)? as usize,
                }
            }
            _ => {
                let n = num("n", None, 1)? as usize;
                let m = num("m", Some(1), 1)? as usize;
                let mode = match opts.get("mode").copied() {
                    None if m == 1 => SetMode::Single,
                    None | Some("disjoint") => SetMode::Disjoint,
                    Some("single") => SetMode::Single,
                    Some("overlap") => SetMode::Overlap,
                    Some(other) => return Err(err(format!("unknown mode `{other}`"))),
                };
                let rank = opts.contains_key("i").then(|| num("i", None, 1)).transpose()?;
                let word = opts.get("problem").copied().unwrap_or("minimum");
                let problem = parse_problem(word, rank.map(|r| r as usize), n)
                    .ok_or_else(|| err(format!("unknown problem `{word}`")))?;
                if rank.is_some() && !problem.is_selection() {
                    return Err(err("only selection problems take `i`".into()));
                }
                let ends = match opts.get("ends").copied() {
                    None => None,
                    Some("open") => Some(Ends::Open),
                    Some("closed") => Some(Ends::Closed),
                    Some("mixed") => Some(Ends::Mixed),
                    Some(other) => return Err(err(format!("unknown ends `{other}`"))),
                };
                let mut params = RandomParams::new(n, m, num("k", Some(2), 1)? as usize, mode, problem);
                params.ends = ends;
                Source::Random {
                    params,
                    seed: opts.contains_key("seed").then(|| num("seed", None, 0)).transpose()?,
                }
            }
        })
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Fig2 => write!(f, "fig2"),
            Source::Fig3 { k, c } => write!(f, "fig3:k={k},c={c}"),
            Source::Pairs { c, k } => write!(f, "fig1-pairs:c={c},k={k}"),
            Source::Wlb { big_m } => write!(f, "wlb:M={big_m}"),
            Source::Additive { m } => write!(f, "additive:m={m}"),
            Source::SelFullLb { i } => write!(f, "sel-full-lb:i={i}"),
            Source::SelValueLb { i, k } => write!(f, "sel-value-lb:i={i},k={k}"),
            Source::Random { params: p, seed } => {
                let mode = match p.mode {
                    SetMode::Single => "single",
                    SetMode::Disjoint => "disjoint",
                    SetMode::Overlap => "overlap",
                };
                write!(
                    f,
                    "random:n={},m={},k={},mode={mode},problem={}",
                    p.n,
                    p.m,
                    p.k,
                    p.problem.keyword()
                )?;
                if let Some(rank) = p.problem.rank() {
                    write!(f, ",i={rank}")?;
                }
                if let Some(ends) = p.ends {
                    let word = match ends {
                        Ends::Open => "open",
                        Ends::Closed => "closed",
                        Ends::Mixed => "mixed",
                    };
                    write!(f, ",ends={word}")?;
                }
                if let Some(seed) = seed {
                    write!(f, ",seed={seed}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_canonically() {
        for text in [
            "fig2",
            "fig3:k=5,c=2",
            "fig1-pairs:c=4,k=3",
            "wlb:M=3",
            "additive:m=4",
            "sel-full-lb:i=3",
            "sel-value-lb:i=3,k=2",
            "random:n=9,m=1,k=3,mode=single,problem=selection-full,i=4,ends=mixed",
            "random:n=10,m=3,k=2,mode=overlap,problem=sorting,seed=7",
        ] {
            let s: Source = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert_eq!("fig3".parse::<Source>().unwrap(), Source::Fig3 { k: 3, c: 3 });
    }

    #[test]
    fn rejects_nonsense() {
        for text in [
            "fig4",
            "wlb:M=4",
            "wlb",
            "fig3:k=1",
            "fig3:x=2",
            "random:n=3,problem=minimum,i=2",
            "fig3:k=2,k=3",
        ] {
            assert!(text.parse::<Source>().is_err(), "{text}");
        }
    }

    #[test]
    fn builds_instances() {
        let b = "fig3".parse::<Source>().unwrap().build(0).unwrap();
        assert_eq!(b.instance.n(), 9);
        assert!(b.realization.is_some());
        let b = "wlb:M=2".parse::<Source>().unwrap().build(0).unwrap();
        assert!(b.realization.is_none());
        let r1 = "random:n=6,m=2".parse::<Source>().unwrap().build(3).unwrap();
        let r2 = "random:n=6,m=2,seed=3".parse::<Source>().unwrap().build(99).unwrap();
        assert_eq!(r1.instance, r2.instance);
    }
}
