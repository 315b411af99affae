//! Round-based query algorithms for explorable uncertainty: sorting, minimum
//! and selection over uncertainty intervals, with `k` queries per round.
//!
//! ```
//! use qround_core::{generators, harness, algorithms, oracle::FixedOracle};
//!
//! let (inst, real) = generators::fig3(3, 3).unwrap();
//! let mut alg = algorithms::round_algorithm("budget").unwrap();
//! let out = harness::run(alg.as_mut(), &inst, &mut FixedOracle::new(real), Default::default()).unwrap();
//! assert_eq!((out.report.rounds, out.report.opt_k), (1, 1));
//! ```

#![allow(clippy::result_large_err)]

pub mod algorithms;
pub mod format;
pub mod generators;
pub mod harness;
pub mod instance;
pub mod interval;
pub mod knowledge;
pub mod math;
pub mod opt;
pub mod oracle;
pub mod rational;
pub mod reductions;
pub mod solved;
pub mod source;
pub mod sweep;

pub use algorithms::{AlgorithmError, BatchAlgorithm, RoundAlgorithm};
pub use format::{parse_instance, serialize_instance, ParseError};
pub use harness::{run, run_batches, RunOptions, RunOutcome, RunReport};
pub use instance::{ElementId, Instance, NamedSet, ProblemKind, Realization};
pub use interval::{Bounds, ElementState, Endpoint, UncertainInterval};
pub use knowledge::KnowledgeState;
pub use opt::{canonical_opt, OptReport};
pub use oracle::{FixedOracle, ValueOracle};
pub use rational::Rational;
pub use source::Source;
