//! Drives an algorithm against an oracle and scores the run against the
//! offline optimum.

use std::collections::HashSet;
use std::fmt;

use crate::algorithms::{AlgorithmError, BatchAlgorithm, CategoryCounts, RoundAlgorithm, RoundCharges};
use crate::instance::{ElementId, Instance, Realization};
use crate::knowledge::KnowledgeState;
use crate::opt::{canonical_opt, OptError, OptMethod, OptReport, DEFAULT_CAP};
use crate::oracle::ValueOracle;
use crate::rational::Rational;
use crate::solved::{extract_certificate, instance_solved, set_solved, verify_certificate, CertificateError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error("round {round}: {reason}")]
    BadRound { round: usize, reason: String },
    #[error("round {round}: nothing to query but the instance is unsolved")]
    Stalled { round: usize },
    #[error("round {round}: oracle {reason}")]
    Oracle { round: usize, reason: String },
    #[error("final realization disagrees with the answers: {0}")]
    Inconsistent(String),
    #[error("more than {0} batches")]
    BatchBudget(usize),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error("certificate rejected: {0}")]
    Certificate(#[from] CertificateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Brute-force cap handed to the optimum.
    pub opt_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { opt_cap: DEFAULT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub queries: Vec<ElementId>,
    pub answers: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrace {
    pub rounds: Vec<RoundRecord>,
    pub final_realization: Realization,
    /// Per set, the round after which it was solved; 0 if solved upfront.
    pub solved_at: Vec<usize>,
}

impl RoundTrace {
    /// `round <r>: <ids> -> <values>`, one line per round.
    pub fn lines(&self) -> Vec<String> {
        self.rounds
            .iter()
            .enumerate()
            .map(|(r, rec)| {
                let ids: Vec<String> = rec.queries.iter().map(|id| id.to_string()).collect();
                let vals: Vec<String> = rec.answers.iter().map(|v| v.to_string()).collect();
                format!("round {}: {} -> {}", r + 1, ids.join(" "), vals.join(" "))
            })
            .collect()
    }

    pub fn queried(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.rounds.iter().flat_map(|r| r.queries.iter().copied())
    }

    /// `(useful, wasted)` per round.
    pub fn usefulness(&self, opt: &OptReport) -> Vec<(usize, usize)> {
        self.rounds
            .iter()
            .map(|r| {
                let useful = r.queries.iter().filter(|&&id| opt.contains(id)).count();
                (useful, r.queries.len() - useful)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Rounds,
    Batches,
}

/// Checks of the counting identity for algorithms that fill every round but
/// the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prop1 {
    pub filling: bool,
    pub superset: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub alg: String,
    pub kind: RunKind,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// Rounds, or batches for batch runs.
    pub rounds: usize,
    pub queries: usize,
    pub opt1: usize,
    pub opt_k: usize,
    pub wasted: usize,
    pub useful: usize,
    /// Rounds over `opt_k`; queries over `opt1` for batch runs.
    pub ratio: Rational,
    pub method: OptMethod,
    pub prop1: Prop1,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alg: {}", self.alg)?;
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "m: {}", self.m)?;
        writeln!(f, "k: {}", self.k)?;
        match self.kind {
            RunKind::Rounds => writeln!(f, "rounds: {}", self.rounds)?,
            RunKind::Batches => writeln!(f, "batches: {}", self.rounds)?,
        }
        writeln!(f, "queries: {}", self.queries)?;
        writeln!(f, "opt1: {} ({})", self.opt1, self.method)?;
        writeln!(f, "opt_k: {}", self.opt_k)?;
        writeln!(f, "useful: {}", self.useful)?;
        writeln!(f, "wasted: {}", self.wasted)?;
        write!(f, "ratio: {}", self.ratio)
    }
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: RoundTrace,
    pub report: RunReport,
    pub opt: OptReport,
    pub charges: Vec<RoundCharges>,
    pub categories: Vec<CategoryCounts>,
    pub notes: Vec<String>,
}

fn ratio(num: usize, den: usize) -> Rational {
    match (num, den) {
        (0, 0) => Rational::one(),
        (x, 0) => Rational::from(x),
        (x, y) => Rational::new(x as i64, y as i64),
    }
}

/// The shared loop: ask for a step, validate it, let the oracle answer it
/// whole, repeat until the step is empty.
fn drive(
    instance: &Instance,
    oracle: &mut dyn ValueOracle,
    limit: Option<usize>,
    max_steps: Option<usize>,
    mut next: impl FnMut(&KnowledgeState) -> Result<Vec<ElementId>, AlgorithmError>,
) -> Result<(KnowledgeState, Vec<RoundRecord>, Vec<usize>), HarnessError> {
    let mut knowledge = KnowledgeState::new(instance);
    let mut rounds = Vec::new();
    let mut solved_at: Vec<Option<usize>> = (0..instance.m())
        .map(|s| set_solved(instance, s, &knowledge).then_some(0))
        .collect();
    loop {
        let round = rounds.len() + 1;
        let queries = next(&knowledge)?;
        if queries.is_empty() {
            if instance_solved(instance, &knowledge) {
                break;
            }
            return Err(HarnessError::Stalled { round });
        }
        let bad = |reason: String| HarnessError::BadRound { round, reason };
        if let Some(k) = limit {
            if queries.len() > k {
                return Err(bad(format!("{} queries exceed k = {k}", queries.len())));
            }
        }
        if let Some(max) = max_steps {
            if round > max {
                return Err(HarnessError::BatchBudget(max));
            }
        }
        let mut seen = HashSet::new();
        for &id in &queries {
            if id.idx() >= instance.n() {
                return Err(bad(format!("unknown element {id}")));
            }
            if !seen.insert(id) {
                return Err(bad(format!("element {id} queried twice")));
            }
            if !knowledge.needs_query(id) {
                return Err(bad(format!("element {id} needs no query")));
            }
        }
        let answers = oracle.answer_round(&knowledge, &queries);
        if answers.len() != queries.len() {
            return Err(HarnessError::Oracle {
                round,
                reason: format!("gave {} answers for {} queries", answers.len(), queries.len()),
            });
        }
        for (&id, v) in queries.iter().zip(&answers) {
            knowledge.reveal(id, v.clone()).map_err(|e| HarnessError::Oracle {
                round,
                reason: e.to_string(),
            })?;
        }
        rounds.push(RoundRecord { queries, answers });
        for (s, at) in solved_at.iter_mut().enumerate() {
            if at.is_none() && set_solved(instance, s, &knowledge) {
                *at = Some(round);
            }
        }
    }
    let solved_at = solved_at.into_iter().map(|s| s.expect("solved at the end")).collect();
    Ok((knowledge, rounds, solved_at))
}

/// Finalizes the oracle, checks it against the answers and scores the run.
#[allow(clippy::too_many_arguments)]
fn score(
    alg: String,
    kind: RunKind,
    instance: &Instance,
    oracle: &mut dyn ValueOracle,
    knowledge: KnowledgeState,
    rounds: Vec<RoundRecord>,
    solved_at: Vec<usize>,
    opts: RunOptions,
) -> Result<(RoundTrace, RunReport, OptReport), HarnessError> {
    let realization = oracle.finalize(&knowledge);
    for rec in &rounds {
        for (&id, v) in rec.queries.iter().zip(&rec.answers) {
            if realization.value(id) != v {
                return Err(HarnessError::Inconsistent(format!(
                    "element {id} answered {v} but finalized to {}",
                    realization.value(id)
                )));
            }
        }
    }
    let cert = extract_certificate(instance, &knowledge).expect("run ends solved");
    verify_certificate(instance, &knowledge, &cert, &realization)?;
    let opt = canonical_opt(instance, &realization, opts.opt_cap)?;
    let trace = RoundTrace {
        rounds,
        final_realization: realization,
        solved_at,
    };
    let queries = trace.queried().count();
    let useful = trace.queried().filter(|&id| opt.contains(id)).count();
    let wasted = queries - useful;
    let k = instance.k();
    let n_rounds = trace.rounds.len();
    let filling = kind == RunKind::Rounds && trace.rounds.iter().rev().skip(1).all(|r| r.queries.len() == k);
    let superset = useful == opt.opt1;
    let holds = !filling
        || (n_rounds <= (opt.opt1 + wasted).div_ceil(k) && (!superset || n_rounds <= opt.opt_k + wasted.div_ceil(k)));
    let report = RunReport {
        alg,
        kind,
        n: instance.n(),
        m: instance.m(),
        k,
        rounds: n_rounds,
        queries,
        opt1: opt.opt1,
        opt_k: opt.opt_k,
        wasted,
        useful,
        ratio: match kind {
            RunKind::Rounds => ratio(n_rounds, opt.opt_k),
            RunKind::Batches => ratio(queries, opt.opt1),
        },
        method: opt.method,
        prop1: Prop1 {
            filling,
            superset,
            holds,
        },
    };
    Ok((trace, report, opt))
}

pub fn run(
    alg: &mut dyn RoundAlgorithm,
    instance: &Instance,
    oracle: &mut dyn ValueOracle,
    opts: RunOptions,
) -> Result<RunOutcome, HarnessError> {
    let (knowledge, rounds, solved_at) = drive(instance, oracle, Some(instance.k()), None, |k| {
        alg.next_round(instance, k)
    })?;
    let (trace, report, opt) = score(
        alg.name(),
        RunKind::Rounds,
        instance,
        oracle,
        knowledge,
        rounds,
        solved_at,
        opts,
    )?;
    Ok(RunOutcome {
        trace,
        report,
        opt,
        charges: alg.charges().to_vec(),
        categories: alg.categories().to_vec(),
        notes: oracle.notes(),
    })
}

/// Batch model: no per-batch limit, at most `max_batches` batches.
pub fn run_batches(
    alg: &mut dyn BatchAlgorithm,
    instance: &Instance,
    oracle: &mut dyn ValueOracle,
    opts: RunOptions,
) -> Result<RunOutcome, HarnessError> {
    let max = alg.max_batches();
    let (knowledge, rounds, solved_at) = drive(instance, oracle, None, Some(max), |k| {
        if instance_solved(instance, k) {
            Ok(Vec::new())
        } else {
            alg.next_batch(instance, k)
        }
    })?;
    let (trace, report, opt) = score(
        alg.name(),
        RunKind::Batches,
        instance,
        oracle,
        knowledge,
        rounds,
        solved_at,
        opts,
    )?;
    Ok(RunOutcome {
        trace,
        report,
        opt,
        charges: Vec::new(),
        categories: Vec::new(),
        notes: oracle.notes(),
    })
}

/// Charges of wasted queries to sets not solved in that very round.
pub fn charging_violations(outcome: &RunOutcome) -> Vec<String> {
    let mut out = Vec::new();
    for (r, record) in outcome.charges.iter().enumerate() {
        for charge in &record.charges {
            if outcome.opt.contains(charge.element) {
                continue;
            }
            for (s, _) in &charge.payers {
                if outcome.trace.solved_at[*s] != r + 1 {
                    out.push(format!(
                        "round {}: wasted {} charged to set {} solved at {}",
                        r + 1,
                        charge.element,
                        s,
                        outcome.trace.solved_at[*s]
                    ));
                }
            }
        }
    }
    out
}
