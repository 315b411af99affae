//! Batch experiments: a spec file lists (source, algorithms, seeds), every
//! combination becomes one CSV row.
//!
//! Spec lines use the instance-file syntax:
//!
//! ```text
//! # lower bounds
//! sweep fig1-pairs:c=4,k=3 alg=sorting-vc
//! sweep random:n=8,m=3,k=4 alg=bal,budget seeds=0..100
//! ```

use std::collections::BTreeMap;
use std::io;

use rayon::prelude::*;

use crate::algorithms::{batch_algorithm, round_algorithm, supports, AlgorithmError, RoundAlgorithm, BATCH_ALGORITHMS};
use crate::format::{lex, ParseError};
use crate::harness::{run, RunOptions};
use crate::rational::Rational;
use crate::reductions::BatchesToRounds;
use crate::source::Source;

pub const CSV_HEADER: [&str; 12] = [
    "source", "alg", "seed", "n", "m", "k", "rounds", "opt_k", "ratio", "queries", "opt1", "wasted",
];

/// Round algorithm by name; batch algorithms run `k` queries at a time.
pub fn round_runner(name: &str) -> Result<Box<dyn RoundAlgorithm>, AlgorithmError> {
    if BATCH_ALGORITHMS.contains(&name) {
        return Ok(Box::new(BatchesToRounds::new(batch_algorithm(name)?)));
    }
    round_algorithm(name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepJob {
    pub source: Source,
    pub alg: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub source: String,
    pub alg: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub rounds: usize,
    pub opt_k: usize,
    pub ratio: Rational,
    pub queries: usize,
    pub opt1: usize,
    pub wasted: usize,
    /// The filling-round counting identity held (vacuous for runs that do
    /// not fill their rounds). Not written to the CSV.
    pub prop1_ok: bool,
}

impl SweepRow {
    fn record(&self) -> [String; 12] {
        [
            self.source.clone(),
            self.alg.clone(),
            self.seed.to_string(),
            self.n.to_string(),
            self.m.to_string(),
            self.k.to_string(),
            self.rounds.to_string(),
            self.opt_k.to_string(),
            self.ratio.to_string(),
            self.queries.to_string(),
            self.opt1.to_string(),
            self.wasted.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{source_name} / {alg} / seed {seed}: {message}")]
pub struct SweepError {
    pub source_name: String,
    pub alg: String,
    pub seed: u64,
    pub message: String,
}

pub fn run_job(job: &SweepJob) -> Result<SweepRow, SweepError> {
    let fail = |message: String| SweepError {
        source_name: job.source.to_string(),
        alg: job.alg.clone(),
        seed: job.seed,
        message,
    };
    let mut built = job.source.build(job.seed).map_err(|e| fail(e.to_string()))?;
    if !supports(&job.alg, built.instance.problem()) {
        return Err(fail(format!(
            "does not handle {} instances",
            built.instance.problem().keyword()
        )));
    }
    let mut alg = round_runner(&job.alg).map_err(|e| fail(e.to_string()))?;
    let out = run(
        alg.as_mut(),
        &built.instance,
        built.oracle.as_mut(),
        RunOptions::default(),
    )
    .map_err(|e| fail(e.to_string()))?;
    let r = out.report;
    Ok(SweepRow {
        source: job.source.to_string(),
        alg: job.alg.clone(),
        seed: job.seed,
        n: r.n,
        m: r.m,
        k: r.k,
        rounds: r.rounds,
        opt_k: r.opt_k,
        ratio: r.ratio,
        queries: r.queries,
        opt1: r.opt1,
        wasted: r.wasted,
        prop1_ok: r.prop1.holds,
    })
}

/// Runs every job on `threads` workers; results come back in job order.
pub fn sweep(jobs: &[SweepJob], threads: usize) -> Vec<Result<SweepRow, SweepError>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| jobs.par_iter().map(run_job).collect())
}

/// Expands a spec file into jobs, in file order.
pub fn parse_spec(text: &str) -> Result<Vec<SweepJob>, ParseError> {
    let mut jobs = Vec::new();
    for line in lex(text) {
        if line.keyword() != "sweep" {
            return Err(line.error(0, format!("unknown directive `{}`", line.keyword())));
        }
        let source: Source = line
            .arg(1)?
            .parse()
            .map_err(|e: crate::source::SourceError| line.error(1, e.to_string()))?;
        let mut algs = None;
        let mut seeds = 0..1;
        for (i, (key, val)) in line.key_values(2)?.into_iter().enumerate() {
            match key {
                "alg" => {
                    let names: Vec<String> = val.split(',').map(str::to_string).collect();
                    if let Some(bad) = names.iter().find(|a| round_runner(a).is_err()) {
                        return Err(line.error(i + 2, format!("unknown algorithm `{bad}`")));
                    }
                    algs = Some(names);
                }
                "seeds" => {
                    let bad = || line.error(i + 2, format!("bad seed range `{val}`"));
                    seeds = match val.split_once("..") {
                        Some((a, b)) => a.parse().map_err(|_| bad())?..b.parse().map_err(|_| bad())?,
                        None => {
                            let s: u64 = val.parse().map_err(|_| bad())?;
                            s..s + 1
                        }
                    };
                }
                _ => return Err(line.error(i + 2, format!("unknown sweep option `{key}`"))),
            }
        }
        let algs = algs.ok_or_else(|| line.error(line.tokens.len(), "sweep needs alg=<names>"))?;
        for seed in seeds {
            for alg in &algs {
                jobs.push(SweepJob {
                    source: source.clone(),
                    alg: alg.clone(),
                    seed,
                });
            }
        }
    }
    Ok(jobs)
}

pub fn write_csv<W: io::Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}: bad {column} `{value}`")]
    Field {
        row: usize,
        column: &'static str,
        value: String,
    },
}

/// Reads rows written by [`write_csv`]; `prop1_ok` is not stored and comes
/// back `true`.
pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<SweepRow>, CsvError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(CsvError::Header(header));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |c: usize| -> &str { rec.get(c).unwrap_or("") };
        fn num<T: std::str::FromStr>(row: usize, c: usize, v: &str) -> Result<T, CsvError> {
            v.parse().map_err(|_| CsvError::Field {
                row,
                column: CSV_HEADER[c],
                value: v.to_string(),
            })
        }
        let row = i + 2;
        rows.push(SweepRow {
            source: field(0).to_string(),
            alg: field(1).to_string(),
            seed: num(row, 2, field(2))?,
            n: num(row, 3, field(3))?,
            m: num(row, 4, field(4))?,
            k: num(row, 5, field(5))?,
            rounds: num(row, 6, field(6))?,
            opt_k: num(row, 7, field(7))?,
            ratio: num(row, 8, field(8))?,
            queries: num(row, 9, field(9))?,
            opt1: num(row, 10, field(10))?,
            wasted: num(row, 11, field(11))?,
            prop1_ok: true,
        });
    }
    Ok(rows)
}

/// Per (source, alg): run count, worst and mean ratio, worst additive gap
/// `rounds - opt_k`, total wasted queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableLine {
    pub source: String,
    pub alg: String,
    pub runs: usize,
    pub max_ratio: Rational,
    pub mean_ratio: Rational,
    pub max_gap: i64,
    pub wasted: usize,
}

pub fn aggregate(rows: &[SweepRow]) -> Vec<TableLine> {
    let mut groups: BTreeMap<(String, String), Vec<&SweepRow>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((row.source.clone(), row.alg.clone()))
            .or_default()
            .push(row);
    }
    groups
        .into_iter()
        .map(|((source, alg), rs)| {
            let total: Rational = rs.iter().map(|r| r.ratio.clone()).sum();
            TableLine {
                runs: rs.len(),
                max_ratio: rs.iter().map(|r| r.ratio.clone()).max().unwrap(),
                mean_ratio: total / Rational::from(rs.len()),
                max_gap: rs.iter().map(|r| r.rounds as i64 - r.opt_k as i64).max().unwrap(),
                wasted: rs.iter().map(|r| r.wasted).sum(),
                source,
                alg,
            }
        })
        .collect()
}

/// Fixed-width text rendering of [`aggregate`].
pub fn render_table(lines: &[TableLine]) -> String {
    let head = ["source", "alg", "runs", "max_ratio", "mean_ratio", "max_gap", "wasted"];
    let body: Vec<[String; 7]> = lines
        .iter()
        .map(|l| {
            [
                l.source.clone(),
                l.alg.clone(),
                l.runs.to_string(),
                l.max_ratio.to_string(),
                format!("{:.3}", l.mean_ratio.to_f64()),
                l.max_gap.to_string(),
                l.wasted.to_string(),
            ]
        })
        .collect();
    let mut width = head.map(str::len);
    for row in &body {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let fmt_row = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = fmt_row(head.to_vec());
    out.push('\n');
    for row in &body {
        out.push_str(&fmt_row(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
