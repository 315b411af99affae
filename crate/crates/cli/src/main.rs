use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use qround_core::algorithms::{batch_algorithm, round_algorithm, supports, BATCH_ALGORITHMS, ROUND_ALGORITHMS};
use qround_core::harness::{run, run_batches, RunOutcome};
use qround_core::knowledge::KnowledgeState;
use qround_core::opt::{canonical_opt, is_feasible, is_prefix_per_set, opt1_bruteforce, OptMethod, DEFAULT_CAP};
use qround_core::reductions::{BatchesToRounds, RoundFactory, RoundsToBatches};
use qround_core::solved::{extract_certificate, verify_certificate, SolutionCertificate};
use qround_core::sweep::{aggregate, parse_spec, read_csv, render_table, sweep, write_csv};
use qround_core::{
    parse_instance, serialize_instance, FixedOracle, Instance, ProblemKind, Rational, RunOptions, Source, ValueOracle,
};

#[derive(Parser)]
#[command(name = "qround", version, about = "Query minimization under uncertainty, in rounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance file from a named source.
    Generate {
        /// e.g. `fig3:k=3,c=3` or `random:n=10,m=3,k=2`
        #[arg(long)]
        source: String,
        /// Seed for random sources without their own `seed=`.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Run one algorithm and print its report.
    Run {
        #[arg(long)]
        alg: String,
        #[arg(long, conflicts_with = "source", required_unless_present = "source")]
        instance: Option<PathBuf>,
        /// A named source or adversary, e.g. `wlb:M=2`.
        #[arg(long, visible_alias = "oracle")]
        source: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print one line per round.
        #[arg(long)]
        trace: bool,
        /// Run a round algorithm in the batch model: `r=<int>,alpha=<rat>`.
        #[arg(long, conflicts_with = "as_rounds")]
        as_batches: Option<String>,
        /// Run a batch algorithm in rounds of `k`: `k=<int>`.
        #[arg(long)]
        as_rounds: Option<String>,
    },
    /// Check an instance file with values: optimum, minimality, certificate.
    Verify {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Run a sweep spec and write CSV.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Summarize a sweep CSV per source and algorithm.
    Table {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
}

/// Exit 1: bad input or a failed check. Exit 2: usage, unknown names, I/O.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn invalid(err: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 1,
        err: err.into(),
    }
}

fn usage(err: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        err: err.into(),
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")
            .map_err(usage)?;
    } else {
        text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(usage)?;
    }
    Ok(text)
}

fn write_output(path: &PathBuf, bytes: &[u8]) -> Outcome {
    if path.as_os_str() == "-" {
        let mut out = io::stdout().lock();
        out.write_all(bytes)
            .and_then(|_| out.flush())
            .context("writing stdout")
            .map_err(usage)
    } else {
        std::fs::write(path, bytes)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(usage)
    }
}

fn load_instance(path: &PathBuf) -> Result<(Instance, Option<qround_core::Realization>), Failure> {
    let text = read_input(path)?;
    parse_instance(&text)
        .with_context(|| format!("in {}", path.display()))
        .map_err(invalid)
}

/// `key=value,key=value` with exactly the given keys.
fn key_values<'a>(text: &'a str, keys: &[&str]) -> Result<Vec<&'a str>, Failure> {
    let mut out = vec![None; keys.len()];
    for pair in text.split(',') {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| usage(anyhow!("expected key=value in `{text}`")))?;
        let slot = keys
            .iter()
            .position(|&want| want == k)
            .ok_or_else(|| usage(anyhow!("unknown key `{k}` in `{text}`")))?;
        out[slot] = Some(v);
    }
    out.into_iter()
        .zip(keys)
        .map(|(v, k)| v.ok_or_else(|| usage(anyhow!("missing `{k}` in `{text}`"))))
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, Failure> {
    v.parse().map_err(|_| usage(anyhow!("bad value `{v}` for `{key}`")))
}

fn generate(source: &str, seed: u64, output: &PathBuf) -> Outcome {
    let source: Source = source.parse().map_err(usage)?;
    let built = source.build(seed).map_err(usage)?;
    let mut text = format!("# {source}\n");
    text.push_str(&serialize_instance(&built.instance, built.realization.as_ref()));
    write_output(output, text.as_bytes())
}

fn print_outcome(out: &RunOutcome, trace: bool) -> String {
    let mut s = format!("{}\n", out.report);
    if trace {
        for line in out.trace.lines() {
            let _ = writeln!(s, "{line}");
        }
    }
    for note in &out.notes {
        let _ = writeln!(s, "note: {note}");
    }
    s
}

struct RunArgs {
    alg: String,
    instance: Option<PathBuf>,
    source: Option<String>,
    seed: u64,
    trace: bool,
    as_batches: Option<String>,
    as_rounds: Option<String>,
}

fn run_cmd(a: RunArgs) -> Outcome {
    let (instance, mut oracle): (Instance, Box<dyn ValueOracle>) = match (&a.instance, &a.source) {
        (Some(path), _) => {
            let (inst, r) = load_instance(path)?;
            let r = r.ok_or_else(|| invalid(anyhow!("{} has no values to answer queries with", path.display())))?;
            (inst, Box::new(FixedOracle::new(r)))
        }
        (None, Some(s)) => {
            let source: Source = s.parse().map_err(usage)?;
            let b = source.build(a.seed).map_err(usage)?;
            (b.instance, b.oracle)
        }
        (None, None) => return Err(usage(anyhow!("give --instance or --source"))),
    };
    let is_batch = BATCH_ALGORITHMS.contains(&a.alg.as_str());
    if !is_batch && !ROUND_ALGORITHMS.contains(&a.alg.as_str()) {
        return Err(usage(anyhow!(
            "unknown algorithm `{}`; known: {}, {}",
            a.alg,
            ROUND_ALGORITHMS.join(", "),
            BATCH_ALGORITHMS.join(", ")
        )));
    }
    if !supports(&a.alg, instance.problem()) {
        return Err(usage(anyhow!(
            "{} does not handle {} instances",
            a.alg,
            instance.problem().keyword()
        )));
    }
    let opts = RunOptions::default();
    let outcome = match (is_batch, &a.as_batches, &a.as_rounds) {
        (false, None, None) => {
            let mut alg = round_algorithm(&a.alg).map_err(usage)?;
            run(alg.as_mut(), &instance, oracle.as_mut(), opts)
        }
        (false, Some(spec), None) => {
            let v = key_values(spec, &["r", "alpha"])?;
            let r: usize = parse_num("r", v[0])?;
            let alpha: Rational = parse_num("alpha", v[1])?;
            let name = a.alg.clone();
            let factory: RoundFactory = Box::new(move || round_algorithm(&name).expect("known algorithm"));
            let mut alg = RoundsToBatches::new(factory, &alpha, r, instance.n()).map_err(usage)?;
            run_batches(&mut alg, &instance, oracle.as_mut(), opts)
        }
        (true, None, None) => {
            let mut alg = batch_algorithm(&a.alg).map_err(usage)?;
            run_batches(alg.as_mut(), &instance, oracle.as_mut(), opts)
        }
        (true, None, Some(spec)) => {
            let k: usize = parse_num("k", key_values(spec, &["k"])?[0])?;
            let instance = instance.with_k(k).map_err(usage)?;
            let mut alg = BatchesToRounds::new(batch_algorithm(&a.alg).map_err(usage)?);
            run(&mut alg, &instance, oracle.as_mut(), opts)
        }
        (false, _, Some(_)) => return Err(usage(anyhow!("--as-rounds takes a batch algorithm"))),
        (true, Some(_), _) => return Err(usage(anyhow!("--as-batches takes a round algorithm"))),
    }
    .map_err(invalid)?;
    write_output(&PathBuf::from("-"), print_outcome(&outcome, a.trace).as_bytes())
}

fn certificate_text(instance: &Instance, cert: &SolutionCertificate) -> String {
    let ids = |v: &[qround_core::ElementId]| v.iter().map(|id| id.to_string()).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    match cert {
        SolutionCertificate::Sorting(orders) => {
            for (set, order) in instance.sets().iter().zip(orders) {
                let _ = writeln!(s, "  set {}: {}", set.name, ids(order));
            }
        }
        SolutionCertificate::Minimum(mins) => {
            for (set, (id, v)) in instance.sets().iter().zip(mins) {
                let _ = writeln!(s, "  set {}: min {id} = {v}", set.name);
            }
        }
        SolutionCertificate::SelectionValue(v) => {
            let _ = writeln!(s, "  value {v}");
        }
        SolutionCertificate::SelectionFull { value, holders } => {
            let _ = writeln!(s, "  value {value} held by {}", ids(holders));
        }
    }
    s
}

fn verify(path: &PathBuf) -> Outcome {
    let (instance, r) = load_instance(path)?;
    let r = r.ok_or_else(|| invalid(anyhow!("{} has no values", path.display())))?;
    let opt = canonical_opt(&instance, &r, DEFAULT_CAP).map_err(invalid)?;
    let mut out = String::new();
    let mut failed = false;
    let mut check = |out: &mut String, name: &str, result: Option<bool>| {
        let word = match result {
            Some(true) => "ok",
            Some(false) => {
                failed = true;
                "FAILED"
            }
            None => "skipped",
        };
        let _ = writeln!(out, "check {name}: {word}");
    };
    let _ = writeln!(out, "problem: {}", instance.problem());
    let _ = writeln!(out, "n: {}\nm: {}\nk: {}", instance.n(), instance.m(), instance.k());
    let _ = writeln!(out, "opt1: {} ({})", opt.opt1, opt.method);
    let _ = writeln!(out, "opt_k: {}", opt.opt_k);
    let ids: Vec<String> = opt.opt_set.iter().map(|id| id.to_string()).collect();
    let _ = writeln!(out, "opt set: {}", ids.join(" "));

    check(&mut out, "feasible", Some(is_feasible(&instance, &r, &opt.opt_set)));
    let minimal = (0..opt.opt_set.len()).all(|skip| {
        let fewer: Vec<_> = opt
            .opt_set
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &id)| id)
            .collect();
        !is_feasible(&instance, &r, &fewer)
    });
    check(&mut out, "minimal", Some(minimal));
    let prefix = (instance.problem() == ProblemKind::Minimum).then(|| is_prefix_per_set(&instance, &opt));
    check(&mut out, "prefix per set", prefix);
    let brute = match opt.method {
        OptMethod::ClosedForm => opt1_bruteforce(&instance, &r, DEFAULT_CAP)
            .ok()
            .map(|b| b.opt1 == opt.opt1),
        OptMethod::BruteForce => None,
    };
    check(&mut out, "closed form vs brute force", brute);

    let knowledge =
        KnowledgeState::with_revealed(&instance, &opt.opt_set, |id| r.value(id).clone()).map_err(invalid)?;
    match extract_certificate(&instance, &knowledge) {
        Some(cert) => {
            let ok = verify_certificate(&instance, &knowledge, &cert, &r);
            if let Err(e) = &ok {
                let _ = writeln!(out, "certificate error: {e}");
            }
            check(&mut out, "certificate", Some(ok.is_ok()));
            out.push_str("certificate:\n");
            out.push_str(&certificate_text(&instance, &cert));
        }
        None => check(&mut out, "certificate", Some(false)),
    }
    write_output(&PathBuf::from("-"), out.as_bytes())?;
    if failed {
        Err(invalid(anyhow!("verification failed")))
    } else {
        Ok(())
    }
}

fn bench(spec: &PathBuf, output: &PathBuf, jobs: usize) -> Outcome {
    let text = read_input(spec)?;
    let plan = parse_spec(&text)
        .with_context(|| format!("in {}", spec.display()))
        .map_err(invalid)?;
    let mut rows = Vec::new();
    let mut problems = Vec::new();
    for result in sweep(&plan, jobs) {
        match result {
            Ok(row) if !row.prop1_ok => {
                problems.push(format!(
                    "{} / {} / seed {}: counting identity violated",
                    row.source, row.alg, row.seed
                ));
                rows.push(row);
            }
            Ok(row) => rows.push(row),
            Err(e) => problems.push(e.to_string()),
        }
    }
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv).map_err(usage)?;
    write_output(output, &csv)?;
    if problems.is_empty() {
        Ok(())
    } else {
        for p in &problems {
            eprintln!("error: {p}");
        }
        Err(invalid(anyhow!("{} of {} jobs failed", problems.len(), plan.len())))
    }
}

fn table(input: &PathBuf) -> Outcome {
    let text = read_input(input)?;
    let rows = read_csv(text.as_bytes()).map_err(invalid)?;
    write_output(&PathBuf::from("-"), render_table(&aggregate(&rows)).as_bytes())
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let result = match cli.command {
        Command::Generate { source, seed, output } => generate(&source, seed, &output),
        Command::Run {
            alg,
            instance,
            source,
            seed,
            trace,
            as_batches,
            as_rounds,
        } => run_cmd(RunArgs {
            alg,
            instance,
            source,
            seed,
            trace,
            as_batches,
            as_rounds,
        }),
        Command::Verify { instance } => verify(&instance),
        Command::Bench { spec, output, jobs } => bench(&spec, &output, jobs),
        Command::Table { input } => table(&input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
