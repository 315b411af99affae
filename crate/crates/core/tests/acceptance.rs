//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! fails if any criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use qround_core::algorithms::{round_algorithm, BatchAlgorithm, SortingBatches};
use qround_core::generators::{self, Ends, RandomParams, SetMode};
use qround_core::harness::{charging_violations, run, run_batches, RunOptions, RunOutcome};
use qround_core::math::{budget_bound_min, is_eps_good, w, w_inverse};
use qround_core::opt::{opt1_bruteforce, opt1_minimum, opt1_selection_full, DEFAULT_CAP};
use qround_core::oracle::{FixedOracle, ValueOracle};
use qround_core::rational::{harmonic, Rational};
use qround_core::reductions::{BatchesToRounds, RoundFactory, RoundsToBatches};
use qround_core::source::Source;
use qround_core::{parse_instance, ElementId, Instance, ProblemKind, Realization};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const MINIMUM_ALGS: [&str; 4] = ["min-single", "bal", "bal-rr", "budget"];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_alg(alg: &str, instance: &Instance, oracle: &mut dyn ValueOracle) -> Result<RunOutcome, String> {
    let mut a = round_algorithm(alg).map_err(|e| e.to_string())?;
    run(a.as_mut(), instance, oracle, RunOptions::default()).map_err(|e| format!("{alg}: {e}"))
}

fn run_fixed(alg: &str, instance: &Instance, r: &Realization) -> Result<RunOutcome, String> {
    run_alg(alg, instance, &mut FixedOracle::new(r.clone()))
}

fn run_source(alg: &str, source: &Source) -> Result<RunOutcome, String> {
    let mut b = source.build(0).map_err(|e| e.to_string())?;
    run_alg(alg, &b.instance, b.oracle.as_mut()).map_err(|e| format!("{source}: {e}"))
}

fn random(seed: u64, p: RandomParams) -> Result<(Instance, Realization), String> {
    generators::random(seed, &p).map_err(|e| format!("seed {seed}: {e}"))
}

fn pick<T: Copy>(seed: u64, items: &[T]) -> T {
    items[(seed % items.len() as u64) as usize]
}

fn ceil_rational(x: &Rational) -> usize {
    x.ceil_u64() as usize
}

fn c1_sorting() -> Check {
    let mut pairs = 0;
    for c in 1..=10 {
        for k in [1, 3, 5] {
            let out = run_source("sorting-vc", &Source::Pairs { c, k })?;
            let r = &out.report;
            ensure(r.rounds == 2 * r.opt_k && r.opt_k == c, || {
                format!("pairs c={c} k={k}: {} rounds, opt_k {}", r.rounds, r.opt_k)
            })?;
            pairs += 1;
        }
    }
    let mut worst = Rational::zero();
    for seed in 0..500u64 {
        let n = 2 + (seed % 17) as usize;
        let mode = pick(seed, &[SetMode::Single, SetMode::Disjoint, SetMode::Overlap]);
        let m = if mode == SetMode::Single {
            1
        } else {
            1 + (seed / 3 % 3) as usize
        };
        let k = 1 + (seed / 7 % 5) as usize;
        let (inst, real) = random(seed, RandomParams::new(n, m.min(n), k, mode, ProblemKind::Sorting))?;
        let r = run_fixed("sorting-vc", &inst, &real)?.report;
        ensure(r.rounds <= 2 * r.opt_k, || {
            format!("seed {seed}: {} rounds > 2 * {}", r.rounds, r.opt_k)
        })?;
        worst = worst.max(r.ratio);
    }
    Ok(format!(
        "{pairs} pair instances at exactly 2 opt_k; 500 random, worst ratio {worst}"
    ))
}

fn c2_bal() -> Check {
    let (inst, real) = generators::fig2();
    let r = run_fixed("bal", &inst, &real)?.report;
    ensure(r.rounds == 3 && r.wasted == 2 && r.opt_k == 3, || {
        format!("fig2: {} rounds, {} wasted, opt_k {}", r.rounds, r.wasted, r.opt_k)
    })?;
    let mut worst_gap = 0i64;
    for seed in 0..500u64 {
        let k = 2 + (seed % 15) as usize;
        let m = 1 + (seed / 15 % k as u64) as usize;
        let n = m + (seed % (2 * m as u64 + 5)) as usize;
        let (inst, real) = random(
            seed,
            RandomParams::new(n, m, k, SetMode::Disjoint, ProblemKind::Minimum),
        )?;
        let extra = ceil_rational(&harmonic(m as u64));
        for alg in ["bal", "bal-rr"] {
            let r = run_fixed(alg, &inst, &real)?.report;
            ensure(r.rounds <= r.opt_k + extra, || {
                format!("{alg} seed {seed}: {} rounds > {} + {extra}", r.rounds, r.opt_k)
            })?;
            worst_gap = worst_gap.max(r.rounds as i64 - r.opt_k as i64);
        }
    }
    Ok(format!(
        "fig2 3 rounds / 2 wasted; 500 random, worst rounds - opt_k = {worst_gap}"
    ))
}

/// One head shared by every set. `k - 1` sets continue with a chain of
/// elements that lie above their minimum, so round 1 wastes `k - 1` queries;
/// `tails` more sets each own one useful element.
fn shared_head(k: usize, tails: usize) -> (Instance, Realization) {
    let mut text = format!("k {k}\nproblem minimum\ninterval 1 (0,10)\n");
    let mut values = String::from("value 1 1\n");
    for j in 0..k - 1 {
        text += &format!("interval {} ({},20)\n", j + 2, 5 + j);
        values += &format!("value {} {}\n", j + 2, 6 + j);
    }
    let chain: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
    for i in 0..k - 1 {
        text += &format!("set S{} {}\n", i + 1, chain.join(" "));
    }
    for t in 0..tails {
        let id = k + 1 + t;
        text += &format!("interval {id} (1/2,20)\nset T{} 1 {id}\n", t + 1);
        values += &format!("value {id} 2\n");
    }
    let (inst, r) = parse_instance(&(text + &values)).expect("valid instance");
    (inst, r.expect("has values"))
}

/// Every budget run that criterion 3 looks at.
fn budget_runs() -> Result<Vec<(String, RunOutcome)>, String> {
    let mut out = Vec::new();
    for k in [3, 5] {
        for c in 1..=4 {
            let (inst, real) = generators::fig3(k, c).map_err(|e| e.to_string())?;
            out.push((format!("fig3 k={k} c={c}"), run_fixed("budget", &inst, &real)?));
        }
    }
    for k in [3, 4, 6] {
        for tails in [10, 20, 30] {
            let (inst, real) = shared_head(k, tails);
            out.push((
                format!("shared head k={k} tails={tails}"),
                run_fixed("budget", &inst, &real)?,
            ));
        }
    }
    for seed in 0..300u64 {
        let n = 4 + (seed % 27) as usize;
        let m = 2 + (seed / 3 % 7) as usize;
        let k = 2 + (seed / 5 % 5) as usize;
        let (inst, real) = random(seed, RandomParams::new(n, m, k, SetMode::Overlap, ProblemKind::Minimum))?;
        out.push((format!("random seed {seed}"), run_fixed("budget", &inst, &real)?));
    }
    Ok(out)
}

fn c3_budget() -> Check {
    for k in [3, 5] {
        for c in 1..=4 {
            let (inst, real) = generators::fig3(k, c).map_err(|e| e.to_string())?;
            let bal = run_fixed("bal", &inst, &real)?;
            ensure(bal.report.rounds == c, || {
                format!("bal on fig3 k={k} c={c}: {} rounds", bal.report.rounds)
            })?;
            if (k, c) == (3, 3) {
                let rounds: Vec<Vec<u32>> = bal
                    .trace
                    .rounds
                    .iter()
                    .map(|r| r.queries.iter().map(|id| id.0).collect())
                    .collect();
                ensure(rounds == vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]], || {
                    format!("bal schedule on fig3: {rounds:?}")
                })?;
                let budget = run_fixed("budget", &inst, &real)?;
                let first: Vec<u32> = budget.trace.rounds[0].queries.iter().map(|id| id.0).collect();
                ensure(first == vec![1, 4, 7], || format!("budget round 1 on fig3: {first:?}"))?;
            }
        }
    }
    let runs = budget_runs()?;
    let mut tight = 0;
    for (name, out) in &runs {
        let r = &out.report;
        if name.starts_with("fig3") {
            ensure(r.rounds == r.opt_k, || {
                format!("budget on {name}: {} rounds, opt_k {}", r.rounds, r.opt_k)
            })?;
            continue;
        }
        let (bound, eps) = budget_bound_min(r.opt_k as u64, r.m as u64);
        ensure(Rational::from(r.rounds) <= bound, || {
            format!("{name}: {} rounds > {bound} (eps {eps})", r.rounds)
        })?;
        tight += (r.rounds == r.opt_k) as usize;
    }
    Ok(format!(
        "bal needs c rounds on fig3, budget opt_k; 309 other instances within bound ({tight} at opt_k)"
    ))
}

fn c4_charging() -> Check {
    let runs = budget_runs()?;
    let mut charges = 0;
    for (name, out) in &runs {
        let bad = charging_violations(out);
        ensure(bad.is_empty(), || format!("{name}: {}", bad.join("; ")))?;
        charges += out.charges.iter().map(|c| c.charges.len()).sum::<usize>();
    }
    Ok(format!("{} runs, {charges} charged queries, 0 violations", runs.len()))
}

fn c5_minimum_lower_bounds() -> Check {
    let mut lines = Vec::new();
    for big_m in [2, 3] {
        for alg in MINIMUM_ALGS {
            let r = run_source(alg, &Source::Wlb { big_m })?.report;
            ensure(r.opt_k == 1 && r.rounds >= big_m, || {
                format!("wlb M={big_m} {alg}: {} rounds, opt_k {}", r.rounds, r.opt_k)
            })?;
            lines.push(format!("{alg}@M={big_m}:{}", r.rounds));
        }
    }
    for m in [4, 8] {
        let need = Rational::from(m) * (harmonic(m as u64) - Rational::one());
        for alg in MINIMUM_ALGS {
            let r = run_source(alg, &Source::Additive { m })?.report;
            ensure(Rational::from(r.wasted) >= need, || {
                format!("additive m={m} {alg}: {} wasted < {need}", r.wasted)
            })?;
        }
    }
    Ok(format!("wlb rounds {}; additive wasted >= k(H(m)-1)", lines.join(" ")))
}

fn c6_selection_value() -> Check {
    for seed in 0..500u64 {
        let n = 1 + (seed % 16) as usize;
        let i = 1 + (seed / 16 % n.div_ceil(2) as u64) as usize;
        let k = 1 + (seed / 3 % 4) as usize;
        let p = RandomParams::new(n, 1, k, SetMode::Single, ProblemKind::SelectionValue { rank: i });
        let (inst, real) = random(seed, p)?;
        let r = run_fixed("sel-value", &inst, &real)?.report;
        let bound = (r.opt1 + i - 1).div_ceil(k);
        ensure(r.rounds <= bound, || {
            format!("seed {seed}: {} rounds > {bound}", r.rounds)
        })?;
    }
    for i in 1..=6 {
        for k in [1, i] {
            let r = run_source("sel-value", &Source::SelValueLb { i, k })?.report;
            ensure(r.opt1 == 1 && r.queries >= i, || {
                format!("adversary i={i} k={k}: {} queries, opt1 {}", r.queries, r.opt1)
            })?;
        }
    }
    Ok("500 random within ceil((opt1+i-1)/k); adversary forces i queries against opt1 = 1".into())
}

fn check_selection_full(name: &str, out: &RunOutcome) -> Result<(), String> {
    let r = &out.report;
    ensure(r.rounds <= 2 * r.opt_k, || {
        format!("{name}: {} rounds > 2 * {}", r.rounds, r.opt_k)
    })?;
    let per_round = out.trace.usefulness(&out.opt);
    for (t, (useful, wasted)) in per_round.iter().enumerate().take(per_round.len().saturating_sub(1)) {
        ensure(wasted <= useful, || {
            format!("{name} round {}: {wasted} wasted > {useful} useful", t + 1)
        })?;
    }
    for (t, c) in out.categories.iter().enumerate() {
        ensure(c.a >= 1 && c.b < c.a, || {
            format!("{name} round {}: a={} b={}", t + 1, c.a, c.b)
        })?;
    }
    ensure(out.categories.len() == r.rounds, || {
        format!("{name}: category log has a gap")
    })
}

fn c7_selection_full() -> Check {
    for seed in 0..500u64 {
        let n = 1 + (seed % 16) as usize;
        let i = 1 + (seed * 7 % n as u64) as usize;
        let k = 1 + (seed / 5 % 5) as usize;
        let mut p = RandomParams::new(n, 1, k, SetMode::Single, ProblemKind::SelectionFull { rank: i });
        p.ends = Some(pick(seed, &[Ends::Mixed, Ends::Closed, Ends::Open]));
        let (inst, real) = random(seed, p)?;
        check_selection_full(&format!("seed {seed}"), &run_fixed("sel-full", &inst, &real)?)?;
    }
    for i in 2..=6 {
        let out = run_source("sel-full", &Source::SelFullLb { i })?;
        check_selection_full(&format!("lower-bound family i={i}"), &out)?;
    }
    Ok("500 random (mixed, closed, open ends) and the i = k family within 2 opt_k; per-round checks hold".into())
}

fn c8_oracles() -> Check {
    for seed in 0..1000u64 {
        let n = 1 + (seed % 12) as usize;
        let mode = pick(seed, &[SetMode::Single, SetMode::Disjoint, SetMode::Overlap]);
        let m = if mode == SetMode::Single {
            1
        } else {
            (1 + (seed / 3 % 3) as usize).min(n)
        };
        let (inst, real) = random(seed, RandomParams::new(n, m, 2, mode, ProblemKind::Minimum))?;
        let a = opt1_minimum(&inst, &real).map_err(|e| e.to_string())?;
        let b = opt1_bruteforce(&inst, &real, DEFAULT_CAP).map_err(|e| e.to_string())?;
        ensure(a.opt1 == b.opt1, || {
            format!("minimum seed {seed}: {} vs {}", a.opt1, b.opt1)
        })?;

        let i = 1 + (seed / 12 % n as u64) as usize;
        let mut p = RandomParams::new(n, 1, 2, SetMode::Single, ProblemKind::SelectionFull { rank: i });
        p.ends = Some(pick(seed, &[Ends::Mixed, Ends::Open, Ends::Closed]));
        let (inst, real) = random(seed, p)?;
        let a = opt1_selection_full(&inst, &real).map_err(|e| e.to_string())?;
        let b = opt1_bruteforce(&inst, &real, DEFAULT_CAP).map_err(|e| e.to_string())?;
        ensure(a.opt1 == b.opt1, || {
            format!("selection seed {seed}: {} vs {}", a.opt1, b.opt1)
        })?;
    }
    Ok("1000 seeds each for minimum and selection-full agree with brute force".into())
}

fn queried_sorted(out: &RunOutcome) -> Vec<ElementId> {
    let mut q: Vec<ElementId> = out.trace.queried().collect();
    q.sort();
    q
}

fn c9_reductions() -> Check {
    // batches -> rounds, with the two-batch sorting algorithm (alpha = 2, r = 2)
    let mut wrapped_runs = 0;
    let mut check_wrapped =
        |name: String, inst: &Instance, oracle: &mut dyn ValueOracle| -> Result<RunOutcome, String> {
            let mut w = BatchesToRounds::new(Box::new(SortingBatches::default()));
            let out = run(&mut w, inst, oracle, RunOptions::default()).map_err(|e| format!("{name}: {e}"))?;
            let r = &out.report;
            ensure(r.rounds <= 2 * r.opt_k + 1 && w.batches_used() <= 2, || {
                format!(
                    "{name}: {} rounds in {} batches, opt_k {}",
                    r.rounds,
                    w.batches_used(),
                    r.opt_k
                )
            })?;
            wrapped_runs += 1;
            Ok(out)
        };
    for c in 1..=5 {
        for k in 1..=3 {
            let mut b = Source::Pairs { c, k }.build(0).map_err(|e| e.to_string())?;
            check_wrapped(format!("pairs c={c} k={k}"), &b.instance, b.oracle.as_mut())?;
        }
    }
    for seed in 0..200u64 {
        let n = 2 + (seed % 15) as usize;
        let k = 1 + (seed % 4) as usize;
        let (inst, real) = random(seed, RandomParams::new(n, 1, k, SetMode::Single, ProblemKind::Sorting))?;
        let rounds = check_wrapped(
            format!("sorting seed {seed}"),
            &inst,
            &mut FixedOracle::new(real.clone()),
        )?;
        let batches = run_batches(
            &mut SortingBatches::default(),
            &inst,
            &mut FixedOracle::new(real),
            RunOptions::default(),
        )
        .map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(queried_sorted(&rounds) == queried_sorted(&batches), || {
            format!("seed {seed}: round split changed the query set")
        })?;
    }

    // rounds -> batches
    let mut batch_runs = 0;
    for seed in 0..200u64 {
        // sorting optima come from brute force, so keep those small
        let n = if seed % 2 == 0 {
            1 + (seed % 30) as usize
        } else {
            1 + (seed % 16) as usize
        };
        let (alg, alpha, problem) = if seed % 2 == 0 {
            ("min-single", Rational::one(), ProblemKind::Minimum)
        } else {
            ("sorting-vc", Rational::from(2), ProblemKind::Sorting)
        };
        let r_budget = 1 + (seed / 2 % 5) as usize;
        let (inst, real) = random(seed, RandomParams::new(n, 1, 1, SetMode::Single, problem))?;
        let factory: RoundFactory = Box::new(move || round_algorithm(alg).unwrap());
        let mut b = RoundsToBatches::new(factory, &alpha, r_budget, n).map_err(|e| e.to_string())?;
        ensure(b.max_batches() <= r_budget, || {
            format!("seed {seed}: plan uses {} > {r_budget}", b.max_batches())
        })?;
        let out = run_batches(&mut b, &inst, &mut FixedOracle::new(real), RunOptions::default())
            .map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(out.report.rounds <= r_budget, || {
            format!("seed {seed}: {} batches > {r_budget}", out.report.rounds)
        })?;
        batch_runs += 1;
    }

    // W^-1
    ensure((w_inverse(2.0).unwrap() - 2.0).abs() <= 1e-9, || "W^-1(2) != 2".into())?;
    for j in 0..1000 {
        let x = 2f64 * 2f64.powf(19.0 * j as f64 / 999.0);
        let y = w_inverse(x).map_err(|e| e.to_string())?;
        let lg = x.log2();
        ensure(x / lg <= y + 1e-9 && y <= 2.0 * x / lg + 1e-9, || {
            format!("W^-1({x}) = {y} out of range")
        })?;
        ensure((w(y) - x).abs() <= 1e-8, || format!("W(W^-1({x})) = {}", w(y)))?;
    }
    Ok(format!(
        "{wrapped_runs} batch->round runs, {batch_runs} round->batch runs in budget; W^-1 on 1000 points"
    ))
}

fn c10_properties() -> Check {
    // balanced distribution: with more than k active sets, one query per set
    let mut checked_rounds = 0;
    for seed in 0..200u64 {
        let k = 2 + (seed % 4) as usize;
        let m = k + 1 + (seed / 4 % 5) as usize;
        let n = m + (seed % 13) as usize;
        let (inst, real) = random(
            seed,
            RandomParams::new(n, m, k, SetMode::Disjoint, ProblemKind::Minimum),
        )?;
        let owner: Vec<usize> = {
            let mut o = vec![0; n];
            for (s, set) in inst.sets().iter().enumerate() {
                for id in &set.members {
                    o[id.idx()] = s;
                }
            }
            o
        };
        for alg in ["bal", "bal-rr"] {
            let out = run_fixed(alg, &inst, &real)?;
            for (t, round) in out.trace.rounds.iter().enumerate() {
                let active: Vec<usize> = (0..m).filter(|&s| out.trace.solved_at[s] > t).collect();
                if active.len() <= k {
                    continue;
                }
                let mut sets: Vec<usize> = round.queries.iter().map(|id| owner[id.idx()]).collect();
                ensure(sets.iter().all(|s| active.contains(s)), || {
                    format!("{alg} seed {seed}: query in a solved set")
                })?;
                sets.sort();
                sets.dedup();
                ensure(sets.len() == round.queries.len(), || {
                    format!("{alg} seed {seed} round {}: two queries in one set", t + 1)
                })?;
                checked_rounds += 1;
            }
        }
    }

    // an eps-bad budget round is followed by at least 2k/(2+eps) useful queries
    let mut bad_rounds = 0;
    for (name, out) in budget_runs()? {
        let k = out.report.k;
        let per_round = out.trace.usefulness(&out.opt);
        for t in 0..per_round.len() {
            let active = (0..out.report.m).filter(|&s| out.trace.solved_at[s] > t).count();
            let solved = (0..out.report.m).filter(|&s| out.trace.solved_at[s] == t + 1).count();
            for eps in qround_core::math::eps_grid() {
                if is_eps_good(k, per_round[t].0, active, solved, &eps) {
                    continue;
                }
                bad_rounds += 1;
                let Some(&(next_useful, _)) = per_round.get(t + 1) else {
                    continue;
                };
                let need = Rational::from(2 * k) / (Rational::from(2) + &eps);
                ensure(Rational::from(next_useful) >= need, || {
                    format!(
                        "{name}: round {} is {eps}-bad but round {} has {next_useful} useful",
                        t + 1,
                        t + 2
                    )
                })?;
            }
        }
    }

    ensure(bad_rounds > 0, || "no eps-bad budget round to check".into())?;

    // counting identity on filling runs
    let mut filling = 0;
    for seed in 0..200u64 {
        let n = 2 + (seed % 20) as usize;
        let k = 1 + (seed % 5) as usize;
        let problem = pick(seed, &[ProblemKind::Minimum, ProblemKind::Sorting]);
        let (inst, real) = random(seed, RandomParams::new(n, 1, k.max(2), SetMode::Single, problem))?;
        let algs: &[&str] = if problem == ProblemKind::Minimum {
            &["min-single", "bal", "budget"]
        } else {
            &["sorting-vc"]
        };
        for alg in algs {
            let r = run_fixed(alg, &inst, &real)?.report;
            ensure(r.prop1.holds, || format!("{alg} seed {seed}: counting identity fails"))?;
            filling += r.prop1.filling as usize;
        }
    }
    Ok(format!(
        "{checked_rounds} crowded BAL rounds spread out; {bad_rounds} eps-bad budget rounds recovered; {filling} filling runs obey the counting identity"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("sorting within 2 opt_k", c1_sorting),
        ("balanced minimum additive bound", c2_bal),
        ("budget vs balanced on shared sets", c3_budget),
        ("charging only to solved sets", c4_charging),
        ("minimum lower-bound adversaries", c5_minimum_lower_bounds),
        ("selection value bound", c6_selection_value),
        ("selection full within 2 opt_k", c7_selection_full),
        ("closed-form optima match brute force", c8_oracles),
        ("batch and round reductions, W^-1", c9_reductions),
        ("per-round property substitutes", c10_properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
