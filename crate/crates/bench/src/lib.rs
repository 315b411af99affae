//! Workloads shared by the benchmarks.

use qround_core::algorithms::round_algorithm;
use qround_core::generators::{self, RandomParams, SetMode};
use qround_core::harness::run;
use qround_core::{FixedOracle, Instance, ProblemKind, Realization, RunOptions};

/// A fixed instance with its values.
pub struct Workload {
    pub name: String,
    pub instance: Instance,
    pub realization: Realization,
}

impl Workload {
    pub fn fig3(k: usize, c: usize) -> Self {
        let (instance, realization) = generators::fig3(k, c).expect("valid parameters");
        Workload {
            name: format!("fig3:k={k},c={c}"),
            instance,
            realization,
        }
    }

    pub fn random(seed: u64, n: usize, m: usize, k: usize, mode: SetMode, problem: ProblemKind) -> Self {
        let p = RandomParams::new(n, m, k, mode, problem);
        let (instance, realization) = generators::random(seed, &p).expect("valid parameters");
        Workload {
            name: format!("random:n={n},m={m},k={k},mode={mode:?}").to_lowercase(),
            instance,
            realization,
        }
    }

    /// Runs `alg` to completion and returns the round count.
    pub fn rounds(&self, alg: &str) -> usize {
        let mut a = round_algorithm(alg).expect("known algorithm");
        let mut oracle = FixedOracle::new(self.realization.clone());
        run(a.as_mut(), &self.instance, &mut oracle, RunOptions::default())
            .expect("run succeeds")
            .report
            .rounds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_run() {
        assert_eq!(Workload::fig3(3, 3).rounds("budget"), 1);
        let w = Workload::random(1, 40, 6, 4, SetMode::Disjoint, ProblemKind::Minimum);
        assert!(w.rounds("bal") >= 1);
    }
}
