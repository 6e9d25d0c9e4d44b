//! Competitive-ratio reports against the exact optimum.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{trial_seed, HarnessError, InstanceFile};
use crate::cactus::{validate_and_decompose, GraphClass};
use crate::game::Instance;
use crate::instances::{random_cactus, random_sequence, random_tree, random_unicyclic, rng, InstanceError};
use crate::online::{run_algorithm, AlgorithmKind};
use crate::opt::{solve_opt, OptError, SolverConfig};
use crate::ratio::Ratio;

/// Slack allowed when comparing a ratio with an irrational bound.
pub const BOUND_EPS: f64 = 1e-9;

/// One algorithm run compared with the optimum. Field order is the column
/// order of the json-lines output; `runtime_ms` is left out of it so that
/// reruns are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    pub instance: String,
    pub n: usize,
    pub class: GraphClass,
    pub kind: AlgorithmKind,
    pub alg_profit: usize,
    pub opt_profit: usize,
    pub ratio: Ratio,
    /// Proven worst-case ratio for this kind on this input, if any.
    pub bound: Option<f64>,
    pub bound_satisfied: bool,
    #[serde(skip)]
    pub runtime_ms: f64,
}

/// The proven competitive ratio of `kind` on `inst`. The even-sequence
/// strategy has a guarantee only when every round releases an even number
/// of firefighters.
pub fn guaranteed_bound(kind: AlgorithmKind, inst: &Instance) -> Option<f64> {
    let root_n = (inst.n() as f64).sqrt();
    match kind {
        AlgorithmKind::GreedyTree => Some(2.0),
        AlgorithmKind::AlgA => Some(6.0 * root_n + 1.0),
        AlgorithmKind::AlgC => Some(15.0 * root_n + 1.0),
        AlgorithmKind::AlgE => inst.sequence.iter().all(|f| f % 2 == 0).then_some(3.0),
    }
}

pub fn bound_satisfied(ratio: Ratio, bound: Option<f64>) -> bool {
    match bound {
        None => true,
        Some(_) if ratio.is_infinite() => false,
        Some(b) => ratio.value() <= b + BOUND_EPS,
    }
}

/// Runs `kind` and the exact solver on one instance.
pub fn ratio_report(file: &InstanceFile, kind: AlgorithmKind, config: &SolverConfig) -> Result<RatioReport, HarnessError> {
    let start = Instant::now();
    let inst = &file.instance;
    let class = validate_and_decompose(&inst.graph)
        .map_err(crate::online::AlgorithmError::from)?
        .class();
    let alg_profit = run_algorithm(inst, kind)?.profit;
    let opt_profit = solve_opt(inst, config)?.value;
    let ratio = Ratio::new(opt_profit, alg_profit);
    let bound = guaranteed_bound(kind, inst);
    Ok(RatioReport {
        instance: file.name.clone().unwrap_or_else(|| "unnamed".to_string()),
        n: inst.n(),
        class,
        kind,
        alg_profit,
        opt_profit,
        ratio,
        bound,
        bound_satisfied: bound_satisfied(ratio, bound),
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// A batch of random instances suited to one algorithm kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchSpec {
    pub kind: AlgorithmKind,
    pub trials: usize,
    pub n_max: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Default)]
pub struct BatchOutcome {
    /// Reports in trial order.
    pub reports: Vec<RatioReport>,
    /// Trials dropped because the solver ran out of budget.
    pub skipped: Vec<usize>,
}

impl BatchOutcome {
    pub fn max_ratio(&self) -> Option<Ratio> {
        self.reports
            .iter()
            .map(|r| r.ratio)
            .max_by(|a, b| a.cmp_exact(b))
    }

    pub fn all_bounds_satisfied(&self) -> bool {
        self.reports.iter().all(|r| r.bound_satisfied)
    }
}

/// Random instance number `trial` of a batch: trees for the tree greedy,
/// graphs with one cycle for the 1-almost-tree strategy, cacti otherwise.
/// The even-sequence strategy gets even sequences.
pub fn random_instance(kind: AlgorithmKind, trial: usize, n_max: usize, seed: u64) -> Result<InstanceFile, InstanceError> {
    if n_max < 4 {
        return Err(InstanceError::BadParams(format!("n-max must be at least 4, got {n_max}")));
    }
    let mut r = rng(trial_seed(seed, trial));
    let n = r.gen_range(4..=n_max);
    let graph_seed: u64 = r.gen();
    let (family, graph) = match kind {
        AlgorithmKind::GreedyTree => ("tree", random_tree(n, graph_seed)?),
        AlgorithmKind::AlgA => ("unicyclic", random_unicyclic(n, n, r.gen_bool(0.5), graph_seed)?),
        AlgorithmKind::AlgC | AlgorithmKind::AlgE => {
            let fraction = r.gen_range(0.2..=0.9);
            let max_len = r.gen_range(3..=n);
            ("cactus", random_cactus(n, fraction, max_len, graph_seed)?)
        }
    };
    let even = kind == AlgorithmKind::AlgE;
    let len = r.gen_range(1..=5);
    let budget = r.gen_range(if even { 2 } else { 1 }..=n / 2 + 1);
    let sequence = random_sequence(len, budget, even, r.gen());
    Ok(InstanceFile::named(
        format!("{family}-{trial}"),
        Instance::new(graph, sequence),
    ))
}

/// Runs a batch in parallel. Results are collected in trial order, so the
/// output does not depend on the number of worker threads.
pub fn ratio_batch(spec: &BatchSpec, config: &SolverConfig) -> Result<BatchOutcome, HarnessError> {
    let results: Vec<Result<Option<RatioReport>, HarnessError>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let file = random_instance(spec.kind, t, spec.n_max, spec.seed)?;
            match ratio_report(&file, spec.kind, config) {
                Ok(r) => Ok(Some(r)),
                Err(HarnessError::Opt(OptError::SearchBudgetExceeded { budget })) => {
                    log::warn!("trial {t}: solver budget {budget} exceeded, skipping");
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut outcome = BatchOutcome::default();
    for (t, r) in results.into_iter().enumerate() {
        match r? {
            Some(report) => outcome.reports.push(report),
            None => outcome.skipped.push(t),
        }
    }
    Ok(outcome)
}

pub fn json_line(report: &RatioReport) -> String {
    serde_json::to_string(report).expect("reports serialize")
}

/// Fixed-width table with a header row.
pub fn table(reports: &[RatioReport]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<20} {:>4} {:<16} {:<11} {:>4} {:>4} {:>10} {:>10} {:>5} {:>9}",
        "instance", "n", "class", "kind", "alg", "opt", "ratio", "bound", "ok", "ms"
    )
    .unwrap();
    for r in reports {
        let bound = r.bound.map_or_else(|| "-".to_string(), |b| format!("{b:.4}"));
        writeln!(
            out,
            "{:<20} {:>4} {:<16} {:<11} {:>4} {:>4} {:>10} {:>10} {:>5} {:>9.2}",
            r.instance,
            r.n,
            r.class.name(),
            r.kind.name(),
            r.alg_profit,
            r.opt_profit,
            r.ratio.to_string(),
            bound,
            if r.bound_satisfied { "yes" } else { "NO" },
            r.runtime_ms
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::make_tadpole;

    #[test]
    fn bounds_by_kind() {
        let inst = Instance::new(make_tadpole(10, 3).unwrap(), vec![2, 1]);
        assert_eq!(guaranteed_bound(AlgorithmKind::AlgE, &inst), None);
        assert_eq!(guaranteed_bound(AlgorithmKind::AlgE, &inst.with_sequence(vec![2, 0, 4])), Some(3.0));
        assert_eq!(guaranteed_bound(AlgorithmKind::AlgC, &inst), Some(15.0 * 14f64.sqrt() + 1.0));
    }

    #[test]
    fn satisfied_edges() {
        assert!(bound_satisfied(Ratio::new(0, 0), Some(1.0)));
        assert!(bound_satisfied(Ratio::new(3, 1), Some(3.0)));
        assert!(!bound_satisfied(Ratio::new(7, 2), Some(3.0)));
        assert!(!bound_satisfied(Ratio::new(1, 0), Some(100.0)));
        assert!(bound_satisfied(Ratio::new(1, 0), None));
    }

    #[test]
    fn tadpole_report_line() {
        let file = InstanceFile::named("tp", Instance::new(make_tadpole(10, 3).unwrap(), vec![1, 1]));
        let r = ratio_report(&file, AlgorithmKind::AlgE, &SolverConfig::default()).unwrap();
        assert_eq!((r.alg_profit, r.opt_profit), (4, 9));
        assert_eq!(
            json_line(&r),
            r#"{"instance":"tp","n":14,"class":"one-almost-tree","kind":"alg-e","alg_profit":4,"opt_profit":9,"ratio":2.25,"bound":null,"bound_satisfied":true}"#
        );
    }

    #[test]
    fn batch_is_order_stable() {
        let spec = BatchSpec {
            kind: AlgorithmKind::AlgC,
            trials: 12,
            n_max: 10,
            seed: 7,
        };
        let a = ratio_batch(&spec, &SolverConfig::default()).unwrap();
        let b = ratio_batch(&spec, &SolverConfig::default()).unwrap();
        let lines = |o: &BatchOutcome| o.reports.iter().map(json_line).collect::<Vec<_>>();
        assert_eq!(lines(&a), lines(&b));
        assert_eq!(a.reports.len() + a.skipped.len(), 12);
    }
}
