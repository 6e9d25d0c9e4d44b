//! Randomized property suites over the structural guarantees of the online
//! strategies and the solver.
//!
//! Every suite runs independent trials; trial `t` draws its instance from
//! [`trial_seed`]`(seed, t)`. The first failing trial (lowest index) is kept
//! as a counterexample whose text form is a valid instance file.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{serialize_instance, trial_seed, HarnessError, InstanceFile};
use crate::cactus::{validate_and_decompose, CactusDecomposition};
use crate::game::{replay, Instance, ProtectionSchedule};
use crate::graph::{Graph, GraphView, VertexSet};
use crate::instances::{random_cactus, random_sequence, random_unicyclic, rng, InstanceError};
use crate::measures::{
    break_subgraph, count_safe, covered_by_vertex, covered_set, cycle_weight, distances_from, vertex_weight,
};
use crate::online::{run_algorithm, AlgorithmKind, BreakChoice, Decision, RunReport, Rule};
use crate::opt::{normalize_nonredundant, solve_opt, OptError, OptResult, SolverConfig};
use crate::ratio::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    NeighborsBest,
    BreakQuality,
    ImprovedBreakFeasibility,
    SecuredBreak,
    CooldownQuality,
    NonRedundant,
    CycleRespecting,
    CountMonotone,
    OptDominance,
    AlgE3Competitive,
    AlgCCycleBudget,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::NeighborsBest,
        Suite::BreakQuality,
        Suite::ImprovedBreakFeasibility,
        Suite::SecuredBreak,
        Suite::CooldownQuality,
        Suite::NonRedundant,
        Suite::CycleRespecting,
        Suite::CountMonotone,
        Suite::OptDominance,
        Suite::AlgE3Competitive,
        Suite::AlgCCycleBudget,
    ];

    /// The suites tied to the structural lemmas behind the competitive
    /// analyses.
    pub const LEMMAS: [Suite; 7] = [
        Suite::NeighborsBest,
        Suite::BreakQuality,
        Suite::ImprovedBreakFeasibility,
        Suite::SecuredBreak,
        Suite::CooldownQuality,
        Suite::NonRedundant,
        Suite::CycleRespecting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::NeighborsBest => "neighbors-best",
            Suite::BreakQuality => "break-quality",
            Suite::ImprovedBreakFeasibility => "improved-break-feasibility",
            Suite::SecuredBreak => "secured-break",
            Suite::CooldownQuality => "cooldown-quality",
            Suite::NonRedundant => "non-redundant",
            Suite::CycleRespecting => "cycle-respecting",
            Suite::CountMonotone => "count-monotone",
            Suite::OptDominance => "opt-dominance",
            Suite::AlgE3Competitive => "alge-3competitive",
            Suite::AlgCCycleBudget => "algc-cycle-budget",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::NeighborsBest => "breaking next to the fire source dominates breaking deeper on a 1-almost tree",
            Suite::BreakQuality => "ALG_A break keeps a 1/(2 sqrt w(C)) share of any other break",
            Suite::ImprovedBreakFeasibility => "improved break keeps ceil(sqrt w(C_1)) - w(u) vertices at depth d_max",
            Suite::SecuredBreak => "ALG_C break keeps a 1/(2 sqrt n) share of any break on a heavy root cycle",
            Suite::CooldownQuality => "break plus forced greedy is within sqrt n of any pair of protections",
            Suite::NonRedundant => "dropping a middle protection on a cycle keeps the profit",
            Suite::CycleRespecting => "covered set of the optimum is the union over cycle groups",
            Suite::CountMonotone => "count is non-increasing in the depth and covered sets are super-additive",
            Suite::OptDominance => "the exact optimum beats every online strategy and replays to its value",
            Suite::AlgE3Competitive => "ALG_E is 3-competitive on even sequences",
            Suite::AlgCCycleBudget => "ALG_C protects at most three vertices of each cycle",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub suite: Suite,
    pub trial: usize,
    pub seed: u64,
    pub message: String,
    pub instance: InstanceFile,
}

impl Counterexample {
    /// The instance file, preceded by comment lines describing the failure.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# suite {} trial {} seed {}", self.suite, self.trial, self.seed).unwrap();
        for line in self.message.lines() {
            writeln!(out, "# {line}").unwrap();
        }
        out.push_str(&serialize_instance(&self.instance));
        out
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    /// Trials the solver could not finish within its budget.
    pub skipped: usize,
    /// Individual checks performed, e.g. one per break event.
    pub checks: usize,
    pub failures: usize,
    /// Largest competitive ratio seen, for the ratio suites.
    pub max_ratio: Option<Ratio>,
    pub first_counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} ({} trials, {} checks, {} failures",
            self.suite,
            if self.passed() { "pass" } else { "FAIL" },
            self.trials,
            self.checks,
            self.failures
        );
        if self.skipped > 0 {
            write!(s, ", {} skipped", self.skipped).unwrap();
        }
        if let Some(r) = self.max_ratio {
            write!(s, ", max ratio {r}").unwrap();
        }
        s.push(')');
        s
    }
}

enum Outcome {
    Pass { checks: usize, ratio: Option<Ratio> },
    Skip,
    Fail { message: String, instance: InstanceFile },
}

fn pass(checks: usize) -> Outcome {
    Outcome::Pass { checks, ratio: None }
}

fn fail(instance: InstanceFile, message: impl Into<String>) -> Outcome {
    Outcome::Fail {
        message: message.into(),
        instance,
    }
}

/// Runs `trials` trials of `suite` in parallel.
pub fn run_suite(suite: Suite, trials: usize, seed: u64, config: &SolverConfig) -> Result<SuiteReport, HarnessError> {
    let outcomes: Vec<Result<Outcome, HarnessError>> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(suite, trial_seed(seed, t), t, config))
        .collect();
    let mut report = SuiteReport {
        suite,
        trials,
        skipped: 0,
        checks: 0,
        failures: 0,
        max_ratio: None,
        first_counterexample: None,
    };
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome? {
            Outcome::Pass { checks, ratio } => {
                report.checks += checks;
                if let Some(r) = ratio {
                    if report.max_ratio.map_or(true, |m| r.cmp_exact(&m).is_gt()) {
                        report.max_ratio = Some(r);
                    }
                }
            }
            Outcome::Skip => report.skipped += 1,
            Outcome::Fail { message, instance } => {
                report.failures += 1;
                if report.first_counterexample.is_none() {
                    report.first_counterexample = Some(Counterexample {
                        suite,
                        trial: t,
                        seed: trial_seed(seed, t),
                        message,
                        instance,
                    });
                }
            }
        }
    }
    Ok(report)
}

fn run_trial(suite: Suite, seed: u64, trial: usize, config: &SolverConfig) -> Result<Outcome, HarnessError> {
    let mut r = rng(seed);
    let outcome = match suite {
        Suite::NeighborsBest => neighbors_best(&mut r, trial)?,
        Suite::BreakQuality => break_quality(&mut r, trial)?,
        Suite::ImprovedBreakFeasibility => improved_break_feasibility(&mut r, trial)?,
        Suite::SecuredBreak => secured_break(&mut r, trial)?,
        Suite::CooldownQuality => cooldown_quality(&mut r, trial)?,
        Suite::NonRedundant => with_budget(non_redundant(&mut r, trial, config))?,
        Suite::CycleRespecting => with_budget(cycle_respecting(&mut r, trial, config))?,
        Suite::CountMonotone => count_monotone(&mut r, trial)?,
        Suite::OptDominance => with_budget(opt_dominance(&mut r, trial, config))?,
        Suite::AlgE3Competitive => with_budget(alge_competitive(&mut r, trial, config))?,
        Suite::AlgCCycleBudget => algc_cycle_budget(&mut r, trial)?,
    };
    Ok(outcome)
}

/// Solver budget exhaustion skips the trial instead of failing the run.
fn with_budget(result: Result<Outcome, HarnessError>) -> Result<Outcome, HarnessError> {
    match result {
        Err(HarnessError::Opt(OptError::SearchBudgetExceeded { .. })) => Ok(Outcome::Skip),
        other => other,
    }
}

// ---------------------------------------------------------------------------
// Random inputs

/// Mostly single firefighters, which is where the break rules fire.
fn sparse_sequence(r: &mut ChaCha8Rng, len: usize) -> Vec<usize> {
    (0..len)
        .map(|_| match r.gen_range(0..20) {
            0..=11 => 1,
            12..=16 => 0,
            _ => 2,
        })
        .collect()
}

fn unicyclic_instance(r: &mut ChaCha8Rng, trial: usize, n_lo: usize, n_hi: usize) -> Result<InstanceFile, InstanceError> {
    let n = r.gen_range(n_lo..=n_hi);
    let on_root = r.gen_bool(0.7);
    let graph = random_unicyclic(n, n, on_root, r.gen())?;
    let len = r.gen_range(1..=8);
    Ok(InstanceFile::named(
        format!("unicyclic-{trial}"),
        Instance::new(graph, sparse_sequence(r, len)),
    ))
}

/// Cacti with long cycles and few pendants, so that heavy root cycles made
/// of light vertices are common.
fn cycle_heavy_instance(r: &mut ChaCha8Rng, trial: usize) -> Result<InstanceFile, InstanceError> {
    let n = r.gen_range(10..=60);
    let fraction = r.gen_range(0.7..=1.0);
    let max_len = r.gen_range(n / 3..=n);
    let graph = random_cactus(n, fraction, max_len, r.gen())?;
    let len = r.gen_range(3..=15);
    Ok(InstanceFile::named(
        format!("cactus-{trial}"),
        Instance::new(graph, sparse_sequence(r, len)),
    ))
}

/// Root cycles decorated with short pendant paths and triangles. Every
/// vertex stays light next to the cycle, which is when break rules apply.
fn necklace_instance(r: &mut ChaCha8Rng, trial: usize) -> InstanceFile {
    let mut edges = Vec::new();
    let mut count = 1;
    let cycles = r.gen_range(1..=3);
    for k in 0..cycles {
        let len = if k == 0 { r.gen_range(8..=30) } else { r.gen_range(3..=12) };
        let first = count;
        let members: Vec<usize> = (first..first + len - 1).collect();
        count += len - 1;
        edges.push((0, members[0]));
        edges.extend(members.windows(2).map(|w| (w[0], w[1])));
        edges.push((members[len - 2], 0));
        for &m in &members {
            match r.gen_range(0..10) {
                0..=2 => {
                    let mut prev = m;
                    for _ in 0..r.gen_range(1..=2) {
                        edges.push((prev, count));
                        prev = count;
                        count += 1;
                    }
                }
                3 => {
                    edges.extend([(m, count), (count, count + 1), (count + 1, m)]);
                    count += 2;
                }
                _ => {}
            }
        }
    }
    let graph = Graph::new(count, edges, 0).expect("necklace is a connected cactus");
    let len = r.gen_range(3..=15);
    InstanceFile::named(
        format!("necklace-{trial}"),
        Instance::new(graph, sparse_sequence(r, len)),
    )
}

/// Either a random cactus or a necklace, half of the time each.
fn break_prone_instance(r: &mut ChaCha8Rng, trial: usize) -> Result<InstanceFile, InstanceError> {
    if r.gen_bool(0.5) {
        Ok(necklace_instance(r, trial))
    } else {
        cycle_heavy_instance(r, trial)
    }
}

/// Small cactus the exact solver handles quickly.
fn small_cactus_instance(
    r: &mut ChaCha8Rng,
    trial: usize,
    n_hi: usize,
    even_only: bool,
) -> Result<InstanceFile, InstanceError> {
    let n = r.gen_range(4..=n_hi);
    let fraction = r.gen_range(0.2..=0.9);
    let max_len = r.gen_range(3..=n);
    let graph = random_cactus(n, fraction, max_len, r.gen())?;
    let len = r.gen_range(1..=5);
    let budget = r.gen_range(if even_only { 2 } else { 1 }..=n / 2 + 1);
    let sequence = random_sequence(len, budget, even_only, r.gen());
    Ok(InstanceFile::named(
        format!("cactus-{trial}"),
        Instance::new(graph, sequence),
    ))
}

// ---------------------------------------------------------------------------
// Helpers on views

/// Root distances of a graph, sorted, unreachable vertices as `usize::MAX`.
/// `count(d)` equals [`count_safe`] at depth `d`.
struct DepthProfile(Vec<usize>);

impl DepthProfile {
    fn of(g: &Graph) -> Self {
        let mut d: Vec<usize> = distances_from(g, &VertexSet::new(g.n()), g.root())
            .into_iter()
            .map(|x| x.unwrap_or(usize::MAX))
            .collect();
        d.sort_unstable();
        DepthProfile(d)
    }

    fn count(&self, depth: usize) -> usize {
        self.0.len() - self.0.partition_point(|&x| x < depth)
    }
}

fn break_profile(g: &Graph, decomp: &CactusDecomposition, c: usize, v: usize) -> DepthProfile {
    DepthProfile::of(&break_subgraph(g, decomp, c, v).expect("vertex lies on the root cycle").graph)
}

/// A break choice translated to the local ids of `view`.
fn localize(choice: &BreakChoice, view: &GraphView) -> BreakChoice {
    let local = |v: usize| view.local(v).expect("break vertices belong to the view");
    BreakChoice {
        vertex: local(choice.vertex),
        cycle: choice.cycle.iter().map(|&v| local(v)).collect(),
        u_star: local(choice.u_star),
        ..choice.clone()
    }
}

fn break_events(report: &RunReport, rule: Rule) -> impl Iterator<Item = (usize, &Decision)> + '_ {
    report
        .decisions
        .iter()
        .enumerate()
        .filter(move |(_, d)| d.rule == rule && d.break_choice.is_some())
}

fn cycle_of(decomp: &CactusDecomposition, choice: &BreakChoice) -> usize {
    decomp
        .edge_cycle(choice.cycle[0], choice.cycle[1])
        .expect("break cycle is a cycle of the view")
}

fn sq(x: usize) -> u128 {
    (x as u128) * (x as u128)
}

// ---------------------------------------------------------------------------
// Suites

fn neighbors_best(r: &mut ChaCha8Rng, trial: usize) -> Result<Outcome, HarnessError> {
    let n = r.gen_range(4..=20);
    let graph = random_unicyclic(n, n, true, r.gen())?;
    let file = InstanceFile::named(format!("unicyclic-{trial}"), Instance::new(graph, vec![1]));
    let g = &file.instance.graph;
    let decomp = validate_and_decompose(g).map_err(crate::online::AlgorithmError::from)?;
    let c = decomp.root_cycles().next().expect("root lies on the cycle");
    let cycle = decomp.cycle(c).to_vec();
    let (first, last) = (cycle[1], cycle[cycle.len() - 1]);
    let ends = [
        (break_profile(g, &decomp, c, first), vertex_weight(g, first).unwrap()),
        (break_profile(g, &decomp, c, last), vertex_weight(g, last).unwrap()),
    ];
    let mut checks = 0;
    for &u in &cycle[1..] {
        let p = break_profile(g, &decomp, c, u);
        for d in 0..=n {
            let lhs = p.count(d);
            if ends.iter().all(|(pe, w)| lhs > pe.count(d) + w) {
                return Ok(fail(
                    file.clone(),
                    format!(
                        "breaking at {u} keeps {lhs} at depth {d}; ends {first}/{last} keep {}+{} and {}+{}",
                        ends[0].0.count(d),
                        ends[0].1,
                        ends[1].0.count(d),
                        ends[1].1
                    ),
                ));
            }
            checks += 1;
        }
    }
    Ok(pass(checks))
}

fn break_quality(r: &mut ChaCha8Rng, trial: usize) -> Result<Outcome, HarnessError> {
    let file = unicyclic_instance(r, trial, 5, 30)?;
    let report = run_algorithm(&file.instance, AlgorithmKind::AlgA)?;
    let mut checks = 0;
    for (k, d) in break_events(&report, Rule::BreakCycle) {
        let g = &d.view.graph;
        let decomp = validate_and_decompose(g).map_err(crate::online::AlgorithmError::from)?;
        let choice = localize(d.break_choice.as_ref().unwrap(), &d.view);
        let c = cycle_of(&decomp, &choice);
        let wc = cycle_weight(g, &decomp, c);
        let hat = break_profile(g, &decomp, c, choice.vertex);
        for u in decomp.non_root_members(c) {
            let p = break_profile(g, &decomp, c, u);
            for depth in 0..=g.n() {
                let (lhs, rhs) = (p.count(depth), hat.count(depth) + 1);
                // lhs / rhs <= 2 sqrt(wc)
                if sq(lhs) > 4 * (wc as u128) * sq(rhs) {
                    return Ok(fail(
                        file.clone(),
                        format!(
                            "protection #{k} (vertex {}): breaking at {} keeps {lhs} at depth {depth}, \
                             chosen break keeps {} (+1), cycle weight {wc}",
                            d.vertex,
                            d.view.original(u),
                            rhs - 1
                        ),
                    ));
                }
            }
            checks += 1;
        }
    }
    Ok(pass(checks))
}

fn improved_break_feasibility(r: &mut ChaCha8Rng, trial: usize) -> Result<Outcome, HarnessError> {
    let file = break_prone_instance(r, trial)?;
    let report = run_algorithm(&file.instance, AlgorithmKind::AlgC)?;
    if let Some((k, d)) = report
        .decisions
        .iter()
        .enumerate()
        .find(|(_, d)| d.rule == Rule::GreedyFallback)
    {
        return Ok(fail(
            file,
            format!("protection #{k} (vertex {}): improved break found no vertex", d.vertex),
        ));
    }
    let mut checks = 0;
    for (k, d) in break_events(&report, Rule::ImprovedBreak) {
        let g = &d.view.graph;
        let decomp = validate_and_decompose(g).map_err(crate::online::AlgorithmError::from)?;
        let choice = localize(d.break_choice.as_ref().unwrap(), &d.view);
        let depth_ok = choice.d_max.depth().is_some_and(|x| x >= 1);
        if !depth_ok || !crate::online::break_keeps_threshold(g, &decomp, &choice) {
            return Ok(fail(
                file.clone(),
                format!(
                    "protection #{k} (vertex {}): d_max {:?}, threshold {} not kept",
                    d.vertex, choice.d_max, choice.threshold
                ),
            ));
        }
        checks += 1;
    }
    Ok(pass(checks))
}

fn secured_break(r: &mut ChaCha8Rng, trial: usize) -> Result<Outcome, HarnessError> {
    let file = break_prone_instance(r, trial)?;
    let n = file.instance.n();
    let report = run_algorithm(&file.instance, AlgorithmKind::AlgC)?;
    let mut checks = 0;
    for (k, d) in break_events(&report, Rule::ImprovedBreak) {
        let g = &d.view.graph;
        let decomp = validate_and_decompose(g).map_err(crate::online::AlgorithmError::from)?;
        let choice = localize(d.break_choice.as_ref().unwrap(), &d.view);
        let hat_cycle = cycle_of(&decomp, &choice);
        let hat = break_profile(g, &decomp, hat_cycle, choice.vertex);
        let w_hat = vertex_weight(g, choice.vertex).unwrap();
        for c in decomp.root_cycles() {
            // only root cycles of weight at least sqrt(n)
            if sq(cycle_weight(g, &decomp, c)) < n as u128 {
                continue;
            }
            for u in decomp.non_root_members(c) {
                let p = break_profile(g, &decomp, c, u);
                for depth in 1..=g.n() {
                    let (lhs, rhs) = (p.count(depth), hat.count(depth) + w_hat);
                    // lhs / rhs <= 2 sqrt(n)
                    if sq(lhs) > 4 * (n as u128) * sq(rhs) {
                        return Ok(fail(
                            file.clone(),
                            format!(
                                "protection #{k} (vertex {}): breaking at {} keeps {lhs} at depth {depth}, \
                                 chosen break keeps {} + w {w_hat}",
                                d.vertex,
                                d.view.original(u),
                                rhs - w_hat
                            ),
                        ));
                    }
                }
                checks += 1;
            }
        }
    }
    Ok(pass(checks))
}

fn cooldown_quality(r: &mut ChaCha8Rng, trial: usize) -> Result<Outcome, HarnessError> {
    let file = break_prone_instance(r, trial)?;
    let inst = &file.instance;
    let n = inst.n() as u128;
    let report = run_algorithm(inst, AlgorithmKind::AlgC)?;
    let rounds: Vec<usize> = report.trace.entries.iter().map(|e| e.round).collect();
    let mut checks = 0;
    for (k, d) in break_events(&report, Rule::ImprovedBreak) {
        let choice = d.break_choice.as_ref().unwrap();
        let i = rounds[k];
        let Some(next) = (i + 1..=inst.sequence.len()).find(|&j| inst.firefighters(j) > 0) else {
            continue;
        };
        if next - i > choice.cooldown {
            continue;
        }
        // first protection of that round, if the game was still running
        let Some(k2) = (k + 1..rounds.len()).find(|&j| rounds[j] == next) else {
            continue;
        };
        let u2 = report.decisions[k2].vertex;
        let later = &report.decisions[k2].view;
        let g = &d.view.graph;
        let local = |v: usize| d.view.local(v).expect("available later means available earlier");
        let pair_weight = |a: usize, b: usize| {
            let s = VertexSet::from_vertices(g.n(), [a, b]);
            covered_set(g, &VertexSet::new(g.n()), &s).expect("root excluded").len()
        };
        let ours = pair_weight(local(choice.vertex), local(u2));
        let root = g.root();
        let mut worst = (0, 0, 0);
        for x in (0..g.n()).filter(|&x| x != root) {
            for x2 in (0..later.graph.n()).filter(|&v| v != later.graph.root()) {
                let w = pair_weight(x, local(later.original(x2)));
                if w > worst.0 {
                    worst = (w, d.view.original(x), later.original(x2));
                }
            }
        }
        // worst / ours <= sqrt(n)
        if sq(worst.0) > n * sq(ours) {
            return Ok(fail(
                file.clone(),
                format!(
                    "break at {} in round {i}, greedy {u2} in round {next}: w = {ours}, \
                     but pair ({}, {}) has w = {}",
                    choice.vertex, worst.1, worst.2, worst.0
                ),
            ));
        }
        checks += 1;
    }
    Ok(pass(checks))
}

/// Protections per cycle of `decomp`.
fn per_cycle_counts(decomp: &CactusDecomposition, vertices: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut counts = vec![0; decomp.cycles().len()];
    for v in vertices {
        for &c in decomp.vertex_cycles(v) {
            counts[c] += 1;
        }
    }
    counts
}

fn check_normalized(
    file: &InstanceFile,
    decomp: &CactusDecomposition,
    label: &str,
    schedule: &ProtectionSchedule,
) -> Result<Option<Outcome>, HarnessError> {
    let inst = &file.instance;
    let before = replay(inst, schedule).map_err(crate::online::AlgorithmError::from)?.0;
    let normalized = normalize_nonredundant(inst, schedule)?;
    let after = replay(inst, &normalized).map_err(crate::online::AlgorithmError::from)?.0;
    let counts = per_cycle_counts(decomp, normalized.vertices());
    if before != after || counts.iter().any(|&c| c > 2) {
        return Ok(Some(fail(
            file.clone(),
            format!(
                "{label} schedule {:?}: profit {before} -> {after}, normalized {:?}, per-cycle {counts:?}",
                schedule.entries, normalized.entries
            ),
        )));
    }
    Ok(None)
}

fn non_redundant(r: &mut ChaCha8Rng, trial: usize, config: &SolverConfig) -> Result<Outcome, HarnessError> {
    let file = small_cactus_instance(r, trial, 12, false)?;
    let inst = &file.instance;
    let decomp = validate_and_decompose(&inst.graph).map_err(crate::online::AlgorithmError::from)?;
    let opt = solve_opt(inst, config)?;
    let mut checks = 0;
    if let Some(f) = check_normalized(&file, &decomp, "optimal", &opt.schedule)? {
        return Ok(f);
    }
    checks += 1;
    for kind in [AlgorithmKind::AlgC, AlgorithmKind::AlgE] {
        let schedule = run_algorithm(inst, kind)?.trace.schedule();
        if let Some(f) = check_normalized(&file, &decomp, kind.name(), &schedule)? {
            return Ok(f);
        }
        checks += 1;
    }
    let schedule = random_schedule(inst, r);
    if let Some(f) = check_normalized(&file, &decomp, "random", &schedule)? {
        return Ok(f);
    }
    Ok(pass(checks + 1))
}

/// A legal schedule protecting uniformly random threatened vertices.
fn random_schedule(inst: &Instance, r: &mut ChaCha8Rng) -> ProtectionSchedule {
    let mut state = crate::game::new_game(inst);
    while !state.is_finished() {
        let mut pool: Vec<usize> = state.threatened().iter().collect();
        pool.shuffle(r);
        for v in pool.into_iter().take(state.firefighters_left()) {
            state.protect(v).expect("threatened vertices are available");
        }
        state.spread();
    }
    state.trace().schedule()
}

/// Groups protections that share a cycle; the rest are singletons.
fn cycle_groups(decomp: &CactusDecomposition, protected: &[usize]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..protected.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..protected.len() {
        for j in i + 1..protected.len() {
            let shared = decomp
                .vertex_cycles(protected[i])
                .iter()
                .any(|c| decomp.vertex_cycles(protected[j]).contains(c));
            if shared {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); protected.len()];
    for i in 0..protected.len() {
        let root = find(&mut parent, i);
        groups[root].push(protected[i]);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

fn cycle_respecting(r: &mut ChaCha8Rng, trial: usize, config: &SolverConfig) -> Result<Outcome, HarnessError> {
    let file = small_cactus_instance(r, trial, 15, false)?;
    let inst = &file.instance;
    let g = &inst.graph;
    let decomp = validate_and_decompose(g).map_err(crate::online::AlgorithmError::from)?;
    let OptResult { value, schedule, .. } = solve_opt(inst, config)?;
    let protected: Vec<usize> = schedule.vertices().collect();
    let none = VertexSet::new(g.n());
    let whole = covered_set(g, &none, &VertexSet::from_vertices(g.n(), protected.iter().copied()))
        .expect("root is never protected");
    let mut union = VertexSet::new(g.n());
    let groups = cycle_groups(&decomp, &protected);
    for part in &groups {
        let covered = covered_set(g, &none, &VertexSet::from_vertices(g.n(), part.iter().copied()))
            .expect("root is never protected");
        union.union_with(&covered);
    }
    if whole != union || whole.len() != value {
        return Ok(fail(
            file.clone(),
            format!(
                "protected {protected:?}, groups {groups:?}: covered {:?}, union of groups {:?}, optimum {value}",
                whole, union
            ),
        ));
    }
    Ok(pass(1))
}

fn count_monotone(r: &mut ChaCha8Rng, trial: usize) -> Result<Outcome, HarnessError> {
    let n = r.gen_range(2..=20);
    let graph = random_cactus(n, r.gen_range(0.0..=1.0), r.gen_range(3..=n.max(3)), r.gen())?;
    let file = InstanceFile::named(format!("cactus-{trial}"), Instance::new(graph, vec![]));
    let g = &file.instance.graph;
    let root = g.root();
    let mut removed = VertexSet::new(n);
    for v in (0..n).filter(|&v| v != root) {
        if r.gen_bool(0.2) {
            removed.insert(v);
        }
    }
    let mut prev = count_safe(g, &removed, 0);
    for d in 1..=n + 1 {
        let cur = count_safe(g, &removed, d);
        if cur > prev {
            return Ok(fail(file, format!("count rises from {prev} to {cur} at depth {d}, removed {removed:?}")));
        }
        prev = cur;
    }
    let mut s = VertexSet::new(n);
    for v in (0..n).filter(|&v| v != root) {
        if r.gen_bool(0.3) {
            s.insert(v);
        }
    }
    let together = covered_set(g, &VertexSet::new(n), &s).expect("root excluded");
    let mut separate = VertexSet::new(n);
    for v in s.iter() {
        separate.union_with(&covered_by_vertex(g, v).expect("root excluded"));
    }
    if !separate.is_subset(&together) {
        return Ok(fail(file, format!("covered set of {s:?} misses part of its members' covered sets")));
    }
    Ok(pass(2))
}

fn opt_dominance(r: &mut ChaCha8Rng, trial: usize, config: &SolverConfig) -> Result<Outcome, HarnessError> {
    let file = small_cactus_instance(r, trial, 14, false)?;
    let inst = &file.instance;
    let class = validate_and_decompose(&inst.graph)
        .map_err(crate::online::AlgorithmError::from)?
        .class();
    let opt = solve_opt(inst, config)?;
    let replayed = replay(inst, &opt.schedule).map_err(crate::online::AlgorithmError::from)?.0;
    if replayed != opt.value {
        return Ok(fail(file, format!("optimum {} replays to {replayed}", opt.value)));
    }
    let mut checks = 1;
    for kind in AlgorithmKind::ALL.into_iter().filter(|k| k.accepts(class)) {
        let profit = run_algorithm(inst, kind)?.profit;
        if profit > opt.value {
            return Ok(fail(file, format!("{kind} saves {profit}, optimum {}", opt.value)));
        }
        checks += 1;
    }
    Ok(pass(checks))
}

fn alge_competitive(r: &mut ChaCha8Rng, trial: usize, config: &SolverConfig) -> Result<Outcome, HarnessError> {
    let file = small_cactus_instance(r, trial, 14, true)?;
    let inst = &file.instance;
    let alg = run_algorithm(inst, AlgorithmKind::AlgE)?.profit;
    let opt = solve_opt(inst, config)?.value;
    let ratio = Ratio::new(opt, alg);
    if !(opt == 0 || Ratio::new(3, 1).cmp_exact(&ratio).is_ge()) {
        return Ok(fail(file, format!("ALG_E saves {alg}, optimum {opt}")));
    }
    Ok(Outcome::Pass {
        checks: 1,
        ratio: Some(ratio),
    })
}

fn algc_cycle_budget(r: &mut ChaCha8Rng, trial: usize) -> Result<Outcome, HarnessError> {
    let file = cycle_heavy_instance(r, trial)?;
    let inst = &file.instance;
    let decomp = validate_and_decompose(&inst.graph).map_err(crate::online::AlgorithmError::from)?;
    let report = run_algorithm(inst, AlgorithmKind::AlgC)?;
    let counts = per_cycle_counts(&decomp, report.trace.protected_vertices());
    if let Some(c) = counts.iter().position(|&x| x > 3) {
        return Ok(fail(
            file,
            format!("cycle {:?} carries {} protections", decomp.cycle(c), counts[c]),
        ));
    }
    Ok(pass(counts.len()))
}
