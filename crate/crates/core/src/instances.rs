//! Fixed constructions and random generators.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::game::{Instance, ProtectionSchedule};
use crate::graph::Graph;
use crate::online::{run_algorithm, AlgorithmError, AlgorithmKind, OnlinePlayer};
use crate::opt::{solve_opt, OptError, SolverConfig, MASK_BITS};
use crate::ratio::Ratio;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Algorithm(#[from] AlgorithmError),
    #[error(transparent)]
    Opt(#[from] OptError),
}

fn bad(msg: impl Into<String>) -> InstanceError {
    InstanceError::BadParams(msg.into())
}

/// Seeded generator used by every randomized routine.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A cycle on `alpha + 1` vertices and a path on `beta + 1` vertices sharing
/// the fire source 0. Cycle vertices are `1..=alpha`, path vertices follow
/// outward from the root.
pub fn make_tadpole(alpha: usize, beta: usize) -> Result<Graph, InstanceError> {
    if alpha < 2 || beta < 1 {
        return Err(bad(format!("tadpole needs alpha >= 2 and beta >= 1, got ({alpha}, {beta})")));
    }
    let n = alpha + beta + 1;
    let mut edges: Vec<(usize, usize)> = (0..alpha).map(|i| (i, i + 1)).collect();
    edges.push((alpha, 0));
    edges.push((0, alpha + 1));
    edges.extend((alpha + 1..n - 1).map(|i| (i, i + 1)));
    Ok(Graph::new(n, edges, 0).expect("tadpole is a valid graph"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryCase {
    /// The first protection was on the cycle; no more firefighters come.
    StopAfterCycle,
    /// The first protection was elsewhere; one more firefighter comes.
    OneMore,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdversaryReport {
    pub kind: AlgorithmKind,
    pub beta: usize,
    pub alpha: usize,
    pub n: usize,
    pub case: AdversaryCase,
    pub sequence: Vec<usize>,
    pub alg_profit: usize,
    pub opt_profit: usize,
    pub ratio: Ratio,
    /// Guaranteed lower bound `min(beta, (alpha - 1) / (beta + 1))` as a
    /// fraction.
    pub bound_num: usize,
    pub bound_den: usize,
    pub bound_met: bool,
}

/// Plays the adaptive adversary on the `(beta^2 + 1, beta)` tadpole.
///
/// The adversary releases one firefighter, watches where it goes, and then
/// either stops (cycle vertex) or releases exactly one more.
pub fn tadpole_adversary_run(kind: AlgorithmKind, beta: usize) -> Result<AdversaryReport, InstanceError> {
    if beta < 2 {
        return Err(bad(format!("adversary needs beta >= 2, got {beta}")));
    }
    let alpha = beta * beta + 1;
    let graph = make_tadpole(alpha, beta)?;
    let n = graph.n();
    let probe = Instance::new(graph.clone(), vec![1]);
    let class = crate::cactus::validate_and_decompose(&graph)
        .expect("tadpole is a cactus")
        .class();
    if !kind.accepts(class) {
        return Err(AlgorithmError::WrongGraphClass { kind, class }.into());
    }
    let view = crate::game::new_game(&probe).reduced_view();
    let first = OnlinePlayer::new(kind, n).decide(&view, 1)?;
    let on_cycle = first.first().map_or(true, |d| (1..=alpha).contains(&d.vertex));
    let (case, sequence) = if on_cycle {
        (AdversaryCase::StopAfterCycle, vec![1])
    } else {
        (AdversaryCase::OneMore, vec![1, 1])
    };
    let instance = Instance::new(graph, sequence.clone());
    let alg_profit = run_algorithm(&instance, kind)?.profit;
    let config = SolverConfig::from_env().with_max_vertices(MASK_BITS);
    let opt_profit = solve_opt(&instance, &config)?.value;
    let ratio = Ratio::new(opt_profit, alg_profit);
    // min(beta, beta^2 / (beta + 1)) is always the second term.
    let (bound_num, bound_den) = (alpha - 1, beta + 1);
    Ok(AdversaryReport {
        kind,
        beta,
        alpha,
        n,
        case,
        sequence,
        alg_profit,
        opt_profit,
        ratio,
        bound_num,
        bound_den,
        bound_met: ratio.at_least(bound_num, bound_den),
    })
}

/// Vertex ids of the even-sequence tight instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TightLayout {
    pub beta: usize,
}

impl TightLayout {
    pub fn x(&self, i: usize) -> usize {
        debug_assert!((1..=7).contains(&i));
        i
    }

    pub fn y(&self, i: usize) -> usize {
        debug_assert!((1..=7).contains(&i));
        7 + i
    }

    /// First id of the `j`-th pendant block (0: x1, 1: x2, 2: y1, 3: y2).
    fn pendants(&self, j: usize) -> std::ops::Range<usize> {
        let start = 15 + j * self.beta;
        start..start + self.beta
    }

    pub fn path_len(&self) -> usize {
        self.beta + 6
    }

    pub fn a(&self, i: usize) -> usize {
        debug_assert!((1..=self.path_len()).contains(&i));
        15 + 4 * self.beta + i - 1
    }

    pub fn b(&self, i: usize) -> usize {
        debug_assert!((1..=self.path_len()).contains(&i));
        15 + 4 * self.beta + self.path_len() + i - 1
    }

    pub fn n(&self) -> usize {
        6 * self.beta + 27
    }
}

/// Two 8-cycles through the fire source, `beta` pendants on each of the first
/// two vertices of either cycle, two paths of `beta + 6` vertices, and the
/// sequence `(2, 0, 0, 0, 4)`.
pub fn make_alge_tight(beta: usize) -> Result<Instance, InstanceError> {
    if beta < 1 {
        return Err(bad("tight instance needs beta >= 1"));
    }
    let l = TightLayout { beta };
    let mut edges = Vec::new();
    for side in [TightLayout::x as fn(&TightLayout, usize) -> usize, TightLayout::y] {
        edges.push((0, side(&l, 1)));
        for i in 1..7 {
            edges.push((side(&l, i), side(&l, i + 1)));
        }
        edges.push((side(&l, 7), 0));
    }
    for (j, owner) in [l.x(1), l.x(2), l.y(1), l.y(2)].into_iter().enumerate() {
        edges.extend(l.pendants(j).map(|p| (owner, p)));
    }
    for path in [TightLayout::a as fn(&TightLayout, usize) -> usize, TightLayout::b] {
        edges.push((0, path(&l, 1)));
        for i in 1..l.path_len() {
            edges.push((path(&l, i), path(&l, i + 1)));
        }
    }
    let graph = Graph::new(l.n(), edges, 0).expect("tight instance is a valid graph");
    Ok(Instance::new(graph, vec![2, 0, 0, 0, 4]))
}

/// A schedule on the tight instance saving `6 beta + 10`: both cycle
/// neighbors `x1, y1` in round 1, then `a5, b5, x3, y3` in round 5.
pub fn alge_tight_witness(beta: usize) -> ProtectionSchedule {
    let l = TightLayout { beta };
    ProtectionSchedule::new(vec![
        (1, l.x(1)),
        (1, l.y(1)),
        (5, l.a(5)),
        (5, l.b(5)),
        (5, l.x(3)),
        (5, l.y(3)),
    ])
}

/// Relabels every vertex except the root 0 with a random permutation.
fn shuffle_labels(n: usize, edges: &mut [(usize, usize)], rng: &mut ChaCha8Rng) {
    let mut perm: Vec<usize> = (1..n).collect();
    perm.shuffle(rng);
    let map = |v: usize| if v == 0 { 0 } else { perm[v - 1] };
    for e in edges.iter_mut() {
        *e = (map(e.0), map(e.1));
    }
}

/// Random tree on `n` vertices rooted at 0.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph, InstanceError> {
    random_cactus(n, 0.0, 3, seed)
}

/// Random connected cactus rooted at 0. The graph grows from the root; each
/// step picks an existing vertex and, with probability `cycle_fraction`,
/// hangs a fresh cycle of 3 to `max_cycle_len` vertices on it, otherwise a
/// pendant vertex.
pub fn random_cactus(n: usize, cycle_fraction: f64, max_cycle_len: usize, seed: u64) -> Result<Graph, InstanceError> {
    if n < 1 {
        return Err(bad("cactus needs at least one vertex"));
    }
    if !(0.0..=1.0).contains(&cycle_fraction) {
        return Err(bad(format!("cycle fraction {cycle_fraction} outside [0, 1]")));
    }
    if cycle_fraction > 0.0 && max_cycle_len < 3 {
        return Err(bad("cycles need length at least 3"));
    }
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    let mut count = 1;
    while count < n {
        let anchor = rng.gen_range(0..count);
        let room = n - count;
        if room >= 2 && rng.gen_bool(cycle_fraction) {
            let len = rng.gen_range(3..=max_cycle_len.min(room + 1));
            hang_cycle(&mut edges, anchor, count, len);
            count += len - 1;
        } else {
            edges.push((anchor, count));
            count += 1;
        }
    }
    shuffle_labels(n, &mut edges, &mut rng);
    Ok(Graph::new(n, edges, 0).expect("generated cactus is valid"))
}

/// Cycle of `len` vertices through `anchor`, using fresh ids from `first`.
fn hang_cycle(edges: &mut Vec<(usize, usize)>, anchor: usize, first: usize, len: usize) {
    let mut prev = anchor;
    for v in first..first + len - 1 {
        edges.push((prev, v));
        prev = v;
    }
    edges.push((prev, anchor));
}

/// Random connected graph with exactly one cycle, rooted at 0. When
/// `root_on_cycle` is set the cycle passes through the root.
pub fn random_unicyclic(n: usize, max_cycle_len: usize, root_on_cycle: bool, seed: u64) -> Result<Graph, InstanceError> {
    if n < 3 || max_cycle_len < 3 {
        return Err(bad("a cycle needs at least three vertices"));
    }
    if !root_on_cycle && n < 4 {
        return Err(bad("an off-root cycle needs at least four vertices"));
    }
    let mut rng = rng(seed);
    let len = rng.gen_range(3..=max_cycle_len.min(if root_on_cycle { n } else { n - 1 }));
    let pendants = n - len;
    let cycle_at = if root_on_cycle { 0 } else { rng.gen_range(1..=pendants) };
    let mut edges = Vec::new();
    let mut count = 1;
    for step in 0..=pendants {
        if step == cycle_at {
            let anchor = if root_on_cycle { 0 } else { rng.gen_range(1..count) };
            hang_cycle(&mut edges, anchor, count, len);
            count += len - 1;
        }
        if step < pendants {
            edges.push((rng.gen_range(0..count), count));
            count += 1;
        }
    }
    shuffle_labels(n, &mut edges, &mut rng);
    Ok(Graph::new(n, edges, 0).expect("generated graph is valid"))
}

/// Random firefighter sequence of length `len` whose entries sum to at most
/// `total_budget`. Small values dominate; `even_only` restricts entries to
/// 0, 2 and 4.
pub fn random_sequence(len: usize, total_budget: usize, even_only: bool, seed: u64) -> Vec<usize> {
    let mut rng = rng(seed);
    let choices: &[(usize, u32)] = if even_only {
        &[(0, 4), (2, 5), (4, 1)]
    } else {
        &[(0, 3), (1, 4), (2, 2), (3, 1)]
    };
    let total: u32 = choices.iter().map(|c| c.1).sum();
    let mut left = total_budget;
    (0..len)
        .map(|_| {
            let mut roll = rng.gen_range(0..total);
            let mut pick = 0;
            for &(v, w) in choices {
                if roll < w {
                    pick = v;
                    break;
                }
                roll -= w;
            }
            let mut v = pick.min(left);
            if even_only {
                v -= v % 2;
            }
            left -= v;
            v
        })
        .collect()
}
