//! Exact offline optimum by exhaustive search.
//!
//! States are `(burned, protected, round)` with vertex sets packed into
//! `u128` masks. In every round the search places exactly
//! `min(f_i, threatened)` firefighters: an extra protection never lets the
//! fire reach more vertices, so smaller placements are dominated. Once no
//! firefighters remain in the sequence, the outcome is fixed and computed in
//! closed form. Pruning only skips children whose upper bound cannot beat
//! the best sibling found so far, which keeps memoized values exact.

use std::collections::HashMap;

use thiserror::Error;

use crate::cactus::{validate_and_decompose, CactusError};
use crate::game::{replay, GameError, Instance, ProtectionSchedule, FIREFIGHTERS_CARRY_OVER};
use crate::measures::distances_from;
use crate::graph::VertexSet;

const _: () = assert!(
    !FIREFIGHTERS_CARRY_OVER,
    "the search assumes unused firefighters are forfeited"
);

/// Largest instance the bitmask representation supports.
pub const MASK_BITS: usize = 128;
pub const DEFAULT_MAX_VERTICES: usize = 22;
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;
pub const NODE_BUDGET_ENV: &str = "FIREFIGHT_NODE_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OptError {
    #[error("graph has {n} vertices, solver cap is {cap}")]
    GraphTooLarge { n: usize, cap: usize },
    #[error("search exceeded the budget of {budget} nodes")]
    SearchBudgetExceeded { budget: u64 },
    #[error(transparent)]
    NotCactus(#[from] CactusError),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub max_vertices: usize,
    pub node_budget: u64,
    /// Reuse values of repeated states. Turning it off gives a plain search
    /// that serves as a cross-check.
    pub memoize: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_vertices: DEFAULT_MAX_VERTICES,
            node_budget: DEFAULT_NODE_BUDGET,
            memoize: true,
        }
    }
}

impl SolverConfig {
    /// Defaults, with the node budget taken from `FIREFIGHT_NODE_BUDGET` when
    /// it holds a positive integer.
    pub fn from_env() -> Self {
        let mut config = SolverConfig::default();
        if let Some(budget) = std::env::var(NODE_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&b| b > 0)
        {
            config.node_budget = budget;
        }
        config
    }

    pub fn with_max_vertices(mut self, cap: usize) -> Self {
        self.max_vertices = cap;
        self
    }

    pub fn with_memoize(mut self, memoize: bool) -> Self {
        self.memoize = memoize;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptResult {
    pub value: usize,
    pub schedule: ProtectionSchedule,
    pub nodes_explored: u64,
}

type Key = (u128, u128, usize);

struct Search<'a> {
    n: usize,
    adj: Vec<u128>,
    sequence: &'a [usize],
    /// `remaining[i]` = firefighters released from round `i + 1` on.
    remaining: Vec<usize>,
    memo: HashMap<Key, (usize, u128)>,
    memoize: bool,
    nodes: u64,
    budget: u64,
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}

fn popcount(m: u128) -> usize {
    m.count_ones() as usize
}

impl<'a> Search<'a> {
    fn firefighters(&self, round: usize) -> usize {
        self.sequence.get(round - 1).copied().unwrap_or(0)
    }

    fn remaining_from(&self, round: usize) -> usize {
        self.remaining[(round - 1).min(self.sequence.len())]
    }

    fn neighbors(&self, set: u128) -> u128 {
        bits(set).fold(0, |acc, v| acc | self.adj[v])
    }

    fn frontier(&self, burned: u128, protected: u128) -> u128 {
        self.neighbors(burned) & !burned & !protected
    }

    /// Unburned vertices joined to the fire by a protection-free path.
    fn threatened(&self, burned: u128, protected: u128) -> u128 {
        let mut reach = burned;
        let mut layer = burned;
        while layer != 0 {
            layer = self.neighbors(layer) & !reach & !protected;
            reach |= layer;
        }
        reach & !burned
    }

    /// Upper bound on the final saved count from a state at the start of
    /// `round`: the unprotected part of the frontier burns next.
    fn bound(&self, burned: u128, protected: u128, round: usize) -> usize {
        let frontier = popcount(self.frontier(burned, protected));
        self.n - popcount(burned) - frontier.saturating_sub(self.firefighters(round))
    }

    fn key(&self, burned: u128, protected: u128, round: usize) -> Key {
        (burned, protected, round.min(self.sequence.len() + 1))
    }

    /// Final saved count if nobody places another firefighter, or `None`
    /// when the state still has a decision to make.
    fn settled(&self, burned: u128, protected: u128, round: usize) -> Option<usize> {
        let threat = self.threatened(burned, protected);
        if threat == 0 || self.remaining_from(round) == 0 {
            Some(self.n - popcount(burned | threat))
        } else {
            None
        }
    }

    fn value(&mut self, burned: u128, protected: u128, round: usize) -> Result<usize, OptError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(OptError::SearchBudgetExceeded {
                budget: self.budget,
            });
        }
        if let Some(v) = self.settled(burned, protected, round) {
            return Ok(v);
        }
        let key = self.key(burned, protected, round);
        if self.memoize {
            if let Some(&(v, _)) = self.memo.get(&key) {
                return Ok(v);
            }
        }

        let threat = self.threatened(burned, protected);
        let frontier = self.frontier(burned, protected);
        let candidates = self.ordered_candidates(burned, threat, protected);
        let k = self.firefighters(round).min(candidates.len());
        let ceiling = self.bound(burned, protected, round);

        let mut best: Option<(usize, u128)> = None;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let chosen = idx.iter().fold(0u128, |m, &i| m | 1 << candidates[i]);
            let p2 = protected | chosen;
            let b2 = burned | (frontier & !chosen);
            let child_bound = self.bound(b2, p2, round + 1);
            if best.map_or(true, |(v, _)| child_bound > v) {
                let v = self.value(b2, p2, round + 1)?;
                if best.map_or(true, |(bv, _)| v > bv) {
                    best = Some((v, chosen));
                }
            }
            if best.map_or(false, |(v, _)| v >= ceiling) || !next_combination(&mut idx, candidates.len()) {
                break;
            }
        }
        let (v, chosen) = best.expect("the first combination is always explored");
        self.memo.insert(key, (v, chosen));
        Ok(v)
    }

    /// Threatened vertices, most valuable single protection first.
    fn ordered_candidates(&self, burned: u128, threat: u128, protected: u128) -> Vec<usize> {
        let mut scored: Vec<(usize, usize)> = bits(threat)
            .map(|v| {
                let still = self.threatened(burned, protected | 1 << v);
                (v, popcount(threat & !still))
            })
            .collect();
        scored.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        scored.into_iter().map(|(v, _)| v).collect()
    }

    fn reconstruct(&self, mut burned: u128, mut protected: u128) -> ProtectionSchedule {
        let mut entries = Vec::new();
        let mut round = 1;
        while self.settled(burned, protected, round).is_none() {
            let &(_, chosen) = self
                .memo
                .get(&self.key(burned, protected, round))
                .expect("every open state on the optimal path was solved");
            entries.extend(bits(chosen).map(|v| (round, v)));
            let frontier = self.frontier(burned, protected);
            protected |= chosen;
            burned |= frontier & !chosen;
            round += 1;
        }
        ProtectionSchedule::new(entries)
    }
}

/// Advances `idx` to the next `k`-combination of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Maximum number of vertices any offline schedule saves on `instance`.
pub fn solve_opt(instance: &Instance, config: &SolverConfig) -> Result<OptResult, OptError> {
    let n = instance.n();
    let cap = config.max_vertices.min(MASK_BITS);
    if n > cap {
        return Err(OptError::GraphTooLarge { n, cap });
    }
    let g = &instance.graph;
    let adj = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u128, |m, &w| m | 1 << w))
        .collect();
    let mut remaining = vec![0; instance.sequence.len() + 1];
    for i in (0..instance.sequence.len()).rev() {
        remaining[i] = remaining[i + 1] + instance.sequence[i];
    }
    let mut search = Search {
        n,
        adj,
        sequence: &instance.sequence,
        remaining,
        memo: HashMap::new(),
        memoize: config.memoize,
        nodes: 0,
        budget: config.node_budget,
    };
    let burned = 1u128 << g.root();
    let value = search.value(burned, 0, 1)?;
    let schedule = search.reconstruct(burned, 0);
    Ok(OptResult {
        value,
        schedule,
        nodes_explored: search.nodes,
    })
}

/// Cheap upper bound on the optimum: nothing is saved without firefighters,
/// and the neighbors of the fire source left unprotected in round 1 burn.
pub fn opt_upper_bound(instance: &Instance) -> usize {
    if instance.total_firefighters() == 0 {
        return 0;
    }
    let deg = instance.graph.degree(instance.graph.root());
    instance.n() - 1 - deg.saturating_sub(instance.firefighters(1))
}

/// Drops protections until every cycle holds at most two.
///
/// On a cycle ordered from its vertex closest to the fire source, the fire
/// can only enter the arc between two protected vertices through one of
/// them, so a protection strictly inside that arc changes nothing.
pub fn normalize_nonredundant(
    instance: &Instance,
    schedule: &ProtectionSchedule,
) -> Result<ProtectionSchedule, OptError> {
    replay(instance, schedule)?;
    let g = &instance.graph;
    let decomp = validate_and_decompose(g)?;
    let dist = distances_from(g, &VertexSet::new(g.n()), g.root());
    let mut entries = schedule.entries.clone();
    for cycle in decomp.cycles() {
        let start = (0..cycle.len())
            .min_by_key(|&i| (dist[cycle[i]], i))
            .expect("cycles are non-empty");
        let position = |v: usize| {
            cycle
                .iter()
                .position(|&u| u == v)
                .map(|i| (i + cycle.len() - start) % cycle.len())
        };
        loop {
            let mut on_cycle: Vec<(usize, usize)> = entries
                .iter()
                .enumerate()
                .filter_map(|(e, &(_, v))| position(v).map(|p| (p, e)))
                .collect();
            if on_cycle.len() <= 2 {
                break;
            }
            on_cycle.sort_unstable();
            entries.remove(on_cycle[1].1);
        }
    }
    Ok(ProtectionSchedule::new(entries))
}
