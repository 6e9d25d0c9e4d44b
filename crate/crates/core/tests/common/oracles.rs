//! Brute-force references for the oracle tests. Nothing here calls the
//! library's own traversal, game or search code; only graph construction,
//! generators and the functions under test are used by the callers.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use firefight::instances::{random_cactus, random_sequence, rng};
use firefight::measures::covered_set;
use firefight::opt::{solve_opt, SolverConfig};
use firefight::{replay, Graph, Instance, ProtectionSchedule, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Vertices every simple root path of which meets `s`, found by enumerating
/// all simple paths out of the root that avoid `s`.
pub fn covered_by_paths(g: &Graph, s: &[bool]) -> Vec<bool> {
    fn extend(g: &Graph, s: &[bool], v: usize, on_path: &mut Vec<bool>, reached: &mut Vec<bool>) {
        reached[v] = true;
        for &w in g.neighbors(v) {
            if !on_path[w] && !s[w] {
                on_path[w] = true;
                extend(g, s, w, on_path, reached);
                on_path[w] = false;
            }
        }
    }
    let n = g.n();
    let mut on_path = vec![false; n];
    let mut reached = vec![false; n];
    on_path[g.root()] = true;
    extend(g, s, g.root(), &mut on_path, &mut reached);
    reached.into_iter().map(|r| !r).collect()
}

/// Samples cacti with at most 9 vertices and random protection sets, and
/// counts disagreements between `covered_set` and path enumeration.
pub fn covered_set_mismatches(samples: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    let mut mismatches = 0;
    for _ in 0..samples {
        let n = r.gen_range(2..=9);
        let g = random_cactus(n, r.gen_range(0.0..=1.0), r.gen_range(3..=9), r.gen()).unwrap();
        let s: Vec<bool> = (0..n).map(|v| v != g.root() && r.gen_bool(0.3)).collect();
        let set = VertexSet::from_vertices(n, (0..n).filter(|&v| s[v]));
        let fast = covered_set(&g, &VertexSet::new(n), &set).unwrap();
        let slow = covered_by_paths(&g, &s);
        if (0..n).any(|v| fast.contains(v) != slow[v]) {
            mismatches += 1;
        }
    }
    mismatches
}

/// A game played only on contracted views: the fire is a single source
/// vertex, protecting a vertex deletes it together with everything it cuts
/// off, and spreading merges the source's neighbors into the source.
pub struct ContractedGame {
    /// Adjacency of the live vertices; `SOURCE` stands for the fire.
    adj: BTreeMap<usize, BTreeSet<usize>>,
    burned: usize,
    n: usize,
}

pub const SOURCE: usize = usize::MAX;

impl ContractedGame {
    pub fn new(g: &Graph) -> Self {
        let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let name = |v: usize| if v == g.root() { SOURCE } else { v };
        for v in 0..g.n() {
            let entry = adj.entry(name(v)).or_default();
            entry.extend(g.neighbors(v).iter().map(|&w| name(w)));
        }
        ContractedGame {
            adj,
            burned: 1,
            n: g.n(),
        }
    }

    /// Live vertices other than the source, in ascending order.
    pub fn live(&self) -> Vec<usize> {
        self.adj.keys().copied().filter(|&v| v != SOURCE).collect()
    }

    fn delete(&mut self, v: usize) {
        if let Some(ns) = self.adj.remove(&v) {
            for w in ns {
                if let Some(list) = self.adj.get_mut(&w) {
                    list.remove(&v);
                }
            }
        }
    }

    pub fn protect(&mut self, v: usize) {
        self.delete(v);
        let mut seen = BTreeSet::from([SOURCE]);
        let mut stack = vec![SOURCE];
        while let Some(x) = stack.pop() {
            for &w in &self.adj[&x] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        for x in self.live() {
            if !seen.contains(&x) {
                self.delete(x);
            }
        }
    }

    pub fn spread(&mut self) {
        let front: Vec<usize> = self.adj[&SOURCE].iter().copied().collect();
        for x in front {
            let ns = self.adj.remove(&x).unwrap_or_default();
            self.burned += 1;
            for w in ns {
                if let Some(list) = self.adj.get_mut(&w) {
                    list.remove(&x);
                }
                if w != SOURCE && w != x && self.adj.contains_key(&w) {
                    self.adj.get_mut(&SOURCE).unwrap().insert(w);
                    self.adj.get_mut(&w).unwrap().insert(SOURCE);
                }
            }
        }
    }

    pub fn finished(&self) -> bool {
        self.adj[&SOURCE].is_empty()
    }

    pub fn profit(&self) -> usize {
        self.n - self.burned
    }
}

/// Plays random games twice, on contracted views and through the status
/// based engine, and counts games whose threatened sets or profits differ.
pub fn reduced_view_mismatches(games: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    let mut mismatches = 0;
    for _ in 0..games {
        let n = r.gen_range(2..=16);
        let g = random_cactus(n, r.gen_range(0.0..=1.0), r.gen_range(3..=8), r.gen()).unwrap();
        let len = r.gen_range(1..=6);
        let seq = random_sequence(len, n, false, r.gen());
        let inst = Instance::new(g.clone(), seq);
        let mut view = ContractedGame::new(&g);
        let mut state = firefight::new_game(&inst);
        let mut entries = Vec::new();
        let mut agree = true;
        let mut round = 1;
        while !view.finished() {
            let threatened: Vec<usize> = state.threatened().iter().collect();
            if threatened != view.live() {
                agree = false;
                break;
            }
            for _ in 0..inst.firefighters(round) {
                let Some(&v) = view.live().choose(&mut r) else {
                    break;
                };
                view.protect(v);
                state.protect(v).unwrap();
                entries.push((round, v));
            }
            view.spread();
            state.spread();
            round += 1;
        }
        let replayed = replay(&inst, &ProtectionSchedule::new(entries)).map(|(p, _)| p);
        if !agree || !state.is_finished() || replayed != Ok(view.profit()) {
            mismatches += 1;
        }
    }
    mismatches
}

/// Optimum by exhaustive play: every round tries every set of at most `f`
/// unburned, unprotected vertices, saved ones included.
pub fn brute_force_opt(inst: &Instance) -> usize {
    #[derive(Clone, Copy, PartialEq)]
    enum S {
        Free,
        Guarded,
        Fire,
    }
    fn finished(g: &Graph, st: &[S]) -> bool {
        (0..g.n()).all(|v| st[v] != S::Fire || g.neighbors(v).iter().all(|&w| st[w] != S::Free))
    }
    fn spread(g: &Graph, st: &mut [S]) {
        let catch: Vec<usize> = (0..g.n())
            .filter(|&v| st[v] == S::Free && g.neighbors(v).iter().any(|&w| st[w] == S::Fire))
            .collect();
        for v in catch {
            st[v] = S::Fire;
        }
    }
    fn play(inst: &Instance, st: &mut Vec<S>, round: usize) -> usize {
        let g = &inst.graph;
        if finished(g, st) {
            return st.iter().filter(|&&s| s != S::Fire).count();
        }
        let free: Vec<usize> = (0..g.n()).filter(|&v| st[v] == S::Free).collect();
        let f = inst.firefighters(round).min(free.len());
        let mut best = 0;
        choose(inst, st, round, &free, 0, f, &mut best);
        best
    }
    fn choose(inst: &Instance, st: &mut Vec<S>, round: usize, free: &[usize], from: usize, left: usize, best: &mut usize) {
        let mut next = st.clone();
        spread(&inst.graph, &mut next);
        *best = (*best).max(play(inst, &mut next, round + 1));
        if left == 0 {
            return;
        }
        for i in from..free.len() {
            st[free[i]] = S::Guarded;
            choose(inst, st, round, free, i + 1, left - 1, best);
            st[free[i]] = S::Free;
        }
    }
    let g = &inst.graph;
    let mut st = vec![S::Free; g.n()];
    st[g.root()] = S::Fire;
    play(inst, &mut st, 1)
}

/// Counts instances (n <= 10) on which the search with and without its memo
/// table disagree.
pub fn memo_mismatches(instances: usize, seed: u64) -> usize {
    let mut r = rng(seed);
    let memo = SolverConfig::default();
    let plain = SolverConfig::default().with_memoize(false);
    let mut mismatches = 0;
    for _ in 0..instances {
        let n = r.gen_range(3..=10);
        let g = random_cactus(n, r.gen_range(0.0..=1.0), r.gen_range(3..=10), r.gen()).unwrap();
        let len = r.gen_range(1..=5);
        let inst = Instance::new(g, random_sequence(len, n / 2 + 1, false, r.gen()));
        let a = solve_opt(&inst, &memo).unwrap();
        let b = solve_opt(&inst, &plain).unwrap();
        let replay_a = replay(&inst, &a.schedule).unwrap().0;
        let replay_b = replay(&inst, &b.schedule).unwrap().0;
        if a.value != b.value || replay_a != a.value || replay_b != b.value {
            mismatches += 1;
        }
    }
    mismatches
}

/// All simple cycles of `g` as sorted edge lists.
pub fn simple_cycles(g: &Graph) -> BTreeSet<Vec<(usize, usize)>> {
    fn walk(
        g: &Graph,
        start: usize,
        v: usize,
        path: &mut Vec<usize>,
        on: &mut [bool],
        out: &mut BTreeSet<Vec<(usize, usize)>>,
    ) {
        for &w in g.neighbors(v) {
            if w == start && path.len() >= 3 {
                let mut edges: Vec<(usize, usize)> = path
                    .windows(2)
                    .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
                    .collect();
                edges.push((v.min(start), v.max(start)));
                edges.sort_unstable();
                out.insert(edges);
            } else if w > start && !on[w] {
                on[w] = true;
                path.push(w);
                walk(g, start, w, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut on = vec![false; g.n()];
    for s in 0..g.n() {
        on[s] = true;
        walk(g, s, s, &mut vec![s], &mut on, &mut out);
        on[s] = false;
    }
    out
}

/// Cactus test by definition: no edge lies on two distinct simple cycles.
pub fn is_cactus_by_enumeration(g: &Graph) -> bool {
    let mut seen = BTreeSet::new();
    for cycle in simple_cycles(g) {
        for e in cycle {
            if !seen.insert(e) {
                return false;
            }
        }
    }
    true
}

/// Random connected graph: a random spanning tree plus `extra` random edges.
pub fn random_connected_graph(n: usize, extra: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut edges = BTreeSet::new();
    for v in 1..n {
        let u = r.gen_range(0..v);
        edges.insert((u, v));
    }
    for _ in 0..extra {
        let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::new(n, edges, 0).unwrap()
}
