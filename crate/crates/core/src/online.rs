//! Online strategies.
//!
//! Every round decider reads only the reduced view of the current round and
//! returns the protections it makes, in order. Within a round the view is
//! recomputed after each protection: the protected vertex and everything it
//! covers are deleted before the next choice.
//!
//! Square-root thresholds are evaluated with integers: `a >= sqrt(b)` is
//! `a * a >= b`, and a count threshold of `sqrt(b)` becomes `ceil(sqrt(b))`.
//! Ties are broken toward the lowest original vertex id; equally heavy cycles
//! toward the one whose lowest non-root member is smallest.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cactus::{validate_and_decompose, CactusDecomposition, CactusError, GraphClass};
use crate::game::{GameError, GameState, Instance, Trace};
use crate::graph::{Graph, GraphView, VertexSet};
use crate::measures::{
    break_subgraph, ceil_sqrt, count_safe, covered_by_vertex, cycle_weight, distances_from,
    break_subgraph_edge, tolerance, vertex_weight, Tolerance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    GreedyTree,
    AlgA,
    AlgC,
    AlgE,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 4] = [
        AlgorithmKind::GreedyTree,
        AlgorithmKind::AlgA,
        AlgorithmKind::AlgC,
        AlgorithmKind::AlgE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::GreedyTree => "greedy-tree",
            AlgorithmKind::AlgA => "alg-a",
            AlgorithmKind::AlgC => "alg-c",
            AlgorithmKind::AlgE => "alg-e",
        }
    }

    pub fn accepts(self, class: GraphClass) -> bool {
        match self {
            AlgorithmKind::GreedyTree => class == GraphClass::Tree,
            AlgorithmKind::AlgA => class != GraphClass::Cactus,
            AlgorithmKind::AlgC | AlgorithmKind::AlgE => true,
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown algorithm '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgorithmError {
    #[error("{kind} does not accept a {} instance", class.name())]
    WrongGraphClass { kind: AlgorithmKind, class: GraphClass },
    #[error("greedy-tree needs a tree view")]
    NotATree,
    #[error(transparent)]
    NotCactus(#[from] CactusError),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BreakError {
    #[error("no root cycle reaches the weight threshold")]
    NoEligibleCycle,
    #[error("no cycle neighbor of the fire source qualifies as a break vertex")]
    NoEligibleBreakVertex,
}

/// Why a vertex was protected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Greedy,
    CyclePair,
    BreakCycle,
    ImprovedBreak,
    GreedyFallback,
}

/// Details of a cycle break, in the ids of the graph it was computed on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BreakChoice {
    pub vertex: usize,
    /// The broken cycle, starting at the fire source.
    pub cycle: Vec<usize>,
    /// Neighbor of the fire source whose edge defined `d_max`. Equal to
    /// `vertex` for plain breaks.
    pub u_star: usize,
    pub d_max: Tolerance,
    /// Count threshold, `ceil(sqrt(w))` of the heaviest root cycle.
    pub threshold: usize,
    pub heaviest_cycle_weight: usize,
    pub cooldown: usize,
}

impl BreakChoice {
    fn to_original(&self, view: &GraphView) -> BreakChoice {
        BreakChoice {
            vertex: view.original(self.vertex),
            cycle: self.cycle.iter().map(|&v| view.original(v)).collect(),
            u_star: view.original(self.u_star),
            ..self.clone()
        }
    }
}

/// One protection made by a strategy, with the view it was made in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    /// Original vertex id.
    pub vertex: usize,
    pub rule: Rule,
    /// The reduced view right before this protection.
    pub view: GraphView,
    /// Present for `BreakCycle` and `ImprovedBreak`; ids are original.
    pub break_choice: Option<BreakChoice>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooldownOrigin {
    /// Original id of the break vertex.
    pub vertex: usize,
    /// Broken cycle in original ids.
    pub cycle: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CooldownState {
    pub remaining: usize,
    pub origin: Option<CooldownOrigin>,
}

impl CooldownState {
    fn tick(&mut self) {
        self.remaining = self.remaining.saturating_sub(1);
        if self.remaining == 0 {
            self.origin = None;
        }
    }

    fn clear(&mut self) {
        self.remaining = 0;
        self.origin = None;
    }
}

/// A view with its decomposition and root cycles, heaviest first.
struct Snapshot {
    view: GraphView,
    decomp: CactusDecomposition,
    root_cycles: Vec<(usize, usize)>,
}

impl Snapshot {
    fn new(view: GraphView) -> Result<Self, CactusError> {
        let decomp = validate_and_decompose(&view.graph)?;
        let root_cycles = sorted_root_cycles(&view.graph, &decomp);
        Ok(Snapshot {
            view,
            decomp,
            root_cycles,
        })
    }

    fn graph(&self) -> &Graph {
        &self.view.graph
    }

    fn heaviest_cycle(&self) -> Option<(usize, usize)> {
        self.root_cycles.first().copied()
    }

    /// Two cycle neighbors of the fire source, lowest id first.
    fn root_neighbors_on(&self, c: usize) -> [usize; 2] {
        let cycle = self.decomp.cycle(c);
        let (a, b) = (cycle[1], cycle[cycle.len() - 1]);
        [a.min(b), a.max(b)]
    }

    /// Candidates ranked by weight, heaviest first. The pool is the fire
    /// source's neighbors plus the non-root members of `cycles`.
    fn ranked(&self, cycles: &[usize]) -> Vec<(usize, usize)> {
        let g = self.graph();
        let mut pool: Vec<usize> = g.neighbors(g.root()).to_vec();
        for &c in cycles {
            pool.extend(self.decomp.non_root_members(c));
        }
        pool.sort_unstable();
        pool.dedup();
        let mut ranked: Vec<(usize, usize)> = pool
            .into_iter()
            .map(|v| (v, vertex_weight(g, v).expect("pool excludes the root")))
            .collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        ranked
    }
}

/// Root cycles as `(index, weight)`, heaviest first.
pub fn sorted_root_cycles(g: &Graph, decomp: &CactusDecomposition) -> Vec<(usize, usize)> {
    let mut cycles: Vec<(usize, usize, usize)> = decomp
        .root_cycles()
        .map(|c| {
            let lowest = decomp.non_root_members(c).min().expect("cycle has members");
            (c, cycle_weight(g, decomp, c), lowest)
        })
        .collect();
    cycles.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    cycles.into_iter().map(|(c, w, _)| (c, w)).collect()
}

/// One local choice made by a strategy step.
struct Pick {
    vertex: usize,
    rule: Rule,
    break_choice: Option<BreakChoice>,
}

impl Pick {
    fn plain(vertex: usize, rule: Rule) -> Self {
        Pick {
            vertex,
            rule,
            break_choice: None,
        }
    }
}

/// Runs the placement loop of one round. `step` sees the current snapshot
/// and the firefighters left, and returns one or two picks in local ids of
/// that snapshot.
fn play_round(
    view: &GraphView,
    f: usize,
    mut step: impl FnMut(&Snapshot, usize) -> Result<Vec<Pick>, AlgorithmError>,
) -> Result<Vec<Decision>, AlgorithmError> {
    let mut decisions = Vec::new();
    let mut current = view.clone();
    let mut left = f;
    while left > 0 && current.graph.n() > 1 {
        let snap = Snapshot::new(current)?;
        let picks: Vec<(usize, Pick)> = step(&snap, left)?
            .into_iter()
            .map(|p| {
                let vertex = snap.view.original(p.vertex);
                let break_choice = p.break_choice.map(|b| b.to_original(&snap.view));
                (vertex, Pick { vertex, rule: p.rule, break_choice })
            })
            .collect();
        current = snap.view;
        for (vertex, pick) in picks {
            let local = current.local(vertex).expect("picked vertex is still in the view");
            decisions.push(Decision {
                vertex,
                rule: pick.rule,
                view: current.clone(),
                break_choice: pick.break_choice,
            });
            current = remove_covered(&current, local);
            left -= 1;
        }
    }
    Ok(decisions)
}

/// `view` without `v` and everything `v` covers.
fn remove_covered(view: &GraphView, v: usize) -> GraphView {
    let covered = covered_by_vertex(&view.graph, v).expect("never removes the fire source");
    view.restrict(&covered.complement())
}

/// The heaviest neighbor of the fire source.
fn greedy_pick(snap: &Snapshot) -> Pick {
    let (v, _) = snap.ranked(&[])[0];
    Pick::plain(v, Rule::Greedy)
}

/// The branch shared by every cycle-aware strategy when at least two
/// firefighters remain: take the heaviest candidate if it and the runner-up
/// together match the heaviest root cycle, otherwise close that cycle at
/// both neighbors of the fire source.
fn two_firefighter_picks(snap: &Snapshot, cycles: &[usize], heaviest: (usize, usize)) -> Vec<Pick> {
    let ranked = snap.ranked(cycles);
    let w1 = ranked[0].1;
    let w2 = ranked.get(1).map_or(0, |&(_, w)| w);
    if w1 + w2 >= heaviest.1 {
        vec![Pick::plain(ranked[0].0, Rule::Greedy)]
    } else {
        snap.root_neighbors_on(heaviest.0)
            .into_iter()
            .map(|v| Pick::plain(v, Rule::CyclePair))
            .collect()
    }
}

/// Greedy on a tree: the heaviest neighbor of the fire source, one at a time.
pub fn greedy_tree_round(view: &GraphView, f: usize) -> Result<Vec<Decision>, AlgorithmError> {
    play_round(view, f, |snap, _| {
        if snap.decomp.class() != GraphClass::Tree {
            return Err(AlgorithmError::NotATree);
        }
        Ok(vec![greedy_pick(snap)])
    })
}

/// One round of the strategy for graphs with at most one cycle.
pub fn alg_a_round(view: &GraphView, f: usize) -> Result<Vec<Decision>, AlgorithmError> {
    play_round(view, f, |snap, left| {
        if snap.decomp.class() == GraphClass::Cactus {
            return Err(AlgorithmError::WrongGraphClass {
                kind: AlgorithmKind::AlgA,
                class: GraphClass::Cactus,
            });
        }
        let Some(cycle) = snap.heaviest_cycle() else {
            return Ok(vec![greedy_pick(snap)]);
        };
        if left >= 2 {
            return Ok(two_firefighter_picks(snap, &[cycle.0], cycle));
        }
        let (v1, w1) = snap.ranked(&[cycle.0])[0];
        if w1 * w1 >= cycle.1 {
            return Ok(vec![Pick::plain(v1, Rule::Greedy)]);
        }
        Ok(vec![plain_break(snap, cycle)])
    })
}

/// Protects the cycle neighbor of the fire source with the larger tolerance
/// for `ceil(sqrt(w(C)))`.
fn plain_break(snap: &Snapshot, (c, wc): (usize, usize)) -> Pick {
    let g = snap.graph();
    let m = ceil_sqrt(wc);
    let mut best: Option<(usize, Tolerance)> = None;
    for u in snap.root_neighbors_on(c) {
        let tol = tolerance(g, &snap.decomp, u, c, m).expect("valid root cycle vertex");
        if best.map_or(true, |(_, t)| tol > t) {
            best = Some((u, tol));
        }
    }
    let (u, tol) = best.expect("a cycle has two root neighbors");
    Pick {
        vertex: u,
        rule: Rule::BreakCycle,
        break_choice: Some(BreakChoice {
            vertex: u,
            cycle: snap.decomp.cycle(c).to_vec(),
            u_star: u,
            d_max: tol,
            threshold: m,
            heaviest_cycle_weight: wc,
            cooldown: 0,
        }),
    }
}

/// Chooses a break vertex among root cycles of weight at least `sqrt(eta_sq)`.
///
/// Among the cycle neighbors `u` of the fire source whose cycle keeps at least
/// `sqrt(w(C_1))` weight without `u`, the one maximizing the edge tolerance
/// of `(u, r)` defines `d_max`. The cycle is then walked from `u` and the
/// first vertex covering something at distance `d_max` or more (in the cycle
/// view without edge `(u, r)`) is returned, with its own distance there as
/// the cool-down.
pub fn improved_break(
    g: &Graph,
    decomp: &CactusDecomposition,
    eta_sq: usize,
) -> Result<BreakChoice, BreakError> {
    let all = sorted_root_cycles(g, decomp);
    let eligible: Vec<(usize, usize)> = all.iter().copied().filter(|&(_, w)| w * w >= eta_sq).collect();
    let &(_, w1) = eligible.first().ok_or(BreakError::NoEligibleCycle)?;
    let m = ceil_sqrt(w1);
    let root = g.root();

    let mut best: Option<(Tolerance, usize, usize)> = None;
    for &(c, wc) in &eligible {
        let cycle = decomp.cycle(c);
        for u in [cycle[1], cycle[cycle.len() - 1]] {
            let wu = vertex_weight(g, u).expect("cycle neighbor is not the root");
            if wc < wu || (wc - wu) * (wc - wu) < w1 {
                continue;
            }
            let tol = crate::measures::tolerance_edge(g, decomp, (u, root), c, m)
                .expect("valid cycle edge");
            let better = match best {
                None => true,
                Some((t, bu, _)) => tol > t || (tol == t && u < bu),
            };
            if better {
                best = Some((tol, u, c));
            }
        }
    }
    let (d_max, u_star, c) = best.ok_or(BreakError::NoEligibleBreakVertex)?;
    let Tolerance::Depth(d) = d_max else {
        return Err(BreakError::NoEligibleBreakVertex);
    };

    let te = break_subgraph_edge(g, decomp, c, (u_star, root)).expect("valid cycle edge");
    let te_dist = distances_from(&te.graph, &VertexSet::new(te.graph.n()), te.graph.root());
    let dist_in_te = |v: usize| te.local(v).and_then(|l| te_dist[l]);

    let cycle = decomp.cycle(c);
    let mut walk: Vec<usize> = cycle[1..].to_vec();
    if walk[0] != u_star {
        walk.reverse();
    }
    for &u in &walk {
        let covered = covered_by_vertex(g, u).expect("cycle member is not the root");
        if covered.iter().any(|v| dist_in_te(v).map_or(true, |x| x >= d)) {
            return Ok(BreakChoice {
                vertex: u,
                cycle: std::iter::once(root).chain(walk.iter().copied()).collect(),
                u_star,
                d_max,
                threshold: m,
                heaviest_cycle_weight: w1,
                cooldown: dist_in_te(u).unwrap_or(usize::MAX),
            });
        }
    }
    Err(BreakError::NoEligibleBreakVertex)
}

/// Whether `count(T(C \ u), d_max) + w(u) >= threshold` holds for a break
/// computed on `g`.
pub fn break_keeps_threshold(g: &Graph, decomp: &CactusDecomposition, choice: &BreakChoice) -> bool {
    let Some(d) = choice.d_max.depth() else {
        return false;
    };
    let c = decomp
        .edge_cycle(choice.cycle[0], choice.cycle[1])
        .expect("break cycle belongs to the decomposition");
    let t = break_subgraph(g, decomp, c, choice.vertex).expect("break vertex lies on its cycle");
    let kept = count_safe(&t.graph, &VertexSet::new(t.graph.n()), d);
    kept + vertex_weight(g, choice.vertex).expect("not the root") >= choice.threshold
}

/// One round of the cactus strategy with cool-down. `n_original` is the
/// vertex count of the instance graph, not of the view.
pub fn alg_c_round(
    view: &GraphView,
    f: usize,
    cooldown: &mut CooldownState,
    n_original: usize,
) -> Result<Vec<Decision>, AlgorithmError> {
    cooldown.tick();
    let mut pending_origin: Option<usize> = None;
    let decisions = play_round(view, f, |snap, left| {
        let Some(c1) = snap.heaviest_cycle() else {
            return Ok(vec![greedy_pick(snap)]);
        };
        let cycles: Vec<usize> = snap.root_cycles.iter().map(|&(c, _)| c).collect();
        if left >= 2 {
            return Ok(two_firefighter_picks(snap, &cycles, c1));
        }
        let (v1, w1) = snap.ranked(&cycles)[0];
        if w1 * w1 >= c1.1 || c1.1 * c1.1 <= n_original || cooldown.remaining > 0 {
            cooldown.clear();
            return Ok(vec![Pick::plain(v1, Rule::Greedy)]);
        }
        match improved_break(snap.graph(), &snap.decomp, n_original) {
            Ok(choice) => {
                cooldown.remaining = choice.cooldown;
                pending_origin = Some(choice.vertex);
                Ok(vec![Pick {
                    vertex: choice.vertex,
                    rule: Rule::ImprovedBreak,
                    break_choice: Some(choice),
                }])
            }
            Err(e) => {
                log::warn!("break selection failed ({e}); protecting the heaviest candidate");
                cooldown.clear();
                Ok(vec![Pick::plain(v1, Rule::GreedyFallback)])
            }
        }
    })?;
    if pending_origin.is_some() {
        if let Some(b) = decisions.iter().rev().find_map(|d| d.break_choice.as_ref()) {
            cooldown.origin = Some(CooldownOrigin {
                vertex: b.vertex,
                cycle: b.cycle.clone(),
            });
        }
    }
    Ok(decisions)
}

/// One round of the even-sequence strategy: the two-firefighter rule of the
/// cactus strategy, and plain greedy for a single firefighter.
pub fn alg_e_round(view: &GraphView, f: usize) -> Result<Vec<Decision>, AlgorithmError> {
    play_round(view, f, |snap, left| {
        let Some(c1) = snap.heaviest_cycle() else {
            return Ok(vec![greedy_pick(snap)]);
        };
        let cycles: Vec<usize> = snap.root_cycles.iter().map(|&(c, _)| c).collect();
        if left >= 2 {
            return Ok(two_firefighter_picks(snap, &cycles, c1));
        }
        Ok(vec![Pick::plain(snap.ranked(&cycles)[0].0, Rule::Greedy)])
    })
}

/// A finished game played by one strategy. `decisions[i]` explains
/// `trace.entries[i]`.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub kind: AlgorithmKind,
    pub profit: usize,
    pub trace: Trace,
    pub decisions: Vec<Decision>,
    pub final_state: GameState,
}

/// Stateful round driver for one strategy.
#[derive(Debug, Clone)]
pub struct OnlinePlayer {
    kind: AlgorithmKind,
    n_original: usize,
    cooldown: CooldownState,
}

impl OnlinePlayer {
    pub fn new(kind: AlgorithmKind, n_original: usize) -> Self {
        OnlinePlayer {
            kind,
            n_original,
            cooldown: CooldownState::default(),
        }
    }

    pub fn cooldown(&self) -> &CooldownState {
        &self.cooldown
    }

    /// Decides the protections of the current round.
    pub fn decide(&mut self, view: &GraphView, f: usize) -> Result<Vec<Decision>, AlgorithmError> {
        match self.kind {
            AlgorithmKind::GreedyTree => greedy_tree_round(view, f),
            AlgorithmKind::AlgA => alg_a_round(view, f),
            AlgorithmKind::AlgC => alg_c_round(view, f, &mut self.cooldown, self.n_original),
            AlgorithmKind::AlgE => alg_e_round(view, f),
        }
    }
}

/// Plays a whole game with `kind`.
pub fn run_algorithm(instance: &Instance, kind: AlgorithmKind) -> Result<RunReport, AlgorithmError> {
    let class = validate_and_decompose(&instance.graph)?.class();
    if !kind.accepts(class) {
        return Err(AlgorithmError::WrongGraphClass { kind, class });
    }
    let mut state = GameState::new(instance);
    let mut player = OnlinePlayer::new(kind, instance.n());
    let mut decisions = Vec::new();
    while !state.is_finished() {
        let f = state.firefighters_left();
        let view = state.reduced_view();
        for d in player.decide(&view, f)? {
            state.protect(d.vertex)?;
            decisions.push(d);
        }
        state.spread();
    }
    Ok(RunReport {
        kind,
        profit: state.profit()?,
        trace: state.trace().clone(),
        decisions,
        final_state: state,
    })
}
