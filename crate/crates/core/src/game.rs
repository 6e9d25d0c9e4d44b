//! Round-by-round game mechanics.
//!
//! A round is: place up to `f_i` firefighters on available vertices, then
//! let the fire advance one hop. The fire source burns before the first
//! placement. Unused firefighters are forfeited at the end of their round.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphView, VertexSet};

/// Whether unplaced firefighters are kept for later rounds. The online
/// strategies and the exact solver are both written for `false`.
pub const FIREFIGHTERS_CARRY_OVER: bool = false;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("vertex {vertex} is not available in round {round}")]
    VertexUnavailable { vertex: usize, round: usize },
    #[error("no firefighter left in round {round}")]
    NoFirefighterLeft { round: usize },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("game is not finished")]
    GameNotFinished,
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    /// Firefighters released in rounds 1, 2, ...; zero past the end.
    pub sequence: Vec<usize>,
}

impl Instance {
    pub fn new(graph: Graph, sequence: Vec<usize>) -> Self {
        Instance { graph, sequence }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Firefighters released in `round` (1-based).
    pub fn firefighters(&self, round: usize) -> usize {
        round
            .checked_sub(1)
            .and_then(|i| self.sequence.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn total_firefighters(&self) -> usize {
        self.sequence.iter().sum()
    }

    pub fn with_sequence(&self, sequence: Vec<usize>) -> Self {
        Instance {
            graph: self.graph.clone(),
            sequence,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Available,
    Protected,
    Burned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceEntry {
    /// 1-based position among all protections of the game.
    pub time: usize,
    pub round: usize,
    pub vertex: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    pub fn schedule(&self) -> ProtectionSchedule {
        ProtectionSchedule {
            entries: self.entries.iter().map(|e| (e.round, e.vertex)).collect(),
        }
    }

    pub fn protected_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|e| e.vertex)
    }
}

/// An offline plan of `(round, vertex)` protections.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProtectionSchedule {
    pub entries: Vec<(usize, usize)>,
}

impl ProtectionSchedule {
    pub fn new(mut entries: Vec<(usize, usize)>) -> Self {
        entries.sort_unstable();
        ProtectionSchedule { entries }
    }

    pub fn by_round(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut rounds: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(round, v) in &self.entries {
            rounds.entry(round).or_default().push(v);
        }
        rounds
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(_, v)| v)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct GameState {
    instance: Instance,
    status: Vec<Status>,
    round: usize,
    placed: usize,
    banked: usize,
    trace: Trace,
}

impl GameState {
    pub fn new(instance: &Instance) -> Self {
        let mut status = vec![Status::Available; instance.n()];
        status[instance.graph.root()] = Status::Burned;
        GameState {
            instance: instance.clone(),
            status,
            round: 1,
            placed: 0,
            banked: 0,
            trace: Trace::default(),
        }
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn graph(&self) -> &Graph {
        &self.instance.graph
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn status(&self, v: usize) -> Status {
        self.status[v]
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    /// Firefighters still unplaced in the current round.
    pub fn firefighters_left(&self) -> usize {
        (self.instance.firefighters(self.round) + self.banked).saturating_sub(self.placed)
    }

    pub fn burned(&self) -> VertexSet {
        self.with_status(Status::Burned)
    }

    pub fn protected(&self) -> VertexSet {
        self.with_status(Status::Protected)
    }

    fn with_status(&self, s: Status) -> VertexSet {
        VertexSet::from_vertices(
            self.status.len(),
            (0..self.status.len()).filter(|&v| self.status[v] == s),
        )
    }

    pub fn protect(&mut self, v: usize) -> Result<(), GameError> {
        if v >= self.status.len() {
            return Err(GameError::VertexOutOfRange(v));
        }
        if self.status[v] != Status::Available {
            return Err(GameError::VertexUnavailable {
                vertex: v,
                round: self.round,
            });
        }
        if self.firefighters_left() == 0 {
            return Err(GameError::NoFirefighterLeft { round: self.round });
        }
        self.status[v] = Status::Protected;
        self.placed += 1;
        self.trace.entries.push(TraceEntry {
            time: self.trace.entries.len() + 1,
            round: self.round,
            vertex: v,
        });
        Ok(())
    }

    /// One synchronous fire step; closes the current round.
    pub fn spread(&mut self) {
        let g = &self.instance.graph;
        let catching: Vec<usize> = (0..g.n())
            .filter(|&v| {
                self.status[v] == Status::Available
                    && g.neighbors(v).iter().any(|&w| self.status[w] == Status::Burned)
            })
            .collect();
        for v in catching {
            self.status[v] = Status::Burned;
        }
        self.banked = if FIREFIGHTERS_CARRY_OVER {
            self.firefighters_left()
        } else {
            0
        };
        self.round += 1;
        self.placed = 0;
    }

    pub fn is_finished(&self) -> bool {
        let g = &self.instance.graph;
        (0..g.n()).all(|v| {
            self.status[v] != Status::Burned
                || g.neighbors(v).iter().all(|&w| self.status[w] != Status::Available)
        })
    }

    pub fn profit(&self) -> Result<usize, GameError> {
        if !self.is_finished() {
            return Err(GameError::GameNotFinished);
        }
        Ok(self.status.iter().filter(|&&s| s != Status::Burned).count())
    }

    /// Vertices the fire can still reach: not burned, not protected, and
    /// joined to a burned vertex by a protection-free path.
    pub fn threatened(&self) -> VertexSet {
        let g = &self.instance.graph;
        let mut seen = self.burned();
        let mut queue: VecDeque<usize> = seen.iter().collect();
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if self.status[w] == Status::Available && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.difference_with(&self.burned());
        seen
    }

    /// The graph as an online player sees it: burned vertices contracted into
    /// a single fire source at local id 0 (mapped to the original root), saved
    /// and protected vertices deleted, remaining vertices in ascending
    /// original order.
    pub fn reduced_view(&self) -> GraphView {
        let g = &self.instance.graph;
        let threatened = self.threatened();
        let mut to_original = vec![g.root()];
        to_original.extend(threatened.iter());
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in to_original.iter().enumerate().skip(1) {
            local[v] = i;
        }
        let mut adj = vec![Vec::new(); to_original.len()];
        for (i, &v) in to_original.iter().enumerate().skip(1) {
            for &w in g.neighbors(v) {
                if self.status[w] == Status::Burned {
                    adj[i].push(0);
                    adj[0].push(i);
                } else if local[w] != usize::MAX {
                    adj[i].push(local[w]);
                }
            }
        }
        GraphView {
            graph: Graph::from_adjacency(adj, 0),
            to_original,
        }
    }
}

pub fn new_game(instance: &Instance) -> GameState {
    GameState::new(instance)
}

/// Plays `schedule` and then lets the fire run out. Returns the profit and
/// the final state.
pub fn replay(instance: &Instance, schedule: &ProtectionSchedule) -> Result<(usize, GameState), GameError> {
    let rounds = schedule.by_round();
    let last = rounds.keys().next_back().copied().unwrap_or(0);
    let mut state = GameState::new(instance);
    while state.round() <= last || !state.is_finished() {
        if let Some(vs) = rounds.get(&state.round()) {
            for &v in vs {
                state.protect(v).map_err(|e| {
                    GameError::InvalidSchedule(format!("round {}: {e}", state.round()))
                })?;
            }
        }
        state.spread();
    }
    let profit = state.profit()?;
    Ok((profit, state))
}
