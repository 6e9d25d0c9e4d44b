//! Undirected simple graphs with a designated fire source.
//!
//! Vertices are dense ids `0..n`. Neighbor lists are kept sorted so that every
//! traversal, and therefore every tie-break built on top of one, is
//! deterministic.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("root {root} out of range for {n} vertices")]
    RootOutOfRange { root: usize, n: usize },
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge ({0}, {1})")]
    ParallelEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
}

/// Undirected simple graph with a fire source.
///
/// Graphs built through [`Graph::new`] are connected. Sub-graphs produced by
/// [`Graph::induced`] or [`Graph::without_edge`] keep simplicity and sorted
/// adjacency but may be disconnected; distance queries report such vertices
/// as unreachable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    root: usize,
    edge_count: usize,
}

impl Graph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        root: usize,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if root >= n {
            return Err(GraphError::RootOutOfRange { root, n });
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut edge_count = 0;
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::ParallelEdge(u.min(w[0]), u.max(w[0])));
            }
            edge_count += list.len();
        }
        let graph = Graph {
            adj,
            root,
            edge_count: edge_count / 2,
        };
        if graph.reachable_from_root(&VertexSet::new(n)).len() != n {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    /// Builds a graph from adjacency lists that are already symmetric and
    /// duplicate free. Lists are sorted here.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<usize>>, root: usize) -> Self {
        let mut edge_count = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        debug_assert!(root < adj.len());
        Graph {
            adj,
            root,
            edge_count: edge_count / 2,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Same graph with the fire source moved to `root`.
    pub fn with_root(&self, root: usize) -> Result<Self, GraphError> {
        if root >= self.n() {
            return Err(GraphError::RootOutOfRange { root, n: self.n() });
        }
        Ok(Graph {
            root,
            ..self.clone()
        })
    }

    /// Vertices reachable from the root without entering `blocked`.
    /// The root itself is always included.
    pub fn reachable_from_root(&self, blocked: &VertexSet) -> VertexSet {
        let mut seen = VertexSet::new(self.n());
        let mut queue = VecDeque::from([self.root]);
        seen.insert(self.root);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen.contains(w) && !blocked.contains(w) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Sub-graph induced by `keep`, which must contain the root. Local ids
    /// follow the ascending order of the kept original ids.
    pub fn induced(&self, keep: &VertexSet) -> GraphView {
        assert!(keep.contains(self.root), "induced sub-graph must keep the root");
        let to_original: Vec<usize> = keep.iter().collect();
        let mut from_original = vec![None; self.n()];
        for (local, &orig) in to_original.iter().enumerate() {
            from_original[orig] = Some(local);
        }
        let adj = to_original
            .iter()
            .map(|&orig| {
                self.adj[orig]
                    .iter()
                    .filter_map(|&w| from_original[w])
                    .collect()
            })
            .collect();
        let root = from_original[self.root].expect("root kept");
        GraphView {
            graph: Graph::from_adjacency(adj, root),
            to_original,
        }
    }

    /// Same vertex set with the edge `(u, v)` deleted (no-op when absent).
    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let mut adj = self.adj.clone();
        adj[u].retain(|&w| w != v);
        adj[v].retain(|&w| w != u);
        Graph::from_adjacency(adj, self.root)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("root", &self.root)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Dense bitset over `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            words: vec![0; universe.div_ceil(64)],
            universe,
        }
    }

    pub fn from_vertices(universe: usize, vertices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::new(universe);
        for v in vertices {
            set.insert(v);
        }
        set
    }

    pub fn full(universe: usize) -> Self {
        Self::from_vertices(universe, 0..universe)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Returns true when `v` was not present.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let (w, b) = (v / 64, v % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (w, b) = (v / 64, v % 64);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> VertexSet {
        let mut out = VertexSet::full(self.universe);
        out.difference_with(self);
        out
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A materialized sub-graph together with the map back to the ids of the
/// graph it was cut from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphView {
    pub graph: Graph,
    pub to_original: Vec<usize>,
}

impl GraphView {
    /// The whole graph, ids unchanged.
    pub fn identity(graph: &Graph) -> Self {
        GraphView {
            to_original: (0..graph.n()).collect(),
            graph: graph.clone(),
        }
    }

    pub fn original(&self, local: usize) -> usize {
        self.to_original[local]
    }

    pub fn local(&self, original: usize) -> Option<usize> {
        self.to_original.iter().position(|&o| o == original)
    }

    /// Restricts the view to `keep` (local ids), composing the id maps.
    pub fn restrict(&self, keep: &VertexSet) -> GraphView {
        let inner = self.graph.induced(keep);
        GraphView {
            to_original: inner.to_original.iter().map(|&l| self.to_original[l]).collect(),
            graph: inner.graph,
        }
    }
}
