//! Cactus validation and cycle decomposition.
//!
//! In a cactus every biconnected component is either a single edge or a
//! simple cycle, so the cycles fall out of one Tarjan pass over the edges.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CactusError {
    #[error("not a cactus: biconnected component on vertices {component:?} is not a cycle")]
    NotCactus { component: Vec<usize> },
    #[error("graph is not connected")]
    Disconnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphClass {
    Tree,
    OneAlmostTree,
    Cactus,
}

impl GraphClass {
    pub fn name(self) -> &'static str {
        match self {
            GraphClass::Tree => "tree",
            GraphClass::OneAlmostTree => "one-almost-tree",
            GraphClass::Cactus => "cactus",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CactusDecomposition {
    /// Cycles in cyclic order. A cycle through the root starts at the root;
    /// any other cycle starts at its smallest id. The second entry is the
    /// smaller of the two cycle-neighbors of the first.
    cycles: Vec<Vec<usize>>,
    edge_cycle: BTreeMap<(usize, usize), usize>,
    vertex_cycles: Vec<Vec<usize>>,
    class: GraphClass,
    root: usize,
}

impl CactusDecomposition {
    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle(&self, c: usize) -> &[usize] {
        &self.cycles[c]
    }

    pub fn class(&self) -> GraphClass {
        self.class
    }

    /// Cycle holding the edge, if any.
    pub fn edge_cycle(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_cycle.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn vertex_cycles(&self, v: usize) -> &[usize] {
        &self.vertex_cycles[v]
    }

    pub fn is_cycle_vertex(&self, v: usize) -> bool {
        !self.vertex_cycles[v].is_empty()
    }

    pub fn is_root_cycle(&self, c: usize) -> bool {
        self.cycles[c][0] == self.root
    }

    pub fn root_cycles(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertex_cycles[self.root].iter().copied()
    }

    /// Cycle members other than the root.
    pub fn non_root_members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        let root = self.root;
        self.cycles[c].iter().copied().filter(move |&v| v != root)
    }
}

/// Classifies `g` and enumerates its cycles.
pub fn validate_and_decompose(g: &Graph) -> Result<CactusDecomposition, CactusError> {
    let n = g.n();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut components: Vec<Vec<(usize, usize)>> = Vec::new();

    // Frames: (vertex, parent, index of next neighbor to scan).
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();
    disc[g.root()] = timer;
    low[g.root()] = timer;
    timer += 1;
    stack.push((g.root(), UNSEEN, 0));
    while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
        if let Some(&w) = g.neighbors(v).get(*next) {
            *next += 1;
            if disc[w] == UNSEEN {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                edge_stack.push((v, w));
                stack.push((w, v, 0));
            } else if w != parent && disc[w] < disc[v] {
                edge_stack.push((v, w));
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    let mut component = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        component.push(e);
                        if e == (p, v) {
                            break;
                        }
                    }
                    components.push(component);
                }
            }
        }
    }
    if disc.iter().any(|&d| d == UNSEEN) {
        return Err(CactusError::Disconnected);
    }

    let mut cycles = Vec::new();
    for component in components {
        if component.len() == 1 {
            continue;
        }
        let mut vertices: Vec<usize> = component.iter().flat_map(|&(a, b)| [a, b]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        // A biconnected component with as many edges as vertices is a cycle.
        if vertices.len() != component.len() {
            return Err(CactusError::NotCactus {
                component: vertices,
            });
        }
        cycles.push(order_cycle(&component, &vertices, g.root()));
    }
    cycles.sort();

    let mut edge_cycle = BTreeMap::new();
    let mut vertex_cycles = vec![Vec::new(); n];
    for (c, cycle) in cycles.iter().enumerate() {
        for (i, &u) in cycle.iter().enumerate() {
            let v = cycle[(i + 1) % cycle.len()];
            edge_cycle.insert((u.min(v), u.max(v)), c);
            vertex_cycles[u].push(c);
        }
    }
    let class = match cycles.len() {
        0 => GraphClass::Tree,
        1 => GraphClass::OneAlmostTree,
        _ => GraphClass::Cactus,
    };
    Ok(CactusDecomposition {
        cycles,
        edge_cycle,
        vertex_cycles,
        class,
        root: g.root(),
    })
}

fn order_cycle(edges: &[(usize, usize)], vertices: &[usize], root: usize) -> Vec<usize> {
    let mut nbrs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        nbrs.entry(a).or_default().push(b);
        nbrs.entry(b).or_default().push(a);
    }
    let start = if vertices.contains(&root) {
        root
    } else {
        vertices[0]
    };
    let first = *nbrs[&start].iter().min().expect("cycle vertex has neighbors");
    let mut order = vec![start, first];
    while order.len() < vertices.len() {
        let (prev, cur) = (order[order.len() - 2], order[order.len() - 1]);
        let next = nbrs[&cur]
            .iter()
            .copied()
            .find(|&x| x != prev)
            .expect("cycle vertex has degree two inside its component");
        order.push(next);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.iter().copied(), 0).unwrap()
    }

    #[test]
    fn path_is_a_tree() {
        let d = validate_and_decompose(&graph(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(d.class(), GraphClass::Tree);
        assert!(d.cycles().is_empty());
    }

    #[test]
    fn triangle_with_pendant_is_one_almost_tree() {
        // r=0, u=1, v=2, pendant p=3 on u
        let d = validate_and_decompose(&graph(4, &[(0, 1), (1, 2), (2, 0), (1, 3)])).unwrap();
        assert_eq!(d.class(), GraphClass::OneAlmostTree);
        assert_eq!(d.cycles(), &[vec![0, 1, 2]]);
        assert!(d.is_root_cycle(0));
        assert_eq!(d.edge_cycle(2, 1), Some(0));
        assert_eq!(d.edge_cycle(1, 3), None);
        assert_eq!(d.vertex_cycles(3), &[] as &[usize]);
    }

    #[test]
    fn k4_is_rejected() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert!(matches!(
            validate_and_decompose(&graph(4, &edges)),
            Err(CactusError::NotCactus { .. })
        ));
    }

    #[test]
    fn two_cycles_sharing_the_root() {
        let edges = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 0), (4, 6)];
        let d = validate_and_decompose(&graph(7, &edges)).unwrap();
        assert_eq!(d.class(), GraphClass::Cactus);
        assert_eq!(d.cycles(), &[vec![0, 1, 2], vec![0, 3, 4, 5]]);
        assert_eq!(d.root_cycles().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(d.vertex_cycles(0).len(), 2);
    }

    #[test]
    fn non_root_cycle_starts_at_smallest_id() {
        // root 0 -- 1, cycle (1, 4, 3, 2)
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 1)];
        let d = validate_and_decompose(&graph(5, &edges)).unwrap();
        assert_eq!(d.cycles(), &[vec![1, 2, 3, 4]]);
        assert!(!d.is_root_cycle(0));
        assert_eq!(d.root_cycles().count(), 0);
    }

    #[test]
    fn theta_graph_is_rejected() {
        // two vertices joined by three internally disjoint paths
        let edges = [(0, 1), (1, 2), (0, 3), (3, 2), (0, 4), (4, 2)];
        assert!(validate_and_decompose(&graph(5, &edges)).is_err());
    }
}
