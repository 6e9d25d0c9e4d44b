//! Covered sets, weights, distances and tolerances.
//!
//! All functions take the graph together with a set of `removed` vertices so
//! that callers can evaluate a measure on `g - removed` without materializing
//! it. Break sub-graphs are materialized because they are reused many times.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cactus::CactusDecomposition;
use crate::graph::{Graph, GraphView, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("the fire source cannot be part of a protected set")]
    RootInS,
    #[error("vertex {vertex} is not a non-root vertex of cycle {cycle}")]
    VertexNotOnCycle { vertex: usize, cycle: usize },
    #[error("cycle {0} does not contain the fire source")]
    NotRootCycle(usize),
    #[error("edge ({0}, {1}) is not on the cycle")]
    EdgeNotOnCycle(usize, usize),
    #[error("tolerance threshold must be at least 1")]
    InvalidM,
}

/// Outcome of a tolerance query. `NoneBelow` means that not even distance 0
/// leaves `m` vertices, so the option does not exist. It orders below every
/// depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tolerance {
    NoneBelow,
    /// `usize::MAX` stands for "unbounded" (vertices unreachable from the root
    /// count as infinitely far). Cactus break views never produce it.
    Depth(usize),
}

impl Tolerance {
    pub fn depth(self) -> Option<usize> {
        match self {
            Tolerance::NoneBelow => None,
            Tolerance::Depth(d) => Some(d),
        }
    }
}

/// Vertices every root path of which meets `s`, in `g - removed`.
pub fn covered_set(g: &Graph, removed: &VertexSet, s: &VertexSet) -> Result<VertexSet, MeasureError> {
    if s.contains(g.root()) {
        return Err(MeasureError::RootInS);
    }
    let mut blocked = removed.clone();
    blocked.union_with(s);
    let mut covered = g.reachable_from_root(&blocked).complement();
    covered.difference_with(removed);
    Ok(covered)
}

pub fn weight(g: &Graph, removed: &VertexSet, s: &VertexSet) -> Result<usize, MeasureError> {
    covered_set(g, removed, s).map(|c| c.len())
}

/// Covered set of a single vertex in the whole graph.
pub fn covered_by_vertex(g: &Graph, v: usize) -> Result<VertexSet, MeasureError> {
    covered_set(g, &VertexSet::new(g.n()), &VertexSet::from_vertices(g.n(), [v]))
}

pub fn vertex_weight(g: &Graph, v: usize) -> Result<usize, MeasureError> {
    covered_by_vertex(g, v).map(|c| c.len())
}

/// BFS distances from `source` in `g - removed`; `None` marks unreachable or
/// removed vertices.
pub fn distances_from(g: &Graph, removed: &VertexSet, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    if removed.contains(source) {
        return dist;
    }
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].expect("queued vertices have a distance");
        for &w in g.neighbors(v) {
            if dist[w].is_none() && !removed.contains(w) {
                dist[w] = Some(dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Hop distance between `u` and `v` in `g - removed`, `None` for infinity.
pub fn dist(g: &Graph, removed: &VertexSet, u: usize, v: usize) -> Option<usize> {
    distances_from(g, removed, u)[v]
}

/// Number of non-removed vertices at distance at least `d` from the root.
/// Unreachable vertices are infinitely far away and always count.
pub fn count_safe(g: &Graph, removed: &VertexSet, d: usize) -> usize {
    distances_from(g, removed, g.root())
        .iter()
        .enumerate()
        .filter(|&(v, dv)| !removed.contains(v) && dv.map_or(true, |x| x >= d))
        .count()
}

/// Covered set of the non-root vertices of cycle `c`.
pub fn cycle_covered_set(g: &Graph, decomp: &CactusDecomposition, c: usize) -> VertexSet {
    let members = VertexSet::from_vertices(g.n(), decomp.non_root_members(c));
    covered_set(g, &VertexSet::new(g.n()), &members).expect("non-root members exclude the root")
}

pub fn cycle_weight(g: &Graph, decomp: &CactusDecomposition, c: usize) -> usize {
    cycle_covered_set(g, decomp, c).len()
}

fn check_root_cycle(g: &Graph, decomp: &CactusDecomposition, c: usize) -> Result<(), MeasureError> {
    if c >= decomp.cycles().len() || !decomp.cycle(c).contains(&g.root()) {
        return Err(MeasureError::NotRootCycle(c));
    }
    Ok(())
}

/// The sub-graph induced by the root and the cycle's covered set, minus
/// everything covered by `v`.
pub fn break_subgraph(
    g: &Graph,
    decomp: &CactusDecomposition,
    c: usize,
    v: usize,
) -> Result<GraphView, MeasureError> {
    check_root_cycle(g, decomp, c)?;
    if v == g.root() || !decomp.cycle(c).contains(&v) {
        return Err(MeasureError::VertexNotOnCycle { vertex: v, cycle: c });
    }
    let mut keep = cycle_covered_set(g, decomp, c);
    keep.difference_with(&covered_by_vertex(g, v)?);
    keep.insert(g.root());
    Ok(g.induced(&keep))
}

/// The sub-graph induced by the root and the cycle's covered set, with the
/// cycle edge `(u, v)` deleted.
pub fn break_subgraph_edge(
    g: &Graph,
    decomp: &CactusDecomposition,
    c: usize,
    (u, v): (usize, usize),
) -> Result<GraphView, MeasureError> {
    check_root_cycle(g, decomp, c)?;
    if decomp.edge_cycle(u, v) != Some(c) {
        return Err(MeasureError::EdgeNotOnCycle(u, v));
    }
    let mut keep = cycle_covered_set(g, decomp, c);
    keep.insert(g.root());
    let view = g.induced(&keep);
    let (lu, lv) = (
        view.local(u).expect("cycle vertex kept"),
        view.local(v).expect("cycle vertex kept"),
    );
    Ok(GraphView {
        graph: view.graph.without_edge(lu, lv),
        to_original: view.to_original,
    })
}

/// Largest `d` with `count_safe(g, d) >= m`.
pub fn max_depth_keeping(g: &Graph, m: usize) -> Result<Tolerance, MeasureError> {
    if m == 0 {
        return Err(MeasureError::InvalidM);
    }
    let mut depths: Vec<usize> = distances_from(g, &VertexSet::new(g.n()), g.root())
        .into_iter()
        .map(|d| d.unwrap_or(usize::MAX))
        .collect();
    if depths.len() < m {
        return Ok(Tolerance::NoneBelow);
    }
    depths.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Tolerance::Depth(depths[m - 1]))
}

pub fn tolerance(
    g: &Graph,
    decomp: &CactusDecomposition,
    u: usize,
    c: usize,
    m: usize,
) -> Result<Tolerance, MeasureError> {
    if m == 0 {
        return Err(MeasureError::InvalidM);
    }
    let view = break_subgraph(g, decomp, c, u)?;
    max_depth_keeping(&view.graph, m)
}

pub fn tolerance_edge(
    g: &Graph,
    decomp: &CactusDecomposition,
    e: (usize, usize),
    c: usize,
    m: usize,
) -> Result<Tolerance, MeasureError> {
    if m == 0 {
        return Err(MeasureError::InvalidM);
    }
    let view = break_subgraph_edge(g, decomp, c, e)?;
    max_depth_keeping(&view.graph, m)
}

/// Smallest integer `m` with `m * m >= x`.
pub fn ceil_sqrt(x: usize) -> usize {
    let mut r = (x as f64).sqrt() as usize;
    while r * r > x {
        r -= 1;
    }
    while r * r < x {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cactus::validate_and_decompose;

    /// Cycle (r=0, u1..u4 = 1..4) with pendant p = 5 on u2.
    fn cycle_with_pendant() -> Graph {
        Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 5)], 0).unwrap()
    }

    fn plain_cycle() -> Graph {
        Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 0).unwrap()
    }

    fn set(n: usize, vs: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, vs.iter().copied())
    }

    #[test]
    fn covered_set_examples() {
        let g = plain_cycle();
        let none = VertexSet::new(5);
        assert_eq!(covered_set(&g, &none, &set(5, &[1])).unwrap(), set(5, &[1]));

        let g = cycle_with_pendant();
        let none = VertexSet::new(6);
        assert_eq!(covered_set(&g, &none, &set(6, &[2])).unwrap(), set(6, &[2, 5]));
        let both = covered_set(&g, &none, &set(6, &[1, 3])).unwrap();
        assert_eq!(both, set(6, &[1, 2, 3, 5]));
        assert_eq!(weight(&g, &none, &set(6, &[2])), Ok(2));
        assert_eq!(
            covered_set(&g, &none, &set(6, &[0])),
            Err(MeasureError::RootInS)
        );
    }

    #[test]
    fn distance_examples() {
        let g = plain_cycle();
        assert_eq!(dist(&g, &VertexSet::new(5), 0, 0), Some(0));
        assert_eq!(dist(&g, &set(5, &[1]), 0, 2), Some(3));
        assert_eq!(count_safe(&g, &VertexSet::new(5), 2), 2);
        assert_eq!(count_safe(&g, &VertexSet::new(5), 0), 5);
        assert_eq!(count_safe(&g, &set(5, &[3]), 0), 4);
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)], 0).unwrap();
        assert_eq!(count_safe(&path, &VertexSet::new(4), 2), 2);
    }

    #[test]
    fn break_views() {
        let g = plain_cycle();
        let d = validate_and_decompose(&g).unwrap();
        let t = break_subgraph(&g, &d, 0, 1).unwrap();
        assert_eq!(t.to_original, vec![0, 2, 3, 4]);
        assert_eq!(
            t.graph.edges().collect::<Vec<_>>(),
            vec![(0, 3), (1, 2), (2, 3)]
        );
        let te = break_subgraph_edge(&g, &d, 0, (0, 1)).unwrap();
        assert_eq!(te.graph.edge_count(), 4);
        assert!(!te.graph.has_edge(0, 1));
        assert_eq!(
            break_subgraph_edge(&g, &d, 0, (0, 2)),
            Err(MeasureError::EdgeNotOnCycle(0, 2))
        );
        assert_eq!(
            break_subgraph(&g, &d, 0, 0),
            Err(MeasureError::VertexNotOnCycle { vertex: 0, cycle: 0 })
        );
    }

    #[test]
    fn tadpole_tail_is_outside_the_break_view() {
        // cycle 0-1-2-3-0, tail 0-4-5
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5)], 0).unwrap();
        let d = validate_and_decompose(&g).unwrap();
        let t = break_subgraph(&g, &d, 0, 1).unwrap();
        assert_eq!(t.to_original, vec![0, 2, 3]);
    }

    #[test]
    fn pendant_leaves_break_view_with_its_vertex() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 5)], 0).unwrap();
        let d = validate_and_decompose(&g).unwrap();
        let t = break_subgraph(&g, &d, 0, 1).unwrap();
        assert_eq!(t.to_original, vec![0, 2, 3, 4]);
        let te = break_subgraph_edge(&g, &d, 0, (0, 1)).unwrap();
        let p = te.local(5).unwrap();
        assert_eq!(dist(&te.graph, &VertexSet::new(te.graph.n()), 0, p), Some(5));
    }

    #[test]
    fn tolerance_examples() {
        let g = plain_cycle();
        let d = validate_and_decompose(&g).unwrap();
        assert_eq!(tolerance(&g, &d, 1, 0, 2), Ok(Tolerance::Depth(2)));
        assert_eq!(tolerance(&g, &d, 1, 0, 1), Ok(Tolerance::Depth(3)));
        assert_eq!(tolerance(&g, &d, 1, 0, 5), Ok(Tolerance::NoneBelow));
        assert_eq!(tolerance_edge(&g, &d, (0, 1), 0, 2), Ok(Tolerance::Depth(3)));
        assert_eq!(tolerance_edge(&g, &d, (0, 1), 0, 1), Ok(Tolerance::Depth(4)));
        assert_eq!(tolerance_edge(&g, &d, (0, 1), 0, 0), Err(MeasureError::InvalidM));
        assert!(Tolerance::NoneBelow < Tolerance::Depth(0));
    }

    #[test]
    fn ceil_sqrt_matches_definition() {
        for x in 0..2000usize {
            let r = ceil_sqrt(x);
            assert!(r * r >= x);
            assert!(r == 0 || (r - 1) * (r - 1) < x);
        }
    }
}
