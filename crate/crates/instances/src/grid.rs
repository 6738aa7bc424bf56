use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use vsp_core::{Graph, GraphError};

/// Rectangular grid with 4-neighbour adjacency. Vertex `(r, c)` has id
/// `r * cols + c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    /// Each street carries both directions. Otherwise edges point right and
    /// down only.
    pub bidirectional: bool,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, bidirectional: true }
    }

    pub fn vertex_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn coords(&self, vertex: usize) -> (usize, usize) {
        (vertex / self.cols, vertex % self.cols)
    }

    pub fn manhattan(&self, a: usize, b: usize) -> usize {
        let ((ra, ca), (rb, cb)) = (self.coords(a), self.coords(b));
        ra.abs_diff(rb) + ca.abs_diff(cb)
    }

    pub fn graph(&self) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = r * self.cols + c;
                let mut link = |w: usize| {
                    edges.push((v, w));
                    if self.bidirectional {
                        edges.push((w, v));
                    }
                };
                if c + 1 < self.cols {
                    link(v + 1);
                }
                if r + 1 < self.rows {
                    link(v + self.cols);
                }
            }
        }
        Graph::new(self.vertex_count(), edges)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    /// Parses `ROWSxCOLS`, e.g. `5x5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (r, c) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected ROWSxCOLS, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("bad grid dimension `{v}`: {e}"));
        Ok(GridSpec::new(parse(r)?, parse(c)?))
    }
}

/// Hop distance from every vertex to `target`, `None` if unreachable.
pub fn distances_to(graph: &Graph, target: usize) -> Vec<Option<usize>> {
    let n = graph.vertex_count();
    let mut predecessors = vec![Vec::new(); n];
    for (u, v) in graph.edges() {
        predecessors[v].push(u);
    }
    let mut dist = vec![None; n];
    dist[target] = Some(0);
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].expect("queued vertices have a distance");
        for &u in &predecessors[v] {
            if dist[u].is_none() {
                dist[u] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Lexicographically smallest shortest path from `source` to `target`, given
/// the hop distances to `target`.
pub fn shortest_path(graph: &Graph, source: usize, target: usize, dist_to_target: &[Option<usize>]) -> Option<Vec<usize>> {
    let mut remaining = dist_to_target[source]?;
    let mut path = vec![source];
    let mut v = source;
    while remaining > 0 {
        v = graph.successors(v).find(|&w| dist_to_target[w] == Some(remaining - 1))?;
        path.push(v);
        remaining -= 1;
    }
    debug_assert_eq!(v, target);
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_by_five_counts() {
        let g = GridSpec::new(5, 5).graph().unwrap();
        assert_eq!(g.vertex_count(), 25);
        // 2 * (2 * 5 * 4) directed edges
        assert_eq!(g.edge_count(), 80);
        assert_eq!(g.max_degree(), 4);
    }

    #[test]
    fn one_way_grid() {
        let spec = GridSpec { rows: 2, cols: 3, bidirectional: false };
        assert_eq!(spec.graph().unwrap().edge_count(), 7);
    }

    #[test]
    fn parse_spec() {
        assert_eq!("5x4".parse::<GridSpec>().unwrap(), GridSpec::new(5, 4));
        assert!("5by4".parse::<GridSpec>().is_err());
    }

    #[test]
    fn smallest_shortest_path() {
        let spec = GridSpec::new(3, 3);
        let g = spec.graph().unwrap();
        let dist = distances_to(&g, 8);
        // 0 -> 8: among all monotone paths the smallest sequence goes right first
        assert_eq!(shortest_path(&g, 0, 8, &dist).unwrap(), vec![0, 1, 2, 5, 8]);
        let dist = distances_to(&g, 0);
        assert_eq!(shortest_path(&g, 8, 0, &dist).unwrap(), vec![8, 5, 2, 1, 0]);
    }
}
