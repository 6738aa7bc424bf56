use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not weakly connected (vertex {0} unreachable from vertex 0)")]
    Disconnected(usize),
}

/// Directed, weakly connected traffic network without self-loops.
///
/// Vertices are `0..vertex_count`. Parallel edges collapse into one since only
/// the vertex sequence of a walk matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        for &(u, v) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::VertexOutOfRange(u, v, vertex_count));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
        }

        // Weak connectivity via union-find.
        let mut parent: Vec<usize> = (0..vertex_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(u, v) in &edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
            }
        }
        let root = find(&mut parent, 0);
        if let Some(v) = (1..vertex_count).find(|&v| find(&mut parent, v) != root) {
            return Err(GraphError::Disconnected(v));
        }

        Ok(Self { vertex_count, edges })
    }

    /// Complete digraph on `k` vertices.
    pub fn complete(k: usize) -> Result<Self, GraphError> {
        let edges = (0..k).flat_map(|u| (0..k).filter(move |&v| v != u).map(move |v| (u, v)));
        Self::new(k, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    /// Out-neighbours of `u` in increasing order.
    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((u, 0)..(u + 1, 0)).map(|&(_, v)| v)
    }

    /// Maximum out-degree.
    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|u| self.successors(u).count()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loop() {
        assert_eq!(Graph::new(2, [(0, 1), (1, 1)]), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn rejects_disconnected() {
        assert_eq!(Graph::new(3, [(0, 1)]), Err(GraphError::Disconnected(2)));
    }

    #[test]
    fn weak_connectivity_suffices() {
        // 0 -> 1 <- 2 is weakly connected
        let g = Graph::new(3, [(0, 1), (2, 1)]).unwrap();
        assert!(g.has_edge(2, 1));
        assert!(!g.has_edge(1, 2));
    }

    #[test]
    fn complete_digraph() {
        let g = Graph::complete(3).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.successors(1).collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(Graph::complete(1).unwrap().edge_count(), 0);
    }
}
