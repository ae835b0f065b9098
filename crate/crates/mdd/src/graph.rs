//! Bipartite graph representation with a certified 2-coloring.
//!
//! Every graph in this crate is simple, connected and bipartite; those
//! invariants are established once at construction and relied on everywhere
//! else. Vertices are `0..n` and each adjacency list is sorted.

use thiserror::Error;

/// Which side of the bipartition a vertex lies on.
pub type Part = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("not a simple graph: {0}")]
    NotSimple(String),
    #[error("not bipartite: odd cycle through vertex {0}")]
    NotBipartite(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex index {index} out of range for order {order}")]
    VertexOutOfRange { index: usize, order: usize },
    #[error("malformed graph6/sparse6 input: {0}")]
    MalformedGraph6(String),
}

/// An immutable simple connected bipartite graph.
///
/// The stored parts are the BFS 2-coloring from vertex 0 (vertex 0 is in
/// part 0); for a connected graph this coloring is unique up to swapping
/// the two labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    parts: Vec<Part>,
}

impl BipartiteGraph {
    /// Builds a graph from an explicit edge list, certifying simplicity,
    /// bipartiteness and connectivity. A single isolated vertex (`n == 1`)
    /// is accepted as the trivial graph K_1.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Disconnected);
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { index: u, order: n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { index: v, order: n });
            }
            if u == v {
                return Err(GraphError::NotSimple(format!("loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for (u, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::NotSimple(format!(
                    "duplicate edge at vertex {u}"
                )));
            }
        }
        let parts = certify_bipartition(n, &adjacency)?;
        Ok(BipartiteGraph {
            n,
            adjacency,
            parts,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn part(&self, v: usize) -> Part {
        self.parts[v]
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as (u, v) pairs with u < v, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (u, nbrs) in self.adjacency.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// BFS distances from `source`.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Applies a vertex permutation: vertex `v` of `self` becomes
    /// `perm[v]` of the result.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n);
        let edges: Vec<(usize, usize)> = self
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        BipartiteGraph::from_edges(self.n, &edges).expect("relabeling preserves all invariants")
    }
}

fn certify_bipartition(n: usize, adjacency: &[Vec<usize>]) -> Result<Vec<Part>, GraphError> {
    let mut color = vec![u8::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    color[0] = 0;
    queue.push_back(0usize);
    let mut seen = 1usize;
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if color[v] == u8::MAX {
                color[v] = 1 - color[u];
                seen += 1;
                queue.push_back(v);
            } else if color[v] == color[u] {
                return Err(GraphError::NotBipartite(v));
            }
        }
    }
    if seen != n {
        return Err(GraphError::Disconnected);
    }
    Ok(color)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claw_has_star_bipartition() {
        let g = BipartiteGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(g.part(0), 0);
        assert_eq!(g.part(1), 1);
        assert_eq!(g.part(2), 1);
        assert_eq!(g.part(3), 1);
        assert_eq!(g.degree(0), 3);
    }

    #[test]
    fn triangle_is_rejected() {
        let err = BipartiteGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).unwrap_err();
        assert!(matches!(err, GraphError::NotBipartite(_)));
    }

    #[test]
    fn six_cycle_parts_alternate() {
        let g =
            BipartiteGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
                .unwrap();
        for v in 0..6 {
            assert_eq!(g.part(v), (v % 2) as u8);
        }
    }

    #[test]
    fn duplicate_edge_and_loop_are_rejected() {
        assert!(matches!(
            BipartiteGraph::from_edges(2, &[(0, 1), (1, 0)]),
            Err(GraphError::NotSimple(_))
        ));
        assert!(matches!(
            BipartiteGraph::from_edges(2, &[(0, 0)]),
            Err(GraphError::NotSimple(_))
        ));
    }

    #[test]
    fn disconnected_is_rejected_but_k1_is_allowed() {
        assert!(matches!(
            BipartiteGraph::from_edges(4, &[(0, 1), (2, 3)]),
            Err(GraphError::Disconnected)
        ));
        let k1 = BipartiteGraph::from_edges(1, &[]).unwrap();
        assert_eq!(k1.order(), 1);
        assert!(matches!(
            BipartiteGraph::from_edges(0, &[]),
            Err(GraphError::Disconnected)
        ));
    }

    #[test]
    fn out_of_range_index_is_reported() {
        assert!(matches!(
            BipartiteGraph::from_edges(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { index: 2, order: 2 })
        ));
    }
}
