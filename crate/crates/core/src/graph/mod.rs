//! Simple undirected graphs: construction, graph6 I/O, connectivity
//! utilities and a small non-isomorphic graph generator.

mod gen;
mod graph6;

pub use gen::{canonical_bits, enumerate_classes, generate_nonisomorphic, GenError};
pub use graph6::{parse_graph6, read_graph6_lines, write_graph6, Graph6Error};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u16),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u16, u16),
    #[error("edge endpoint {endpoint} out of range for {n} vertices")]
    EndpointOutOfRange { endpoint: u16, n: usize },
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are stored as lexicographically sorted pairs `(u, v)` with `u < v`;
/// no self-loops, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(u16, u16)>,
}

impl Graph {
    /// Builds a graph from an edge list, normalizing pair order and
    /// validating the simple-graph invariants.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (u16, u16)>) -> Result<Self, GraphError> {
        let mut es: Vec<(u16, u16)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let e = (a.min(b), a.max(b));
            if e.1 as usize >= n {
                return Err(GraphError::EndpointOutOfRange { endpoint: e.1, n });
            }
            es.push(e);
        }
        es.sort_unstable();
        if let Some(w) = es.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Graph { n, edges: es })
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n as u16 {
            for v in u + 1..n as u16 {
                edges.push((u, v));
            }
        }
        Graph { n, edges }
    }

    /// Cycle graph C_n (n >= 3), vertices in cyclic order 0-1-...-(n-1)-0.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle graph needs at least 3 vertices");
        let mut edges: Vec<(u16, u16)> = (0..n as u16 - 1).map(|u| (u, u + 1)).collect();
        edges.push((0, n as u16 - 1));
        Graph::new(n, edges).unwrap()
    }

    /// Path graph P_n on n vertices (n-1 edges).
    pub fn path(n: usize) -> Self {
        Graph::new(n, (0..n.saturating_sub(1) as u16).map(|u| (u, u + 1))).unwrap()
    }

    /// Complete bipartite graph K_{a,b} with parts 0..a and a..a+b.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..a as u16 {
            for v in a as u16..(a + b) as u16 {
                edges.push((u, v));
            }
        }
        Graph::new(a + b, edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u16, u16)] {
        &self.edges
    }

    pub fn has_edge(&self, u: u16, v: u16) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges.binary_search(&e).is_ok()
    }

    /// Per-vertex degrees; the sum equals `2 * edge_count()`.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Adjacency lists, each sorted ascending.
    pub fn adjacency_lists(&self) -> Vec<Vec<u16>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Dense 0/1 adjacency matrix A.
    pub fn adjacency_matrix(&self) -> nalgebra::DMatrix<f64> {
        let mut a = nalgebra::DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u as usize, v as usize)] = 1.0;
            a[(v as usize, u as usize)] = 1.0;
        }
        a
    }

    /// Random walk Laplacian L = I - D~ A of the graph itself, where D~
    /// inverts positive degrees and zeroes vanishing ones. A vertex of
    /// degree zero therefore keeps a plain diagonal 1.
    pub fn rw_laplacian(&self) -> nalgebra::DMatrix<f64> {
        let deg = self.degrees();
        let mut l = nalgebra::DMatrix::identity(self.n, self.n);
        for &(u, v) in &self.edges {
            let (u, v) = (u as usize, v as usize);
            l[(u, v)] = -1.0 / deg[u] as f64;
            l[(v, u)] = -1.0 / deg[v] as f64;
        }
        l
    }

    /// Connected components via breadth-first search.
    pub fn components(&self) -> ComponentPartition {
        let adj = self.adjacency_lists();
        let mut labels = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = std::collections::VecDeque::new();
        for s in 0..self.n {
            if labels[s] != usize::MAX {
                continue;
            }
            labels[s] = count;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if labels[w as usize] == usize::MAX {
                        labels[w as usize] = count;
                        queue.push_back(w as usize);
                    }
                }
            }
            count += 1;
        }
        ComponentPartition { labels, count }
    }

    /// True iff the graph admits a proper 2-coloring (no odd cycle).
    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency_lists();
        let mut color = vec![u8::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    let w = w as usize;
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff the graph is connected and 2-regular (a single cycle).
    pub fn is_cycle_graph(&self) -> bool {
        self.n >= 3
            && self.edge_count() == self.n
            && self.degrees().iter().all(|&d| d == 2)
            && self.components().count == 1
    }

    /// Deletes degree-zero vertices, relabeling the rest in order.
    /// Returns the reduced graph and, for each new label, the old one.
    pub fn remove_isolated(&self) -> (Graph, Vec<u16>) {
        let deg = self.degrees();
        let kept: Vec<u16> = (0..self.n as u16).filter(|&v| deg[v as usize] > 0).collect();
        let mut new_label = vec![u16::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_label[v as usize] = i as u16;
        }
        let edges: Vec<(u16, u16)> = self
            .edges
            .iter()
            .map(|&(u, v)| (new_label[u as usize], new_label[v as usize]))
            .collect();
        (Graph { n: kept.len(), edges }, kept)
    }

    /// Image of the graph under a vertex permutation: vertex v becomes perm[v].
    pub fn relabel(&self, perm: &[u16]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut edges: Vec<(u16, u16)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (perm[u as usize], perm[v as usize]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        Graph { n: self.n, edges }
    }

    /// Packs the adjacency upper-triangle bits x(1,0), x(2,0), x(2,1),
    /// x(3,0), ... into a u64 with the first bit most significant, so the
    /// numeric order of the packed value is the lexicographic order of the
    /// bit-string. Requires n <= 11 (55 bits).
    #[cfg(test)]
    pub(crate) fn triangle_bits(&self) -> u64 {
        debug_assert!(self.n <= 11);
        let total = self.n * (self.n - 1) / 2;
        let mut bits = 0u64;
        let mut pos = 0;
        for v in 1..self.n as u16 {
            for u in 0..v {
                if self.has_edge(u, v) {
                    bits |= 1 << (total - 1 - pos);
                }
                pos += 1;
            }
        }
        bits
    }
}

/// Partition of the vertex set into connected components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub labels: Vec<usize>,
    pub count: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loop_and_duplicates() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::new(3, [(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(Graph::new(2, [(0, 5)]), Err(GraphError::EndpointOutOfRange { .. })));
    }

    #[test]
    fn degrees_sum_to_twice_edges() {
        let g = Graph::new(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]).unwrap();
        // bowtie: two triangles sharing vertex 0
        assert_eq!(g.degrees(), vec![4, 2, 2, 2, 2]);
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
    }

    #[test]
    fn k4_degrees() {
        assert_eq!(Graph::complete(4).degrees(), vec![3, 3, 3, 3]);
        assert_eq!(Graph::cycle(5).degrees(), vec![2; 5]);
    }

    #[test]
    fn components_and_bipartite() {
        assert!(Graph::cycle(6).is_bipartite());
        assert_eq!(Graph::cycle(6).components().count, 1);
        assert!(!Graph::complete(3).is_bipartite());
        // disjoint union of two triangles
        let g = Graph::new(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        assert_eq!(g.components().count, 2);
        assert!(!g.is_bipartite());
    }

    #[test]
    fn cycle_graph_recognition() {
        assert!(Graph::cycle(7).is_cycle_graph());
        assert!(!Graph::complete(4).is_cycle_graph());
        let two_triangles = Graph::new(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]).unwrap();
        assert!(!two_triangles.is_cycle_graph()); // 2-regular but disconnected
    }

    #[test]
    fn remove_isolated_relabels() {
        let g = Graph::new(5, [(1, 3), (3, 4)]).unwrap();
        let (r, kept) = g.remove_isolated();
        assert_eq!(r.n(), 3);
        assert_eq!(kept, vec![1, 3, 4]);
        assert_eq!(r.edges(), &[(0, 1), (1, 2)]);
    }
}
