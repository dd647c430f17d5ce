//! Oriented edges, the non-backtracking graph and its operator matrices.
//!
//! Index convention: the M edges get the lexicographic canonical
//! orientation (smaller endpoint is the input) at indices 0..M, and index
//! M+i carries the inverse of edge i.

use crate::graph::Graph;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NbError {
    #[error("non-backtracking node {node} has out-degree 0 (vertex of degree 1); use nb_laplacian_tilde")]
    DegreeDeficient { node: usize },
}

/// The fixed orientation e_0..e_{M-1} plus inverses e_M..e_{2M-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedEdgeList {
    m: usize,
    inp: Vec<u16>,
    out: Vec<u16>,
}

impl OrientedEdgeList {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Input vertex of oriented edge `i`, for `i < 2M`.
    pub fn inp(&self, i: usize) -> u16 {
        self.inp[i]
    }

    /// Output vertex of oriented edge `i`, for `i < 2M`.
    pub fn out(&self, i: usize) -> u16 {
        self.out[i]
    }

    /// Index of the inverse of oriented edge `i`.
    pub fn inverse(&self, i: usize) -> usize {
        if i < self.m {
            i + self.m
        } else {
            i - self.m
        }
    }

    /// Index of the oriented edge `[v, w]`, if `{v, w}` is an edge.
    pub fn index_of(&self, v: u16, w: u16) -> Option<usize> {
        (0..2 * self.m).find(|&i| self.inp[i] == v && self.out[i] == w)
    }
}

/// Fixes the canonical orientation: indices 0..M sorted by (inp, out)
/// with inp < out, index M+i the inverse of index i.
pub fn orient_edges(g: &Graph) -> OrientedEdgeList {
    let m = g.edge_count();
    let mut inp = Vec::with_capacity(2 * m);
    let mut out = Vec::with_capacity(2 * m);
    for &(u, v) in g.edges() {
        inp.push(u);
        out.push(v);
    }
    for &(u, v) in g.edges() {
        inp.push(v);
        out.push(u);
    }
    OrientedEdgeList { m, inp, out }
}

/// The non-backtracking graph: directed graph on the 2M oriented edges
/// with an arc e -> f iff out(e) = inp(f) and inp(e) != out(f).
#[derive(Debug, Clone)]
pub struct NbGraph {
    edges: OrientedEdgeList,
    /// successors[i] = sorted arc targets of node i
    successors: Vec<Vec<usize>>,
    /// nb_degrees[i] = deg_G(out(e_i)) - 1
    nb_degrees: Vec<usize>,
}

/// Builds the non-backtracking graph of `g`. Vertices of degree 0 or 1 in
/// `g` are permitted; they yield nodes of out-degree 0.
pub fn build_nb_graph(g: &Graph) -> NbGraph {
    let edges = orient_edges(g);
    let two_m = 2 * edges.m();
    let deg = g.degrees();
    // arcs out of e are exactly the oriented edges leaving out(e), minus the inverse of e
    let mut leaving: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for i in 0..two_m {
        leaving[edges.inp(i) as usize].push(i);
    }
    let mut successors = Vec::with_capacity(two_m);
    let mut nb_degrees = Vec::with_capacity(two_m);
    for i in 0..two_m {
        let inv = edges.inverse(i);
        let succ: Vec<usize> = leaving[edges.out(i) as usize]
            .iter()
            .copied()
            .filter(|&j| j != inv)
            .collect();
        nb_degrees.push(deg[edges.out(i) as usize] - 1);
        debug_assert_eq!(succ.len(), deg[edges.out(i) as usize] - 1);
        successors.push(succ);
    }
    NbGraph { edges, successors, nb_degrees }
}

impl NbGraph {
    pub fn node_count(&self) -> usize {
        2 * self.edges.m()
    }

    pub fn edge_list(&self) -> &OrientedEdgeList {
        &self.edges
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i]
    }

    pub fn nb_degrees(&self) -> &[usize] {
        &self.nb_degrees
    }

    pub fn arc_count(&self) -> usize {
        self.nb_degrees.iter().sum()
    }

    /// Dense 0/1 adjacency matrix B of the non-backtracking graph.
    pub fn matrix_b(&self) -> DMatrix<f64> {
        let n = self.node_count();
        let mut b = DMatrix::zeros(n, n);
        for (i, succ) in self.successors.iter().enumerate() {
            for &j in succ {
                b[(i, j)] = 1.0;
            }
        }
        b
    }

    /// Strongly connected components (iterative Tarjan), as per-node
    /// component labels plus the component count.
    pub fn strongly_connected_components(&self) -> (Vec<usize>, usize) {
        tarjan_scc(self.node_count(), |v| self.successors[v].iter().copied())
    }

    /// Weakly connected components of the underlying undirected support.
    pub fn weak_components(&self) -> (Vec<usize>, usize) {
        let n = self.node_count();
        let mut undirected: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, succ) in self.successors.iter().enumerate() {
            for &j in succ {
                undirected[i].push(j);
                undirected[j].push(i);
            }
        }
        let mut labels = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if labels[s] != usize::MAX {
                continue;
            }
            labels[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &w in &undirected[v] {
                    if labels[w] == usize::MAX {
                        labels[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (labels, count)
    }
}

/// Iterative Tarjan SCC over nodes `0..n`; returns per-node component ids
/// (in reverse topological discovery order) and the component count.
pub(crate) fn tarjan_scc<I>(n: usize, succ: impl Fn(usize) -> I) -> (Vec<usize>, usize)
where
    I: Iterator<Item = usize>,
{
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut ncomp = 0usize;
    // explicit DFS frames: (node, child iterator state)
    let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        frames.push((root, succ(root).collect(), 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(frame) = frames.last_mut() {
            let (v, children, cursor) = (frame.0, &frame.1, &mut frame.2);
            if *cursor < children.len() {
                let w = children[*cursor];
                *cursor += 1;
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, succ(w).collect(), 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                if lowlink[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
                let done = frames.pop().unwrap().0;
                if let Some(parent) = frames.last() {
                    lowlink[parent.0] = lowlink[parent.0].min(lowlink[done]);
                }
            }
        }
    }
    (comp, ncomp)
}

/// Random walk Laplacian of the non-backtracking graph: I - D^{-1} B.
/// Every node must have out-degree >= 1, i.e. G needs min degree >= 2.
pub fn nb_laplacian(nb: &NbGraph) -> Result<DMatrix<f64>, NbError> {
    if let Some(node) = nb.nb_degrees.iter().position(|&d| d == 0) {
        return Err(NbError::DegreeDeficient { node });
    }
    let n = nb.node_count();
    let mut l = DMatrix::identity(n, n);
    for (i, succ) in nb.successors.iter().enumerate() {
        let w = -1.0 / nb.nb_degrees[i] as f64;
        for &j in succ {
            l[(i, j)] = w;
        }
    }
    Ok(l)
}

/// Degree-robust transition matrix D~ B: rows of out-degree 0 stay zero,
/// other rows are scaled by 1/out-degree. When G has min degree >= 2 this
/// equals I - nb_laplacian(nb) entrywise.
pub fn nb_laplacian_tilde(nb: &NbGraph) -> DMatrix<f64> {
    let n = nb.node_count();
    let mut t = DMatrix::zeros(n, n);
    for (i, succ) in nb.successors.iter().enumerate() {
        if nb.nb_degrees[i] == 0 {
            continue;
        }
        let w = 1.0 / nb.nb_degrees[i] as f64;
        for &j in succ {
            t[(i, j)] = w;
        }
    }
    t
}

/// Laplacian form of the degree-robust operator: I - D~ B.
pub fn nb_laplacian_from_tilde(nb: &NbGraph) -> DMatrix<f64> {
    let n = nb.node_count();
    DMatrix::identity(n, n) - nb_laplacian_tilde(nb)
}

/// The 2M x 2M parity involution P swapping each oriented edge with its
/// inverse: P[i, i+M] = P[i+M, i] = 1.
pub fn parity_matrix(m: usize) -> DMatrix<f64> {
    assert!(m >= 1, "parity matrix needs at least one edge");
    let mut p = DMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        p[(i, i + m)] = 1.0;
        p[(i + m, i)] = 1.0;
    }
    p
}
