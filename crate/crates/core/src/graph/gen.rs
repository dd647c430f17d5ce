//! Non-isomorphic graph enumeration for small vertex counts.
//!
//! Dedup uses the lexicographically smallest upper-triangle adjacency
//! bit-string over all vertex orderings, found by a depth-first search
//! that places one vertex per level and prunes orderings whose partial
//! bit-string already exceeds the best complete one.

use super::Graph;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("built-in generator supports n <= 7; supply larger corpora as graph6 input")]
    UnsupportedSize(usize),
    #[error("generator needs at least one vertex")]
    EmptySize,
}

/// Exactly one representative per isomorphism class of simple graphs on
/// `n` vertices with minimum degree at least `min_degree`, in a fixed
/// deterministic order.
pub fn generate_nonisomorphic(n: usize, min_degree: usize) -> Result<Vec<Graph>, GenError> {
    if n == 0 {
        return Err(GenError::EmptySize);
    }
    if n > 7 {
        return Err(GenError::UnsupportedSize(n));
    }
    Ok(enumerate_classes(n)
        .into_iter()
        .filter(|g| g.min_degree() >= min_degree)
        .collect())
}

/// One canonical representative per isomorphism class on `n` vertices,
/// ascending in canonical bit order. Exact but exponential; intended for
/// n <= 9 (corpus bootstrap), beyond which external tooling is the way.
pub fn enumerate_classes(n: usize) -> Vec<Graph> {
    assert!((1..=11).contains(&n), "enumeration supports 1..=11 vertices");
    if n == 1 {
        return vec![Graph::empty(1)];
    }
    let smaller = enumerate_classes(n - 1);
    // Every n-vertex graph arises from an (n-1)-vertex graph by attaching
    // one new vertex to some subset of the old ones.
    let seen: HashSet<u64> = smaller
        .par_iter()
        .map(|h| {
            let base: Vec<(u16, u16)> = h.edges().to_vec();
            let mut local = HashSet::new();
            for subset in 0u32..(1 << (n - 1)) {
                let mut edges = base.clone();
                for u in 0..(n - 1) as u16 {
                    if subset >> u & 1 == 1 {
                        edges.push((u, (n - 1) as u16));
                    }
                }
                let g = Graph::new(n, edges).unwrap();
                local.insert(canonical_bits(&g));
            }
            local
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let mut keys: Vec<u64> = seen.into_iter().collect();
    keys.sort_unstable();
    keys.into_iter().map(|bits| from_triangle_bits(n, bits)).collect()
}

/// Rebuilds a graph from its packed upper-triangle bits (first bit of the
/// x(1,0), x(2,0), x(2,1), ... sequence most significant).
pub(crate) fn from_triangle_bits(n: usize, bits: u64) -> Graph {
    let total = n * (n - 1) / 2;
    let mut edges = Vec::new();
    let mut pos = 0;
    for v in 1..n as u16 {
        for u in 0..v {
            if bits >> (total - 1 - pos) & 1 == 1 {
                edges.push((u, v));
            }
            pos += 1;
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Canonical form: minimum of `triangle_bits` over all vertex orderings.
pub fn canonical_bits(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= 11, "canonical form supports n <= 11");
    if n <= 1 {
        return 0;
    }
    let mut adj = vec![0u16; n];
    for &(u, v) in g.edges() {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    let mut search = CanonSearch {
        adj: &adj,
        n,
        placed: Vec::with_capacity(n),
        used: 0,
        best: vec![u64::MAX; n],
    };
    for v in 0..n {
        // the first position contributes no bits
        search.placed.push(v);
        search.used = 1 << v;
        search.descend();
        search.placed.pop();
    }
    let total = n * (n - 1) / 2;
    let mut bits = 0u64;
    let mut pos = 0;
    for (level, &chunk) in search.best.iter().enumerate().skip(1) {
        // chunk holds row `level` with x(level,0) as most significant bit
        for j in 0..level {
            bits |= (chunk >> (level - 1 - j) & 1) << (total - 1 - (pos + j));
        }
        pos += level;
    }
    bits
}

struct CanonSearch<'a> {
    adj: &'a [u16],
    n: usize,
    placed: Vec<usize>,
    used: u16,
    /// best[k] = row-k chunk of the smallest complete bit-string consistent
    /// with the tightenings so far; maintained eagerly while descending.
    best: Vec<u64>,
}

impl CanonSearch<'_> {
    fn descend(&mut self) {
        let k = self.placed.len();
        if k == self.n {
            return;
        }
        let mut candidates: Vec<(u64, usize)> = Vec::with_capacity(self.n - k);
        for v in 0..self.n {
            if self.used >> v & 1 == 1 {
                continue;
            }
            let mut chunk = 0u64;
            for (j, &p) in self.placed.iter().enumerate() {
                chunk |= ((self.adj[v] >> p & 1) as u64) << (k - 1 - j);
            }
            candidates.push((chunk, v));
        }
        candidates.sort_unstable();
        for (chunk, v) in candidates {
            match chunk.cmp(&self.best[k]) {
                Ordering::Greater => break, // sorted: the rest are worse
                Ordering::Less => {
                    // strictly better prefix: deeper rows are wide open again
                    self.best[k] = chunk;
                    for slot in &mut self.best[k + 1..] {
                        *slot = u64::MAX;
                    }
                }
                Ordering::Equal => {}
            }
            self.placed.push(v);
            self.used |= 1 << v;
            self.descend();
            self.used &= !(1 << v);
            self.placed.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical_bits_naive(g: &Graph) -> u64 {
        // all n! relabelings, minimum triangle bit-string
        let n = g.n();
        let mut perm: Vec<u16> = (0..n as u16).collect();
        let mut best = u64::MAX;
        permute(&mut perm, 0, &mut |p| {
            best = best.min(g.relabel(p).triangle_bits());
        });
        best
    }

    fn permute(perm: &mut Vec<u16>, k: usize, f: &mut impl FnMut(&[u16])) {
        if k == perm.len() {
            f(perm);
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            permute(perm, k + 1, f);
            perm.swap(k, i);
        }
    }

    #[test]
    fn pruned_search_matches_full_enumeration() {
        for n in 2..=6 {
            for g in enumerate_classes(n) {
                assert_eq!(canonical_bits(&g), canonical_bits_naive(&g), "graph {:?}", g);
            }
        }
    }

    #[test]
    fn canonical_is_relabel_invariant() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        let base = canonical_bits(&g);
        let perm: Vec<u16> = vec![3, 5, 0, 1, 4, 2];
        assert_eq!(canonical_bits(&g.relabel(&perm)), base);
    }

    #[test]
    fn unlabeled_graph_counts() {
        let expected = [1usize, 2, 4, 11, 34, 156, 1044];
        for (i, &want) in expected.iter().enumerate() {
            assert_eq!(enumerate_classes(i + 1).len(), want, "n = {}", i + 1);
        }
    }

    #[test]
    fn generator_respects_min_degree() {
        // only the triangle has min degree 2 on three vertices
        let gs = generate_nonisomorphic(3, 2).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0], Graph::complete(3));
        // n=4, all graphs
        assert_eq!(generate_nonisomorphic(4, 0).unwrap().len(), 11);
        // min degree >= 2 universe sizes used by the census: 4 <= n <= 6 totals 76
        let total: usize = (4..=6).map(|n| generate_nonisomorphic(n, 2).unwrap().len()).sum();
        assert_eq!(total, 76);
    }

    #[test]
    fn generator_rejects_large_n() {
        assert!(matches!(generate_nonisomorphic(8, 0), Err(GenError::UnsupportedSize(8))));
    }

    #[test]
    fn no_two_outputs_isomorphic() {
        let gs = enumerate_classes(5);
        for (i, a) in gs.iter().enumerate() {
            for b in gs.iter().skip(i + 1) {
                assert_ne!(canonical_bits(a), canonical_bits(b));
            }
        }
    }
}
