//! Complex spectra, canonical rounded fingerprints and spectral statistics.

mod eig;

pub use eig::EigenError;

use crate::nb::tarjan_scc;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Which operator a spectrum or fingerprint came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OperatorTag {
    /// Adjacency matrix A of the graph itself.
    A,
    /// Random walk Laplacian L = I - D~A of the graph itself.
    L,
    /// Adjacency B of the non-backtracking graph.
    NbA,
    /// Non-backtracking Laplacian I - D~B.
    NbL,
    /// The degree-robust transition form D~B.
    NbLTilde,
}

impl OperatorTag {
    pub fn flag(&self) -> &'static str {
        match self {
            OperatorTag::A => "a",
            OperatorTag::L => "l",
            OperatorTag::NbA => "nba",
            OperatorTag::NbL => "nbl",
            OperatorTag::NbLTilde => "nblt",
        }
    }

    pub fn parse_flag(s: &str) -> Option<Self> {
        match s {
            "a" => Some(OperatorTag::A),
            "l" => Some(OperatorTag::L),
            "nba" => Some(OperatorTag::NbA),
            "nbl" => Some(OperatorTag::NbL),
            "nblt" => Some(OperatorTag::NbLTilde),
            _ => None,
        }
    }
}

/// Multiset of complex eigenvalues, sized by the matrix dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    values: Vec<Complex64>,
}

impl ComplexSpectrum {
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        ComplexSpectrum { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// min over eigenvalues of |1 - lambda|.
    pub fn gap_from_one(&self) -> f64 {
        self.values
            .iter()
            .map(|z| (Complex64::new(1.0, 0.0) - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// True iff some eigenvalue lies within `tol` of `target`.
    pub fn contains(&self, target: Complex64, tol: f64) -> bool {
        self.values.iter().any(|z| (z - target).norm() < tol)
    }

    /// Number of eigenvalues within `tol` of `target`.
    pub fn multiplicity_near(&self, target: Complex64, tol: f64) -> usize {
        self.values.iter().filter(|z| (*z - target).norm() < tol).count()
    }

    /// Checks conjugate-pair closure: the multiset equals its conjugate,
    /// matching values to `tol`.
    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        let conj: Vec<Complex64> = self.values.iter().map(|z| z.conj()).collect();
        match_multisets(&self.values, &conj, tol)
    }
}

/// Eigenvalues of a general real square matrix.
///
/// The matrix is first split along the strongly connected components of
/// its nonzero pattern; since a simultaneous permutation makes it block
/// triangular with those components as diagonal blocks, the spectrum is
/// the multiset union of the block spectra. Acyclic parts of the pattern
/// then contribute their diagonal entries exactly, which keeps the many
/// structurally-zero eigenvalues of tree-like non-backtracking matrices
/// from degrading into defective-eigenvalue noise.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<ComplexSpectrum, EigenError> {
    if m.nrows() != m.ncols() {
        return Err(EigenError::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if let Some(((row, col), _)) = m.iter().enumerate().map(|(k, v)| ((k % m.nrows(), k / m.nrows()), *v)).find(|&(_, v)| !v.is_finite()) {
        return Err(EigenError::NonFinite { row, col });
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(ComplexSpectrum::new(Vec::new()));
    }
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| i != j && m[(i, j)] != 0.0).collect())
        .collect();
    let (labels, ncomp) = tarjan_scc(n, |v| succ[v].iter().copied());
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (node, &c) in labels.iter().enumerate() {
        members[c].push(node);
    }
    let mut values = Vec::with_capacity(n);
    for nodes in members {
        if nodes.len() == 1 {
            values.push(Complex64::new(m[(nodes[0], nodes[0])], 0.0));
            continue;
        }
        let k = nodes.len();
        let mut block = DMatrix::zeros(k, k);
        for (bi, &i) in nodes.iter().enumerate() {
            for (bj, &j) in nodes.iter().enumerate() {
                block[(bi, bj)] = m[(i, j)];
            }
        }
        values.extend(eig::eigenvalues_raw(block)?);
    }
    Ok(ComplexSpectrum::new(values))
}

/// Sorted canonical fingerprint: eigenvalues rounded half-away-from-zero
/// at `precision` decimals, stored as scaled integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpectralFingerprint {
    pub operator: OperatorTag,
    pub dimension: usize,
    pub precision: u32,
    /// (re, im) pairs scaled by 10^precision, sorted lexicographically.
    pub rounded: Vec<(i64, i64)>,
}

impl SpectralFingerprint {
    /// The grouping key: rounded values with the dimension, without the
    /// operator tag.
    pub fn key(&self) -> (usize, &[(i64, i64)]) {
        (self.dimension, &self.rounded)
    }

    /// Renders like "(0.000000,0.000000);(1.000000,-1.000000)".
    pub fn render(&self) -> String {
        let scale = 10f64.powi(self.precision as i32);
        self.rounded
            .iter()
            .map(|&(re, im)| format!("({:.prec$},{:.prec$})", re as f64 / scale, im as f64 / scale, prec = self.precision as usize))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Rounds half away from zero at `precision` decimals, as a scaled integer.
pub fn round_half_away(x: f64, precision: u32) -> i64 {
    let scaled = x * 10f64.powi(precision as i32);
    // f64::round ties away from zero; normalize -0 to 0
    let r = scaled.round();
    if r == 0.0 {
        0
    } else {
        r as i64
    }
}

/// Canonical rounded fingerprint of a spectrum.
pub fn fingerprint(spectrum: &ComplexSpectrum, operator: OperatorTag, precision: u32) -> SpectralFingerprint {
    let mut rounded: Vec<(i64, i64)> = spectrum
        .values()
        .iter()
        .map(|z| (round_half_away(z.re, precision), round_half_away(z.im, precision)))
        .collect();
    rounded.sort_unstable();
    SpectralFingerprint { operator, dimension: spectrum.len(), precision, rounded }
}

/// Matches two complex multisets within `tol` by greedy nearest-unused
/// pairing. Exact whenever distinct values are separated by much more
/// than `tol`, which holds for every spectrum compared in this crate;
/// plain sorted comparison is not enough because rounding jitter in tied
/// real parts can scramble the order of conjugate clusters.
pub fn match_multisets(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let mut best: Option<(usize, f64)> = None;
        for (j, y) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (x - y).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= tol => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// One eigenvector for an already-computed eigenvalue, by shifted inverse
/// iteration (three iterations from a seeded random start).
pub fn eigenvector_for(m: &DMatrix<f64>, lambda: Complex64, seed: u64) -> DVector<Complex64> {
    let n = m.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = DVector::from_fn(n, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    x /= Complex64::new(x.norm(), 0.0);
    let mc: DMatrix<Complex64> = m.map(|v| Complex64::new(v, 0.0));
    let mut shift = lambda;
    for attempt in 0..4 {
        let shifted = &mc - DMatrix::from_diagonal_element(n, n, shift);
        let lu = shifted.lu();
        let mut ok = true;
        for _ in 0..3 {
            match lu.solve(&x) {
                Some(y) => {
                    let norm = y.norm();
                    if !norm.is_finite() || norm == 0.0 {
                        ok = false;
                        break;
                    }
                    x = y / Complex64::new(norm, 0.0);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            break;
        }
        // singular to working precision: nudge the shift off the eigenvalue
        shift += Complex64::new(1e-12 * (attempt + 1) as f64, 1e-12);
    }
    x
}

/// Residual ||M x - lambda x||_inf / ||x||_inf.
pub fn eigenpair_residual(m: &DMatrix<f64>, lambda: Complex64, x: &DVector<Complex64>) -> f64 {
    let mc: DMatrix<Complex64> = m.map(|v| Complex64::new(v, 0.0));
    let r = &mc * x - x * lambda;
    let num = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let den = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::nb::{build_nb_graph, nb_laplacian};

    #[test]
    fn identity_three() {
        let s = eigenvalues(&DMatrix::identity(3, 3)).unwrap();
        assert_eq!(fingerprint(&s, OperatorTag::A, 6).rounded, vec![(1_000_000, 0); 3]);
    }

    #[test]
    fn c4_nb_laplacian_spectrum() {
        // two directed 4-cycles: eigenvalues 1 - omega for omega^4 = 1, twice
        let l = nb_laplacian(&build_nb_graph(&Graph::cycle(4))).unwrap();
        let s = eigenvalues(&l).unwrap();
        let expect: Vec<Complex64> = [
            (0.0, 0.0),
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 0.0),
            (1.0, 1.0),
            (1.0, 1.0),
            (1.0, -1.0),
            (1.0, -1.0),
        ]
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect();
        assert!(match_multisets(s.values(), &expect, 1e-10));
        assert!((s.spectral_radius() - 2.0).abs() < 1e-12);
        assert!((s.gap_from_one() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn k4_gap_is_half() {
        let l = nb_laplacian(&build_nb_graph(&Graph::complete(4))).unwrap();
        let s = eigenvalues(&l).unwrap();
        assert!((s.gap_from_one() - 0.5).abs() < 1e-10);
        assert!(s.contains(Complex64::new(0.5, 0.0), 1e-6));
        assert!(s.contains(Complex64::new(1.5, 0.0), 1e-6));
        // trace identity: eigenvalues sum to the dimension
        assert!((s.sum().re - 12.0).abs() < 1e-8 && s.sum().im.abs() < 1e-9);
    }

    #[test]
    fn nilpotent_tree_spectra_are_exact_zeros() {
        // the NB matrix of a path is nilpotent; SCC splitting gives exact zeros
        let b = build_nb_graph(&Graph::path(5)).matrix_b();
        let s = eigenvalues(&b).unwrap();
        assert!(s.values().iter().all(|z| z.re == 0.0 && z.im == 0.0));
    }

    #[test]
    fn conjugate_closure_holds() {
        let b = build_nb_graph(&Graph::complete(4)).matrix_b();
        let s = eigenvalues(&b).unwrap();
        assert!(s.is_conjugate_closed(1e-9));
    }

    #[test]
    fn rounding_half_away() {
        assert_eq!(round_half_away(1.0000004, 6), 1_000_000);
        assert_eq!(round_half_away(1.0000006, 6), 1_000_001);
        assert_eq!(round_half_away(0.0000005, 6), 1);
        assert_eq!(round_half_away(-0.0000005, 6), -1);
        assert_eq!(round_half_away(-1e-9, 6), 0); // no negative zero
    }

    #[test]
    fn fingerprint_rounding_boundary() {
        let s = ComplexSpectrum::new(vec![Complex64::new(1.0000004, 0.0), Complex64::new(1.0000006, 0.0)]);
        let fp = fingerprint(&s, OperatorTag::L, 6);
        assert_eq!(fp.rounded, vec![(1_000_000, 0), (1_000_001, 0)]);
    }

    #[test]
    fn isomorphic_relabelings_share_fingerprints() {
        let g = Graph::complete(4);
        let perm: Vec<u16> = vec![2, 0, 3, 1];
        let h = g.relabel(&perm);
        for (mg, mh) in [
            (g.adjacency_matrix(), h.adjacency_matrix()),
            (g.rw_laplacian(), h.rw_laplacian()),
            (
                nb_laplacian(&build_nb_graph(&g)).unwrap(),
                nb_laplacian(&build_nb_graph(&h)).unwrap(),
            ),
        ] {
            let fa = fingerprint(&eigenvalues(&mg).unwrap(), OperatorTag::A, 6);
            let fb = fingerprint(&eigenvalues(&mh).unwrap(), OperatorTag::A, 6);
            assert_eq!(fa.rounded, fb.rounded);
        }
    }

    #[test]
    fn inverse_iteration_residual() {
        let l = nb_laplacian(&build_nb_graph(&Graph::cycle(4))).unwrap();
        let lambda = Complex64::new(1.0, 1.0);
        let x = eigenvector_for(&l, lambda, 7);
        assert!(eigenpair_residual(&l, lambda, &x) < 1e-8);
    }
}
