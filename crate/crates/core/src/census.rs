//! Cospectrality censuses: fingerprint a corpus under several operators,
//! group equal fingerprints within a chosen scope, and report the graphs
//! not determined by their spectrum.

use crate::graph::{write_graph6, Graph};
use crate::nb::{build_nb_graph, nb_laplacian_from_tilde, nb_laplacian_tilde};
use crate::spectra::{eigenvalues, fingerprint, EigenError, OperatorTag, SpectralFingerprint};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Scope within which two equal fingerprints count as cospectral mates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Grouping {
    /// Same vertex count. Fingerprints carry their dimension, so this is
    /// the per-row comparison behind the per-N census tables.
    ByN,
    /// Same vertex and edge count.
    ByNM,
    /// Same edge count only; vertex counts may differ. The cross-N mode
    /// for the non-backtracking operators, whose size depends only on M.
    ByM,
    /// Whole corpus; only the fingerprint (with its dimension) matters.
    Global,
}

impl Grouping {
    pub fn parse_flag(s: &str) -> Option<Self> {
        match s {
            "n" => Some(Grouping::ByN),
            "nm" => Some(Grouping::ByNM),
            "m" => Some(Grouping::ByM),
            "global" => Some(Grouping::Global),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ScopeKey {
    N(u32),
    NM(u32, u32),
    M(u32),
    Global,
}

/// Fingerprints of one graph under the requested operators.
#[derive(Debug, Clone, Serialize)]
pub struct CensusRecord {
    pub graph6: String,
    pub n: u32,
    pub m: u32,
    pub fingerprints: BTreeMap<OperatorTag, SpectralFingerprint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusConfig {
    pub operators: Vec<OperatorTag>,
    pub grouping: Grouping,
    pub precision: u32,
    pub min_degree: Option<usize>,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            operators: vec![OperatorTag::A, OperatorTag::L, OperatorTag::NbA, OperatorTag::NbLTilde],
            grouping: Grouping::ByN,
            precision: 6,
            min_degree: None,
        }
    }
}

/// Computes the requested operator fingerprints for one graph. The A and L
/// matrices use the graph as given; the non-backtracking operators are
/// built after degree-zero vertices are removed.
pub fn fingerprint_graph(
    g: &Graph,
    operators: &[OperatorTag],
    precision: u32,
) -> Result<CensusRecord, EigenError> {
    let mut fps = BTreeMap::new();
    let needs_nb = operators.iter().any(|o| {
        matches!(o, OperatorTag::NbA | OperatorTag::NbL | OperatorTag::NbLTilde)
    });
    let nb = if needs_nb {
        let (reduced, _) = g.remove_isolated();
        Some(build_nb_graph(&reduced))
    } else {
        None
    };
    for &op in operators {
        let matrix = match op {
            OperatorTag::A => g.adjacency_matrix(),
            OperatorTag::L => g.rw_laplacian(),
            OperatorTag::NbA => nb.as_ref().unwrap().matrix_b(),
            OperatorTag::NbL => nb_laplacian_from_tilde(nb.as_ref().unwrap()),
            OperatorTag::NbLTilde => nb_laplacian_tilde(nb.as_ref().unwrap()),
        };
        let spectrum = eigenvalues(&matrix)?;
        fps.insert(op, fingerprint(&spectrum, op, precision));
    }
    Ok(CensusRecord {
        graph6: write_graph6(g),
        n: g.n() as u32,
        m: g.edge_count() as u32,
        fingerprints: fps,
    })
}

/// The grouped census over a corpus.
#[derive(Debug, Clone)]
pub struct CensusTable {
    pub config: CensusConfig,
    pub records: Vec<CensusRecord>,
}

/// Runs the census. The corpus order does not affect any reported
/// statistic; per-graph fingerprinting fans out across the thread pool.
pub fn run_census(corpus: &[Graph], config: CensusConfig) -> Result<CensusTable, EigenError> {
    let filtered: Vec<&Graph> = corpus
        .iter()
        .filter(|g| config.min_degree.is_none_or(|d| g.min_degree() >= d))
        .collect();
    let records: Result<Vec<CensusRecord>, EigenError> = filtered
        .par_iter()
        .map(|g| fingerprint_graph(g, &config.operators, config.precision))
        .collect();
    Ok(CensusTable { config, records: records? })
}

impl CensusTable {
    fn scope_of(&self, rec: &CensusRecord) -> ScopeKey {
        match self.config.grouping {
            Grouping::ByN => ScopeKey::N(rec.n),
            Grouping::ByNM => ScopeKey::NM(rec.n, rec.m),
            Grouping::ByM => ScopeKey::M(rec.m),
            Grouping::Global => ScopeKey::Global,
        }
    }

    /// Cospectrality classes under `op`: groups of record indices with
    /// identical fingerprints inside the same scope. Only classes of size
    /// at least 2 (the graphs not determined by their spectrum) are kept.
    pub fn mate_classes(&self, op: OperatorTag) -> Vec<(ScopeKey, Vec<usize>)> {
        type ClassKey<'a> = (ScopeKey, usize, &'a [(i64, i64)]);
        let mut groups: BTreeMap<ClassKey, Vec<usize>> = BTreeMap::new();
        for (idx, rec) in self.records.iter().enumerate() {
            let fp = rec
                .fingerprints
                .get(&op)
                .unwrap_or_else(|| panic!("operator {op:?} missing from census records"));
            let (dim, rounded) = fp.key();
            groups.entry((self.scope_of(rec), dim, rounded)).or_default().push(idx);
        }
        groups
            .into_iter()
            .filter(|(_, members)| members.len() >= 2)
            .map(|((scope, _, _), members)| (scope, members))
            .collect()
    }

    /// Universe sizes keyed by vertex count.
    pub fn universe_by_n(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for rec in &self.records {
            *out.entry(rec.n).or_insert(0) += 1;
        }
        out
    }

    /// Universe sizes keyed by edge count.
    pub fn universe_by_m(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for rec in &self.records {
            *out.entry(rec.m).or_insert(0) += 1;
        }
        out
    }

    /// Graphs not determined by their `op` spectrum, per vertex count.
    pub fn not_determined_by_n(&self, op: OperatorTag) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for (_, members) in self.mate_classes(op) {
            for idx in members {
                *out.entry(self.records[idx].n).or_insert(0) += 1;
            }
        }
        out
    }

    /// Graphs not determined by their `op` spectrum, per edge count.
    pub fn not_determined_by_m(&self, op: OperatorTag) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for (_, members) in self.mate_classes(op) {
            for idx in members {
                *out.entry(self.records[idx].m).or_insert(0) += 1;
            }
        }
        out
    }

    /// Percentage of not-determined graphs lying in classes of size
    /// exactly two, per vertex count; `None` where no graph has a mate.
    pub fn pair_percentage_by_n(&self, op: OperatorTag) -> BTreeMap<u32, Option<f64>> {
        let mut total: BTreeMap<u32, usize> = BTreeMap::new();
        let mut in_pairs: BTreeMap<u32, usize> = BTreeMap::new();
        for (_, members) in self.mate_classes(op) {
            for &idx in &members {
                let n = self.records[idx].n;
                *total.entry(n).or_insert(0) += 1;
                if members.len() == 2 {
                    *in_pairs.entry(n).or_insert(0) += 1;
                }
            }
        }
        let mut out = BTreeMap::new();
        for n in self.universe_by_n().keys() {
            out.insert(
                *n,
                total.get(n).map(|&t| 100.0 * in_pairs.get(n).copied().unwrap_or(0) as f64 / t as f64),
            );
        }
        out
    }

    /// Nontrivial classes as sorted graph6 keys, sorted between classes.
    pub fn list_mates(&self, op: OperatorTag) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .mate_classes(op)
            .into_iter()
            .map(|(_, members)| {
                let mut keys: Vec<String> =
                    members.iter().map(|&i| self.records[i].graph6.clone()).collect();
                keys.sort();
                keys
            })
            .collect();
        out.sort();
        out
    }

    /// True iff every within-class pair under `op` is also a mate pair
    /// under each operator in `others`.
    pub fn pairs_also_mates_under(&self, op: OperatorTag, others: &[OperatorTag]) -> bool {
        for (_, members) in self.mate_classes(op) {
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    for &other in others {
                        let fa = &self.records[a].fingerprints[&other];
                        let fb = &self.records[b].fingerprints[&other];
                        if fa.key() != fb.key()
                            || self.scope_of(&self.records[a]) != self.scope_of(&self.records[b])
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}
