//! Spectral toolkit for non-backtracking graph operators.
//!
//! The crate builds the non-backtracking graph of a simple graph, its
//! adjacency and random-walk Laplacian matrices, computes complex spectra
//! with a dense nonsymmetric eigensolver, verifies the structural theorems
//! that relate cycles, degrees and connectivity to those spectra, and runs
//! exhaustive cospectrality censuses over graph6 corpora.

pub mod census;
pub mod graph;
pub mod nb;
pub mod spectra;
pub mod theory;
pub mod walks;

pub use graph::{parse_graph6, write_graph6, ComponentPartition, Graph};
pub use nb::{build_nb_graph, nb_laplacian, nb_laplacian_tilde, orient_edges, parity_matrix, NbGraph, OrientedEdgeList};
pub use spectra::{eigenvalues, fingerprint, ComplexSpectrum, OperatorTag, SpectralFingerprint};
