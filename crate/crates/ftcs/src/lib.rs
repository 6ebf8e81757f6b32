//! Fault-tolerant cluster states from 3-d cell complexes.
//!
//! The library is organized around a combinatorial [`CellComplex3`] on a
//! 3-torus. From a complex one can derive the cluster-state entanglement
//! graph and its stabilizers ([`cell_complex`]), the syndrome graph used for
//! decoding ([`cell_complex::extract_syndrome_graph`]), and the combinatorial
//! dual. The [`splitting`] module transforms complexes by vertex splitting
//! and edge subdivision; [`lattices`] uses those transforms to generate the
//! four bundled lattices (cubic, diamond, triamond, doubled-edge cubic).
//! [`noise`] samples Pauli/erasure/weighted error patterns, [`decoder`] is a
//! union-find decoder with erasure support, and [`experiments`] is the Monte
//! Carlo harness for logical error rates and threshold crossings.

pub mod cell_complex;
pub mod decoder;
pub mod experiments;
pub mod lattices;
pub mod noise;
pub mod splitting;

pub use cell_complex::{
    build_cluster_graph, cell_stabilizer, dual_complex, extract_syndrome_graph, face_stabilizer,
    CellComplex3, ClusterGraph, PauliOperator, Side, SyndromeGraph, ValidationError,
};
pub use decoder::{decode, ClusterState, Correction, DecodeError};
pub use experiments::{find_threshold, run_trial, sweep, SweepConfig, ThresholdEstimate};
pub use lattices::{generate, logical_cut, degree_report, LatticeKind, LatticeSpec, LogicalCut};
pub use noise::{sample_erasure, sample_pauli, sample_weighted, syndrome_of, ErrorPattern, Syndrome};
pub use splitting::{
    apply_pipeline, commute_check, n_split, split_cell, split_vertex, subdivide_edge, PipelineOp,
    SplitInstruction, Subdivision, VertexSplit,
};
