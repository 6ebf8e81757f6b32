//! Cluster-state entanglement graph and stabilizer operators.
//!
//! Qubits live on the edges and faces of a cell complex. The entanglement
//! graph bonds each face qubit to the edge qubits around its boundary. Face
//! stabilizers are X on the face qubit and Z around the boundary; multiplying
//! the face stabilizers of a closed cell cancels every Z, leaving the
//! measurable X-only cell stabilizer.

use super::{CellComplex3, CellId, EdgeId, FaceId, ValidationError};
use serde::{Deserialize, Serialize};

/// Qubit ids: edge qubits take `0..E`, face qubits take `E..E+F`.
pub type QubitId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QubitKind {
    Edge(EdgeId),
    Face(FaceId),
}

/// Bipartite entanglement graph between edge qubits and face qubits.
#[derive(Debug, Clone)]
pub struct ClusterGraph {
    pub qubits: Vec<QubitKind>,
    /// Bonds as (face qubit, edge qubit) pairs, ascending.
    pub bonds: Vec<(QubitId, QubitId)>,
}

impl ClusterGraph {
    pub fn qubit_count(&self) -> usize {
        self.qubits.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.qubits.len()];
        for &(a, b) in &self.bonds {
            d[a as usize] += 1;
            d[b as usize] += 1;
        }
        d
    }

    /// Build without validating the complex. Bonds join each face qubit to
    /// the edges its walk uses an odd number of times.
    pub fn from_incidence(complex: &CellComplex3) -> Self {
        let ne = complex.edges.len() as u32;
        let mut qubits = Vec::with_capacity(complex.edges.len() + complex.faces.len());
        for e in 0..ne {
            qubits.push(QubitKind::Edge(e));
        }
        for f in 0..complex.faces.len() as u32 {
            qubits.push(QubitKind::Face(f));
        }
        let mut bonds = Vec::new();
        for (fid, face) in complex.faces.iter().enumerate() {
            let mut edges: Vec<EdgeId> = face.walk.iter().map(|s| s.edge).collect();
            edges.sort_unstable();
            // An edge traversed an even number of times contributes no bond.
            let mut i = 0;
            while i < edges.len() {
                let j = edges[i..].iter().take_while(|&&e| e == edges[i]).count();
                if j % 2 == 1 {
                    bonds.push((ne + fid as u32, edges[i]));
                }
                i += j;
            }
        }
        bonds.sort_unstable();
        ClusterGraph { qubits, bonds }
    }
}

/// Build the cluster graph of a validated complex.
pub fn build_cluster_graph(complex: &CellComplex3) -> Result<ClusterGraph, ValidationError> {
    complex.validate()?;
    Ok(ClusterGraph::from_incidence(complex))
}

/// A Pauli operator as X/Z support sets over qubit ids. Supports are sets:
/// multiplying two operators cancels repeated factors pairwise.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliOperator {
    pub x_support: Vec<QubitId>,
    pub z_support: Vec<QubitId>,
}

impl PauliOperator {
    pub fn new(mut x_support: Vec<QubitId>, mut z_support: Vec<QubitId>) -> Self {
        x_support.sort_unstable();
        x_support.dedup();
        z_support.sort_unstable();
        z_support.dedup();
        PauliOperator { x_support, z_support }
    }

    /// Group product: symmetric difference of both supports.
    pub fn multiply(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            x_support: sym_diff(&self.x_support, &other.x_support),
            z_support: sym_diff(&self.z_support, &other.z_support),
        }
    }

    /// Two Pauli operators commute iff their X/Z supports overlap on an even
    /// number of positions.
    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        let n = intersection_size(&self.x_support, &other.z_support)
            + intersection_size(&self.z_support, &other.x_support);
        n % 2 == 0
    }
}

fn sym_diff(a: &[QubitId], b: &[QubitId]) -> Vec<QubitId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out
}

fn intersection_size(a: &[QubitId], b: &[QubitId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Stabilizer of one face: X on the face qubit, Z around its boundary.
pub fn face_stabilizer(complex: &CellComplex3, face: FaceId) -> Result<PauliOperator, ValidationError> {
    if face as usize >= complex.faces.len() {
        return Err(ValidationError::UnknownId { kind: "face", id: face });
    }
    let ne = complex.edges.len() as u32;
    let mut z = Vec::new();
    for step in &complex.faces[face as usize].walk {
        z.push(step.edge);
    }
    // Set semantics: an even number of Z's on one qubit cancels.
    z.sort_unstable();
    let mut z_support = Vec::with_capacity(z.len());
    let mut i = 0;
    while i < z.len() {
        let run = z[i..].iter().take_while(|&&e| e == z[i]).count();
        if run % 2 == 1 {
            z_support.push(z[i]);
        }
        i += run;
    }
    Ok(PauliOperator { x_support: vec![ne + face], z_support })
}

/// Closed stabilizer of one cell: the product of its face stabilizers. The Z
/// parts must cancel pairwise; a residue signals a cell that is not a closed
/// surface.
pub fn cell_stabilizer(complex: &CellComplex3, cell: CellId) -> Result<PauliOperator, ValidationError> {
    if cell as usize >= complex.cells.len() {
        return Err(ValidationError::UnknownId { kind: "cell", id: cell });
    }
    let mut acc = PauliOperator::default();
    for &f in &complex.cells[cell as usize].faces {
        acc = acc.multiply(&face_stabilizer(complex, f)?);
    }
    if let Some(&edge) = acc.z_support.first() {
        return Err(ValidationError::CellOpenEdge { cell, edge, count: 1 });
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_complex::{Cell, Edge, Face, FaceStep, Vertex};
    use crate::lattices::cubic;
    use num_rational::Rational64;

    #[test]
    fn cubic_l2_cluster_graph() {
        let c = cubic(2);
        let g = build_cluster_graph(&c).unwrap();
        assert_eq!(g.qubit_count(), 48);
        assert!(g.degrees().iter().all(|&d| d == 4));
        // Bipartite by construction: every bond joins a face qubit to an edge qubit.
        for &(a, b) in &g.bonds {
            assert!(matches!(g.qubits[a as usize], QubitKind::Face(_)));
            assert!(matches!(g.qubits[b as usize], QubitKind::Edge(_)));
        }
    }

    #[test]
    fn single_hexagon_cluster_graph() {
        // Open fixture: one hexagonal face and its six boundary edges on a
        // path of six vertices. Invariant checks do not apply.
        let pos = |x: i64| [Rational64::from_integer(x), 0.into(), 0.into()];
        let vertices = (0..6).map(|i| Vertex { pos: pos(i) }).collect();
        let edges = (0..6)
            .map(|i| Edge { ends: [i, (i + 1) % 6], wrap: [0, 0, 0] })
            .collect();
        let faces = vec![Face { walk: (0..6).map(FaceStep::fwd).collect() }];
        let complex = CellComplex3 { size: 6, vertices, edges, faces, cells: vec![] };
        let g = ClusterGraph::from_incidence(&complex);
        assert_eq!(g.qubit_count(), 7);
        assert_eq!(g.degrees()[6], 6); // the face qubit
        assert!(g.degrees()[..6].iter().all(|&d| d == 1));
        let _ = Cell { faces: vec![] };
    }

    #[test]
    fn cubic_face_and_cell_stabilizers() {
        let c = cubic(2);
        let s = face_stabilizer(&c, 0).unwrap();
        assert_eq!(s.x_support.len(), 1);
        assert_eq!(s.z_support.len(), 4);

        let cs = cell_stabilizer(&c, 0).unwrap();
        assert_eq!(cs.x_support.len(), 6);
        assert!(cs.z_support.is_empty());
    }

    #[test]
    fn unknown_ids_error() {
        let c = cubic(2);
        assert!(face_stabilizer(&c, 999).is_err());
        assert!(cell_stabilizer(&c, 999).is_err());
    }

    #[test]
    fn pauli_product_cancels() {
        let a = PauliOperator::new(vec![1, 2], vec![3, 4]);
        let b = PauliOperator::new(vec![2, 5], vec![4, 6]);
        let p = a.multiply(&b);
        assert_eq!(p.x_support, vec![1, 5]);
        assert_eq!(p.z_support, vec![3, 6]);
        assert!(a.commutes_with(&a));
    }
}
