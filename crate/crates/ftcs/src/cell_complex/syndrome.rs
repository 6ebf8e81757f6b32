//! Syndrome graphs: the 1-skeleton of a cell complex.
//!
//! Vertices carry closed-stabilizer parities, edges carry qubit measurement
//! outcomes. Each edge records a cut-crossing vector against three fixed cut
//! planes (one per axis, at coordinate `L - 1/3`) and the cluster-state
//! valence of its qubit, used by the weighted noise model.

use super::{dual_complex, rat, CellComplex3, ValidationError};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// Which of the two interlocking complexes to take the skeleton of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Primal,
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub ends: [u32; 2],
    /// Signed crossings of the three cut planes, each in {-1, 0, 1}.
    pub crossing: [i8; 3],
    /// Cluster-state valence of this qubit (faces containing the edge).
    pub valence: u32,
}

#[derive(Debug, Clone)]
pub struct SyndromeGraph {
    /// Size label inherited from the generating complex.
    pub size: u32,
    pub vertex_count: u32,
    pub edges: Vec<GraphEdge>,
    offsets: Vec<u32>,
    halves: Vec<(u32, u32)>,
}

impl PartialEq for SyndromeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.vertex_count == other.vertex_count
            && self.edges == other.edges
    }
}

impl SyndromeGraph {
    pub fn new(size: u32, vertex_count: u32, edges: Vec<GraphEdge>) -> Self {
        let mut degree = vec![0u32; vertex_count as usize];
        for e in &edges {
            degree[e.ends[0] as usize] += 1;
            degree[e.ends[1] as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(vertex_count as usize + 1);
        let mut acc = 0u32;
        offsets.push(0);
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }
        let mut cursor: Vec<u32> = offsets[..vertex_count as usize].to_vec();
        let mut halves = vec![(0u32, 0u32); acc as usize];
        for (eid, e) in edges.iter().enumerate() {
            let [u, v] = e.ends;
            halves[cursor[u as usize] as usize] = (eid as u32, v);
            cursor[u as usize] += 1;
            halves[cursor[v as usize] as usize] = (eid as u32, u);
            cursor[v as usize] += 1;
        }
        SyndromeGraph { size, vertex_count, edges, offsets, halves }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Incident `(edge, other endpoint)` pairs; self-loops appear twice.
    pub fn neighbors(&self, v: u32) -> &[(u32, u32)] {
        &self.halves[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }
}

/// Extract the syndrome graph of the requested side, dualizing first when
/// `side` is `Dual`.
pub fn extract_syndrome_graph(
    complex: &CellComplex3,
    side: Side,
) -> Result<SyndromeGraph, ValidationError> {
    match side {
        Side::Primal => {
            complex.validate()?;
            skeleton(complex)
        }
        Side::Dual => skeleton(&dual_complex(complex)?),
    }
}

fn skeleton(complex: &CellComplex3) -> Result<SyndromeGraph, ValidationError> {
    let l = complex.size as i64;
    // Cut plane at L - 1/3 per axis: vertex positions generated by the
    // bundled lattices and splits are dyadic, so none sits on a plane.
    let cut = rat(3 * l - 1) / rat(3);
    let above = |x: Rational64| -> i32 { i32::from(x > cut) };

    let valences = complex.edge_valences();
    let mut edges = Vec::with_capacity(complex.edges.len());
    for (eid, e) in complex.edges.iter().enumerate() {
        let tail = &complex.vertices[e.ends[0] as usize];
        let head = &complex.vertices[e.ends[1] as usize];
        let mut crossing = [0i8; 3];
        for a in 0..3 {
            let c = e.wrap[a] as i32 + above(head.pos[a]) - above(tail.pos[a]);
            if !(-1..=1).contains(&c) {
                return Err(ValidationError::CrossingRange { edge: eid as u32, axis: a, value: c });
            }
            crossing[a] = c as i8;
        }
        edges.push(GraphEdge { ends: e.ends, crossing, valence: valences[eid] });
    }
    Ok(SyndromeGraph::new(complex.size, complex.vertices.len() as u32, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::cubic;

    #[test]
    fn cubic_l4_skeleton() {
        let c = cubic(4);
        let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
        assert_eq!(g.vertex_count, 64);
        assert_eq!(g.edge_count(), 192);
        assert!((0..g.vertex_count).all(|v| g.degree(v) == 6));
        assert!(g.edges.iter().all(|e| e.valence == 4));
    }

    #[test]
    fn cubic_dual_skeleton_matches() {
        let c = cubic(2);
        let g = extract_syndrome_graph(&c, Side::Dual).unwrap();
        assert_eq!(g.vertex_count, 8);
        assert_eq!(g.edge_count(), 24);
        assert!((0..8).all(|v| g.degree(v) == 6));
    }

    #[test]
    fn crossings_sum_to_zero_around_faces() {
        for l in [2u32, 3] {
            let c = cubic(l);
            let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
            for face in &c.faces {
                let mut total = [0i32; 3];
                for &step in &face.walk {
                    let sign = match step.dir {
                        crate::cell_complex::Orientation::Forward => 1,
                        crate::cell_complex::Orientation::Reverse => -1,
                    };
                    for a in 0..3 {
                        total[a] += sign * g.edges[step.edge as usize].crossing[a] as i32;
                    }
                }
                assert_eq!(total, [0; 3]);
            }
        }
    }

    #[test]
    fn cubic_crossing_count_per_axis() {
        let c = cubic(4);
        let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
        for a in 0..3 {
            let n = g.edges.iter().filter(|e| e.crossing[a] != 0).count();
            assert_eq!(n, 16); // one per column of the 4x4 torus section
        }
    }
}
