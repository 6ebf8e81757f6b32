//! Combinatorial 3-d cell complexes on a torus.
//!
//! A [`CellComplex3`] stores vertices, edges, faces and cells of a periodic
//! cell complex with side length `L`. Edges carry a wrap vector recording how
//! often they cross the periodic boundary; faces are closed oriented walks of
//! edges; cells are sets of faces forming closed surfaces. Positions are
//! rational labels used for cut-plane bookkeeping and rendering only — all
//! structural operations are purely combinatorial.

mod cluster;
mod dual;
pub mod io;
pub mod iso;
mod syndrome;

pub use cluster::{build_cluster_graph, cell_stabilizer, face_stabilizer, ClusterGraph, PauliOperator, QubitKind};
pub use dual::dual_complex;
pub use syndrome::{extract_syndrome_graph, GraphEdge, Side, SyndromeGraph};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

pub type VertexId = u32;
pub type EdgeId = u32;
pub type FaceId = u32;
pub type CellId = u32;

/// Rational coordinate triple, taken modulo the complex size `L`.
pub type Position = [Rational64; 3];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub pos: Position,
}

/// An edge between two vertices. `wrap[k]` counts the signed number of times
/// the edge crosses the periodic boundary along axis `k` when traversed from
/// `ends[0]` to `ends[1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub ends: [VertexId; 2],
    pub wrap: [i8; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Forward,
    Reverse,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Forward => Orientation::Reverse,
            Orientation::Reverse => Orientation::Forward,
        }
    }
}

/// One step of a face boundary walk: an edge traversed forward or reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceStep {
    pub edge: EdgeId,
    pub dir: Orientation,
}

impl FaceStep {
    pub fn fwd(edge: EdgeId) -> Self {
        FaceStep { edge, dir: Orientation::Forward }
    }
    pub fn rev(edge: EdgeId) -> Self {
        FaceStep { edge, dir: Orientation::Reverse }
    }
}

/// A face: a single closed walk of oriented edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub walk: Vec<FaceStep>,
}

/// A cell: the set of faces forming its closed boundary surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub faces: Vec<FaceId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellComplex3 {
    /// Number of original cubic unit cells per side of the torus.
    pub size: u32,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub cells: Vec<Cell>,
}

/// A structural invariant violation, naming the invariant and the offending
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("face {face} has an empty boundary walk")]
    FaceEmpty { face: FaceId },
    #[error("face {face} walk breaks at step {step}: consecutive edges do not share a vertex")]
    FaceWalkBroken { face: FaceId, step: usize },
    #[error("face {face} references unknown edge {edge}")]
    FaceUnknownEdge { face: FaceId, edge: EdgeId },
    #[error("face {face} boundary walk has nonzero wrap sum {wrap:?} (walk is not null-homotopic)")]
    FaceWrapNonzero { face: FaceId, wrap: [i32; 3] },
    #[error("cell {cell} is not a closed surface: edge {edge} lies on {count} of its face slots (expected 2)")]
    CellOpenEdge { cell: CellId, edge: EdgeId, count: u32 },
    #[error("cell {cell} references unknown face {face}")]
    CellUnknownFace { cell: CellId, face: FaceId },
    #[error("cell {cell} lists face {face} more than once")]
    CellDuplicateFace { cell: CellId, face: FaceId },
    #[error("cell {cell} surface is disconnected")]
    CellSurfaceDisconnected { cell: CellId },
    #[error("cell {cell} surface has Euler characteristic {chi} (expected 2, a sphere)")]
    CellNotSphere { cell: CellId, chi: i64 },
    #[error("face {face} belongs to {count} cells (expected exactly 2, space-filling complex)")]
    FaceCellCount { face: FaceId, count: u32 },
    #[error("edge {edge} references unknown vertex {vertex}")]
    EdgeUnknownVertex { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} link is not a single cycle (faces around the edge are disconnected)")]
    EdgeLinkDisconnected { edge: EdgeId },
    #[error("Euler characteristic V-E+F-C = {chi} (expected 0 on the 3-torus): V={v} E={e} F={f} C={c}")]
    EulerCharacteristic { v: usize, e: usize, f: usize, c: usize, chi: i64 },
    #[error("complex size must be at least 2, got {size}")]
    SizeTooSmall { size: u32 },
    #[error("edge {edge} crosses cut plane {axis} {value} times (expected -1..=1)")]
    CrossingRange { edge: EdgeId, axis: usize, value: i32 },
    #[error("unknown {kind} id {id}")]
    UnknownId { kind: &'static str, id: u32 },
}

impl CellComplex3 {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
            - self.cell_count() as i64
    }

    /// Vertex the step departs from.
    pub fn step_tail(&self, step: FaceStep) -> VertexId {
        let e = &self.edges[step.edge as usize];
        match step.dir {
            Orientation::Forward => e.ends[0],
            Orientation::Reverse => e.ends[1],
        }
    }

    /// Vertex the step arrives at.
    pub fn step_head(&self, step: FaceStep) -> VertexId {
        let e = &self.edges[step.edge as usize];
        match step.dir {
            Orientation::Forward => e.ends[1],
            Orientation::Reverse => e.ends[0],
        }
    }

    /// Signed wrap vector of the step.
    pub fn step_wrap(&self, step: FaceStep) -> [i32; 3] {
        let e = &self.edges[step.edge as usize];
        let s = match step.dir {
            Orientation::Forward => 1i32,
            Orientation::Reverse => -1i32,
        };
        [s * e.wrap[0] as i32, s * e.wrap[1] as i32, s * e.wrap[2] as i32]
    }

    /// For every edge, the `(face, occurrence)` slots whose walks use it.
    pub fn edge_face_slots(&self) -> Vec<Vec<(FaceId, usize)>> {
        let mut slots = vec![Vec::new(); self.edges.len()];
        for (fid, face) in self.faces.iter().enumerate() {
            for (k, step) in face.walk.iter().enumerate() {
                slots[step.edge as usize].push((fid as FaceId, k));
            }
        }
        slots
    }

    /// For every face, the cells containing it.
    pub fn face_cells(&self) -> Vec<Vec<CellId>> {
        let mut owners = vec![Vec::new(); self.faces.len()];
        for (cid, cell) in self.cells.iter().enumerate() {
            for &f in &cell.faces {
                owners[f as usize].push(cid as CellId);
            }
        }
        owners
    }

    /// For every vertex, the incident edge ids (self-loops listed twice).
    pub fn vertex_edges(&self) -> Vec<Vec<EdgeId>> {
        let mut incident = vec![Vec::new(); self.vertices.len()];
        for (eid, e) in self.edges.iter().enumerate() {
            incident[e.ends[0] as usize].push(eid as EdgeId);
            incident[e.ends[1] as usize].push(eid as EdgeId);
        }
        incident
    }

    /// Number of faces whose walk uses each edge an odd number of times.
    /// This is the cluster-state valence of the corresponding edge qubit.
    pub fn edge_valences(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.edges.len()];
        let mut parity = vec![0u8; self.edges.len()];
        for face in &self.faces {
            for step in &face.walk {
                parity[step.edge as usize] ^= 1;
            }
            for step in &face.walk {
                let e = step.edge as usize;
                if parity[e] == 1 {
                    counts[e] += 1;
                }
                parity[e] = 0;
            }
        }
        counts
    }

    /// Check every structural invariant. Returns the first violation found.
    pub fn validate(&self) -> Result<(), ValidationError> {
        self.check_references()?;
        self.check_faces()?;
        self.check_cells()?;
        self.check_face_ownership()?;
        self.validate_edge_links()?;
        self.check_euler()
    }

    /// Run each invariant group separately and report every outcome,
    /// for `verify`-style diagnostics.
    pub fn validation_report(&self) -> Vec<(&'static str, Result<(), ValidationError>)> {
        vec![
            ("element references in range", self.check_references()),
            ("face boundaries are closed null-homotopic walks", self.check_faces()),
            ("cells are closed connected spherical surfaces", self.check_cells()),
            ("every face belongs to exactly two cells", self.check_face_ownership()),
            ("faces around each edge form a single cycle", self.validate_edge_links()),
            ("Euler characteristic V-E+F-C = 0", self.check_euler()),
        ]
    }

    fn check_references(&self) -> Result<(), ValidationError> {
        if self.size < 2 {
            return Err(ValidationError::SizeTooSmall { size: self.size });
        }
        let nv = self.vertices.len() as u32;
        let ne = self.edges.len() as u32;
        let nf = self.faces.len() as u32;
        for (eid, e) in self.edges.iter().enumerate() {
            for &v in &e.ends {
                if v >= nv {
                    return Err(ValidationError::EdgeUnknownVertex { edge: eid as u32, vertex: v });
                }
            }
        }
        for (fid, face) in self.faces.iter().enumerate() {
            for step in &face.walk {
                if step.edge >= ne {
                    return Err(ValidationError::FaceUnknownEdge {
                        face: fid as FaceId,
                        edge: step.edge,
                    });
                }
            }
        }
        for (cid, cell) in self.cells.iter().enumerate() {
            let mut seen = HashMap::new();
            for &f in &cell.faces {
                if f >= nf {
                    return Err(ValidationError::CellUnknownFace { cell: cid as CellId, face: f });
                }
                if seen.insert(f, ()).is_some() {
                    return Err(ValidationError::CellDuplicateFace {
                        cell: cid as CellId,
                        face: f,
                    });
                }
            }
        }
        Ok(())
    }

    fn check_faces(&self) -> Result<(), ValidationError> {
        self.check_references()?;
        for (fid, face) in self.faces.iter().enumerate() {
            let fid = fid as FaceId;
            if face.walk.is_empty() {
                return Err(ValidationError::FaceEmpty { face: fid });
            }
            let mut wrap = [0i32; 3];
            for (k, &step) in face.walk.iter().enumerate() {
                let next = face.walk[(k + 1) % face.walk.len()];
                if self.step_head(step) != self.step_tail(next) {
                    return Err(ValidationError::FaceWalkBroken { face: fid, step: k });
                }
                let w = self.step_wrap(step);
                for a in 0..3 {
                    wrap[a] += w[a];
                }
            }
            if wrap != [0; 3] {
                return Err(ValidationError::FaceWrapNonzero { face: fid, wrap });
            }
        }
        Ok(())
    }

    fn check_cells(&self) -> Result<(), ValidationError> {
        self.check_references()?;
        for cid in 0..self.cells.len() {
            self.validate_cell_surface(cid as CellId)?;
        }
        Ok(())
    }

    fn check_face_ownership(&self) -> Result<(), ValidationError> {
        self.check_references()?;
        for (fid, owners) in self.face_cells().iter().enumerate() {
            if owners.len() != 2 {
                return Err(ValidationError::FaceCellCount {
                    face: fid as FaceId,
                    count: owners.len() as u32,
                });
            }
        }
        Ok(())
    }

    fn check_euler(&self) -> Result<(), ValidationError> {
        let chi = self.euler_characteristic();
        if chi != 0 {
            return Err(ValidationError::EulerCharacteristic {
                v: self.vertex_count(),
                e: self.edge_count(),
                f: self.face_count(),
                c: self.cell_count(),
                chi,
            });
        }
        Ok(())
    }

    fn validate_cell_surface(&self, cid: CellId) -> Result<(), ValidationError> {
        let cell = &self.cells[cid as usize];
        // Each edge of the cell must be used by exactly two face slots.
        let mut uses: HashMap<EdgeId, u32> = HashMap::new();
        for &f in &cell.faces {
            for step in &self.faces[f as usize].walk {
                *uses.entry(step.edge).or_insert(0) += 1;
            }
        }
        for (&edge, &count) in &uses {
            if count != 2 {
                return Err(ValidationError::CellOpenEdge { cell: cid, edge, count });
            }
        }

        // Connectivity of the surface: faces joined by shared edges.
        let nf = cell.faces.len();
        let mut dsu = SmallDsu::new(nf);
        let mut edge_face: HashMap<EdgeId, usize> = HashMap::new();
        for (i, &f) in cell.faces.iter().enumerate() {
            for step in &self.faces[f as usize].walk {
                match edge_face.entry(step.edge) {
                    std::collections::hash_map::Entry::Occupied(o) => {
                        dsu.union(*o.get(), i);
                    }
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(i);
                    }
                }
            }
        }
        let root = dsu.find(0);
        if (1..nf).any(|i| dsu.find(i) != root) {
            return Err(ValidationError::CellSurfaceDisconnected { cell: cid });
        }

        // Sphere check: V - E + F = 2 over the distinct elements of the surface.
        let mut verts = std::collections::HashSet::new();
        for &f in &cell.faces {
            for &step in &self.faces[f as usize].walk {
                verts.insert(self.step_tail(step));
            }
        }
        let chi = verts.len() as i64 - uses.len() as i64 + nf as i64;
        if chi != 2 {
            return Err(ValidationError::CellNotSphere { cell: cid, chi });
        }
        Ok(())
    }

    fn validate_edge_links(&self) -> Result<(), ValidationError> {
        // Around each edge, face slots pair up within each incident cell;
        // the pairing must join all slots into one cycle.
        let slots = self.edge_face_slots();
        let face_cells = self.face_cells();
        // cell -> (edge -> slot indices) would be large; go cell by cell.
        let mut slot_index: HashMap<(FaceId, usize), usize> = HashMap::new();
        let mut per_edge_cells: Vec<HashMap<CellId, Vec<usize>>> =
            vec![HashMap::new(); self.edges.len()];
        for (eid, eslots) in slots.iter().enumerate() {
            slot_index.clear();
            for (i, &(f, k)) in eslots.iter().enumerate() {
                slot_index.insert((f, k), i);
                for &c in &face_cells[f as usize] {
                    per_edge_cells[eid].entry(c).or_default().push(i);
                }
            }
        }
        for (eid, cells) in per_edge_cells.iter().enumerate() {
            let n = slots[eid].len();
            if n == 0 {
                continue;
            }
            let mut dsu = SmallDsu::new(n);
            for pair in cells.values() {
                // Cell closure already guarantees exactly two slots here.
                if pair.len() == 2 {
                    dsu.union(pair[0], pair[1]);
                }
            }
            let root = dsu.find(0);
            if (1..n).any(|i| dsu.find(i) != root) {
                return Err(ValidationError::EdgeLinkDisconnected { edge: eid as EdgeId });
            }
        }
        Ok(())
    }
}

/// Reduce a rational coordinate into `[0, L)`.
pub(crate) fn reduce_mod(x: Rational64, l: i64) -> Rational64 {
    let l = Rational64::from_integer(l);
    let q = (x / l).floor();
    x - q * l
}

/// Integer quotient `(x - reduce_mod(x, L)) / L`.
pub(crate) fn wrap_quotient(x: Rational64, l: i64) -> i64 {
    let l = Rational64::from_integer(l);
    (x / l).floor().to_integer()
}

pub(crate) fn rat(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

/// Minimal union-find used by validation and peeling helpers.
pub(crate) struct SmallDsu {
    parent: Vec<usize>,
}

impl SmallDsu {
    pub fn new(n: usize) -> Self {
        SmallDsu { parent: (0..n).collect() }
    }
    pub fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }
    /// Returns true when the two elements were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::{cubic, LatticeKind, LatticeSpec};

    #[test]
    fn cubic_counts() {
        for l in [2u32, 3, 4] {
            let c = cubic(l);
            let n = (l as usize).pow(3);
            assert_eq!(c.vertex_count(), n);
            assert_eq!(c.edge_count(), 3 * n);
            assert_eq!(c.face_count(), 3 * n);
            assert_eq!(c.cell_count(), n);
            assert_eq!(c.euler_characteristic(), 0);
            c.validate().unwrap();
        }
    }

    #[test]
    fn cubic_edge_valence_is_four() {
        let c = cubic(3);
        assert!(c.edge_valences().iter().all(|&z| z == 4));
    }

    #[test]
    fn validation_rejects_small_size() {
        let mut c = cubic(2);
        c.size = 1;
        assert!(matches!(c.validate(), Err(ValidationError::SizeTooSmall { .. })));
    }

    #[test]
    fn validation_reports_missing_face_owner() {
        let mut c = cubic(2);
        // Drop one face from its first cell: that face now has one owner and
        // the cell is no longer closed.
        let f = c.cells[0].faces[0];
        c.cells[0].faces.retain(|&x| x != f);
        let err = c.validate().unwrap_err();
        assert!(matches!(
            err,
            ValidationError::CellOpenEdge { cell: 0, .. } | ValidationError::FaceCellCount { .. }
        ));
    }

    #[test]
    fn validation_reports_broken_walk() {
        let mut c = cubic(2);
        c.faces[5].walk.swap(1, 2);
        let err = c.validate().unwrap_err();
        assert!(matches!(err, ValidationError::FaceWalkBroken { face: 5, .. }));
    }

    #[test]
    fn euler_characteristic_all_lattices() {
        for kind in [
            LatticeKind::Cubic,
            LatticeKind::Diamond,
            LatticeKind::Triamond,
            LatticeKind::DoubledEdgeCubic,
        ] {
            let c = crate::lattices::generate(&LatticeSpec { kind, size: 2 }).unwrap();
            assert_eq!(c.euler_characteristic(), 0, "{kind:?}");
        }
    }
}
