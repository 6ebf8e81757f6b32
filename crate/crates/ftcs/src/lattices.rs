//! The four bundled lattices on L x L x L periodic tori.
//!
//! `cubic` is built directly. The other three come from the splitting
//! transforms, following the constructions the splits were designed for:
//!
//! * diamond: split every cell of the cubic complex with a corner partition
//!   (two 4-valent children), dualize, split every cell of the dual the same
//!   way. Both skeletons are the degree-4 diamond graph with hexagonal faces.
//! * triamond: the same pipeline with 3-splits over adjacent face pairs,
//!   giving the degree-3 triamond (Laves / K4) graph with decagonal faces.
//! * doubled-edge cubic: subdivide every edge, dualize, subdivide every edge
//!   again. Faces are octagonal; cells are the original cubes plus two-face
//!   bubble cells, and the skeleton mixes degree-6 and degree-2 vertices.
//!
//! Hand-coded adjacency fixtures for the three derived lattices live in
//! [`fixtures`] and serve as independent oracles for the pipelines.

use crate::cell_complex::{
    rat, reduce_mod, Cell, CellComplex3, CellId, Edge, EdgeId, Face, FaceId, FaceStep, GraphEdge,
    SyndromeGraph, ValidationError, Vertex, VertexId,
};
use crate::splitting::{n_split, split_cell, subdivide_edge, SplitError, SplitInstruction, Subdivision};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeKind {
    Cubic,
    Diamond,
    Triamond,
    DoubledEdgeCubic,
}

impl LatticeKind {
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Cubic => "cubic",
            LatticeKind::Diamond => "diamond",
            LatticeKind::Triamond => "triamond",
            LatticeKind::DoubledEdgeCubic => "doubled-edge",
        }
    }

    pub const ALL: [LatticeKind; 4] = [
        LatticeKind::Cubic,
        LatticeKind::Diamond,
        LatticeKind::Triamond,
        LatticeKind::DoubledEdgeCubic,
    ];
}

impl std::str::FromStr for LatticeKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cubic" => Ok(LatticeKind::Cubic),
            "diamond" => Ok(LatticeKind::Diamond),
            "triamond" => Ok(LatticeKind::Triamond),
            "doubled-edge" | "doubled_edge" | "doubled_edge_cubic" => {
                Ok(LatticeKind::DoubledEdgeCubic)
            }
            other => Err(format!(
                "unknown lattice '{other}' (expected cubic, diamond, triamond, doubled-edge)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    /// Original cubic unit cells per side, for all four lattices.
    pub size: u32,
}

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("L must be >= 2, got {0}")]
    SizeTooSmall(u32),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

/// Generate a bundled lattice. The result passes every complex invariant.
pub fn generate(spec: &LatticeSpec) -> Result<CellComplex3, LatticeError> {
    if spec.size < 2 {
        return Err(LatticeError::SizeTooSmall(spec.size));
    }
    let l = spec.size;
    let complex = match spec.kind {
        LatticeKind::Cubic => cubic(l),
        LatticeKind::Diamond => diamond(l)?,
        LatticeKind::Triamond => triamond(l)?,
        LatticeKind::DoubledEdgeCubic => doubled_edge(l)?,
    };
    complex.validate()?;
    Ok(complex)
}

struct CubicIndex {
    l: i64,
}

impl CubicIndex {
    fn vertex(&self, x: i64, y: i64, z: i64) -> u32 {
        let l = self.l;
        let m = |t: i64| t.rem_euclid(l);
        ((m(z) * l + m(y)) * l + m(x)) as u32
    }
    fn edge(&self, x: i64, y: i64, z: i64, axis: usize) -> u32 {
        3 * self.vertex(x, y, z) + axis as u32
    }
    /// Planes: 0 = xy, 1 = yz, 2 = zx; the face at (x,y,z) spans the plane's
    /// two axes from that corner.
    fn face(&self, x: i64, y: i64, z: i64, plane: usize) -> u32 {
        3 * self.vertex(x, y, z) + plane as u32
    }
}

/// The cubic complex: L^3 vertices, 3L^3 edges and faces, L^3 cells.
pub fn cubic(l: u32) -> CellComplex3 {
    assert!(l >= 2, "cubic lattice needs L >= 2");
    let li = l as i64;
    let ix = CubicIndex { l: li };
    let n = (li * li * li) as usize;

    // Vertex ids follow x fastest, then y, then z.
    let mut vertices = vec![Vertex { pos: [rat(0); 3] }; n];
    for z in 0..li {
        for y in 0..li {
            for x in 0..li {
                vertices[ix.vertex(x, y, z) as usize] = Vertex { pos: [rat(x), rat(y), rat(z)] };
            }
        }
    }

    let unit = |axis: usize| -> [i64; 3] {
        let mut u = [0i64; 3];
        u[axis] = 1;
        u
    };

    let mut edges = vec![Edge { ends: [0, 0], wrap: [0; 3] }; 3 * n];
    for z in 0..li {
        for y in 0..li {
            for x in 0..li {
                for axis in 0..3 {
                    let u = unit(axis);
                    let (nx, ny, nz) = (x + u[0], y + u[1], z + u[2]);
                    let mut wrap = [0i8; 3];
                    if [nx, ny, nz][axis] == li {
                        wrap[axis] = 1;
                    }
                    edges[ix.edge(x, y, z, axis) as usize] =
                        Edge { ends: [ix.vertex(x, y, z), ix.vertex(nx, ny, nz)], wrap };
                }
            }
        }
    }

    // plane p spans axes (a, b): (0,1), (1,2), (2,0).
    let plane_axes = [(0usize, 1usize), (1, 2), (2, 0)];
    let mut faces = vec![Face { walk: Vec::new() }; 3 * n];
    for z in 0..li {
        for y in 0..li {
            for x in 0..li {
                for (p, &(a, b)) in plane_axes.iter().enumerate() {
                    let ua = unit(a);
                    let ub = unit(b);
                    let walk = vec![
                        FaceStep::fwd(ix.edge(x, y, z, a)),
                        FaceStep::fwd(ix.edge(x + ua[0], y + ua[1], z + ua[2], b)),
                        FaceStep::rev(ix.edge(x + ub[0], y + ub[1], z + ub[2], a)),
                        FaceStep::rev(ix.edge(x, y, z, b)),
                    ];
                    faces[ix.face(x, y, z, p) as usize] = Face { walk };
                }
            }
        }
    }

    let mut cells = vec![Cell { faces: Vec::new() }; n];
    for z in 0..li {
        for y in 0..li {
            for x in 0..li {
                let mut fs = vec![
                    ix.face(x, y, z, 0),         // bottom (xy)
                    ix.face(x, y, z + 1, 0),     // top
                    ix.face(x, y, z, 1),         // west (yz)
                    ix.face(x + 1, y, z, 1),     // east
                    ix.face(x, y, z, 2),         // south (zx)
                    ix.face(x, y + 1, z, 2),     // north
                ];
                fs.sort_unstable();
                cells[ix.vertex(x, y, z) as usize] = Cell { faces: fs };
            }
        }
    }

    CellComplex3 { size: l, vertices, edges, faces, cells }
}

fn cell_coords(l: i64, cell: CellId) -> (i64, i64, i64) {
    let c = cell as i64;
    (c % l, (c / l) % l, c / (l * l))
}

/// Corner partition of a cubic cell's six faces: {top, north, east} against
/// {bottom, south, west}. Splitting every cell this way halves the dual
/// degree from 6 to 4 and is the first stage of the diamond pipeline.
pub fn cubic_cell_corner_partition(complex: &CellComplex3, cell: CellId) -> Vec<Vec<FaceId>> {
    let l = complex.size as i64;
    let ix = CubicIndex { l };
    let (x, y, z) = cell_coords(l, cell);
    vec![
        vec![ix.face(x, y, z + 1, 0), ix.face(x + 1, y, z, 1), ix.face(x, y + 1, z, 2)],
        vec![ix.face(x, y, z, 0), ix.face(x, y, z, 1), ix.face(x, y, z, 2)],
    ]
}

/// Adjacent-pair partition for the triamond 3-split: {east, north},
/// {west, top}, {south, bottom}. Every cube edge then straddles parts in
/// exactly three of its four cells, which is what makes all faces decagonal.
pub fn cubic_cell_pair_partition(complex: &CellComplex3, cell: CellId) -> Vec<Vec<FaceId>> {
    let l = complex.size as i64;
    let ix = CubicIndex { l };
    let (x, y, z) = cell_coords(l, cell);
    vec![
        vec![ix.face(x + 1, y, z, 1), ix.face(x, y + 1, z, 2)],
        vec![ix.face(x, y, z, 1), ix.face(x, y, z + 1, 0)],
        vec![ix.face(x, y, z, 2), ix.face(x, y, z, 0)],
    ]
}

/// Edges at a cubic vertex split as outgoing {+x,+y,+z} vs incoming
/// {-x,-y,-z}: the corner split in the dual picture.
fn cubic_vertex_corner_parts(l: i64, v: VertexId) -> Vec<Vec<EdgeId>> {
    let ix = CubicIndex { l };
    let (x, y, z) = cell_coords(l, v);
    vec![
        vec![ix.edge(x, y, z, 0), ix.edge(x, y, z, 1), ix.edge(x, y, z, 2)],
        vec![ix.edge(x - 1, y, z, 0), ix.edge(x, y - 1, z, 1), ix.edge(x, y, z - 1, 2)],
    ]
}

/// Edge pairs at a cubic vertex for the triamond 3-split: {-x,-y}, {+y,+z},
/// {+x,-z}. These are the pairs whose dual faces share five corners after
/// the first-stage split, which is what keeps every face decagonal.
fn cubic_vertex_pair_parts(l: i64, v: VertexId) -> Vec<Vec<EdgeId>> {
    let ix = CubicIndex { l };
    let (x, y, z) = cell_coords(l, v);
    vec![
        vec![ix.edge(x - 1, y, z, 0), ix.edge(x, y - 1, z, 1)],
        vec![ix.edge(x, y, z, 1), ix.edge(x, y, z, 2)],
        vec![ix.edge(x, y, z, 0), ix.edge(x, y, z - 1, 2)],
    ]
}

fn cell_center(l: i64, cell: CellId) -> [Rational64; 3] {
    let (x, y, z) = cell_coords(l, cell);
    let half = Rational64::new(1, 2);
    [rat(x) + half, rat(y) + half, rat(z) + half]
}

fn diamond(l: u32) -> Result<CellComplex3, LatticeError> {
    let li = l as i64;
    let n = (li * li * li) as u32;

    // Stage 1: dual split. Add a bisecting face to every cubic cell.
    let mut c1 = cubic(l);
    for cell in 0..n {
        let parts = cubic_cell_corner_partition(&c1, cell);
        c1 = split_cell(&c1, &SplitInstruction { cell, parts })?;
    }
    let mut d = crate::cell_complex::dual_complex(&c1)?;
    // Split children of the cube-center vertices sit at center +- 1/8 along z.
    for cell in 0..n {
        let center = cell_center(li, cell);
        let eighth = Rational64::new(1, 8);
        let mut up = center;
        up[2] = reduce_mod(up[2] + eighth, li);
        let mut down = center;
        down[2] = reduce_mod(down[2] - eighth, li);
        d.vertices[cell as usize].pos = up;
        d.vertices[(n + cell) as usize].pos = down;
    }

    // Stage 2: primal split. The dual's cells are the original cubic
    // vertices; their faces are, index for index, the cubic edges.
    for v in 0..n {
        let parts = cubic_vertex_corner_parts(li, v);
        d = split_cell(&d, &SplitInstruction { cell: v, parts })?;
    }
    Ok(d)
}

fn triamond(l: u32) -> Result<CellComplex3, LatticeError> {
    let li = l as i64;
    let n = (li * li * li) as u32;

    let mut c1 = cubic(l);
    for cell in 0..n {
        let parts = cubic_cell_pair_partition(&c1, cell);
        c1 = n_split(&c1, &SplitInstruction { cell, parts })?;
    }
    let mut d = crate::cell_complex::dual_complex(&c1)?;
    for cell in 0..n {
        let center = cell_center(li, cell);
        let eighth = |k: i64| Rational64::new(k, 8);
        // Peripheral children of the 3-split step up in z; central keeps the
        // cube center.
        let mut peripheral = [center; 3];
        for (i, p) in peripheral.iter_mut().enumerate() {
            p[2] = reduce_mod(p[2] + eighth(1 + i as i64), li);
        }
        d.vertices[cell as usize].pos = peripheral[0];
        d.vertices[(n + 3 * cell) as usize].pos = peripheral[1];
        d.vertices[(n + 3 * cell + 1) as usize].pos = peripheral[2];
        d.vertices[(n + 3 * cell + 2) as usize].pos = center;
    }
    for v in 0..n {
        let parts = cubic_vertex_pair_parts(li, v);
        d = n_split(&d, &SplitInstruction { cell: v, parts })?;
    }
    Ok(d)
}

fn doubled_edge(l: u32) -> Result<CellComplex3, LatticeError> {
    let li = l as i64;
    let ne = (3 * li * li * li) as u32;

    let mut c1 = cubic(l);
    for e in 0..ne {
        c1 = subdivide_edge(&c1, &Subdivision { edge: e, segments: 2 })?;
    }
    let mut d = crate::cell_complex::dual_complex(&c1)?;
    for e in 0..ne {
        d = subdivide_edge(&d, &Subdivision { edge: e, segments: 2 })?;
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl std::str::FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(format!("unknown axis '{other}'")),
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// A fixed homologically nontrivial cocycle: all edges whose cut-crossing
/// component along the axis is odd. Residual error parity on the cut detects
/// logical failure.
#[derive(Debug, Clone)]
pub struct LogicalCut {
    pub axis: Axis,
    /// Membership mask over the graph's edge ids.
    pub mask: Vec<bool>,
    pub edge_ids: Vec<EdgeId>,
}

/// Extract the logical cut for an axis. Panics if the cut is empty: a
/// generated periodic complex always crosses every cut plane, so an empty cut
/// is a generation bug.
pub fn logical_cut(graph: &SyndromeGraph, axis: Axis) -> LogicalCut {
    let a = axis.index();
    let mut mask = vec![false; graph.edges.len()];
    let mut edge_ids = Vec::new();
    for (i, e) in graph.edges.iter().enumerate() {
        if e.crossing[a] % 2 != 0 {
            mask[i] = true;
            edge_ids.push(i as EdgeId);
        }
    }
    assert!(
        !edge_ids.is_empty(),
        "logical cut along {axis} is empty: generation bug in the syndrome graph"
    );
    LogicalCut { axis, mask, edge_ids }
}

/// Vertex-degree histogram and mean degree of a syndrome graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub histogram: BTreeMap<u32, u32>,
    pub mean: f64,
}

pub fn degree_report(graph: &SyndromeGraph) -> DegreeReport {
    let mut histogram = BTreeMap::new();
    for v in 0..graph.vertex_count {
        *histogram.entry(graph.degree(v) as u32).or_insert(0) += 1;
    }
    let mean = 2.0 * graph.edge_count() as f64 / graph.vertex_count as f64;
    DegreeReport { histogram, mean }
}

impl std::fmt::Display for DegreeReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, (d, n)) in self.histogram.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}: {n}")?;
        }
        write!(f, "}} mean {}", self.mean)
    }
}

/// Hand-coded adjacency oracles for the derived lattices. These are written
/// directly from the known structure of each graph, independent of the
/// splitting machinery, and are compared against the pipelines by
/// isomorphism. Crossing vectors and valences are not populated.
pub mod fixtures {
    use super::*;

    fn bare(ends: [u32; 2]) -> GraphEdge {
        GraphEdge { ends, crossing: [0; 3], valence: 0 }
    }

    fn torus(l: i64) -> impl Fn(i64, i64, i64) -> u32 {
        move |x: i64, y: i64, z: i64| {
            let m = |t: i64| t.rem_euclid(l);
            ((m(z) * l + m(y)) * l + m(x)) as u32
        }
    }

    /// Diamond: two sublattices A, B on the cubic torus; A(v) bonds to B(v),
    /// B(v+x), B(v+y), B(v+z).
    pub fn diamond_graph(l: u32) -> SyndromeGraph {
        let li = l as i64;
        let n = (li * li * li) as u32;
        let v = torus(li);
        let mut edges = Vec::new();
        for z in 0..li {
            for y in 0..li {
                for x in 0..li {
                    let a = v(x, y, z);
                    for (dx, dy, dz) in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)] {
                        edges.push(bare([a, n + v(x + dx, y + dy, z + dz)]));
                    }
                }
            }
        }
        SyndromeGraph::new(l, 2 * n, edges)
    }

    /// Triamond (Laves / K4): a central vertex c(v) joined to three
    /// peripherals, with p1(v)-p2(v+x), p1(v)-p3(v+y), p2(v)-p3(v+z).
    pub fn triamond_graph(l: u32) -> SyndromeGraph {
        let li = l as i64;
        let n = (li * li * li) as u32;
        let v = torus(li);
        let (p1, p2, p3) = (n, 2 * n, 3 * n);
        let mut edges = Vec::new();
        for z in 0..li {
            for y in 0..li {
                for x in 0..li {
                    let c = v(x, y, z);
                    edges.push(bare([c, p1 + c]));
                    edges.push(bare([c, p2 + c]));
                    edges.push(bare([c, p3 + c]));
                    edges.push(bare([p1 + c, p2 + v(x + 1, y, z)]));
                    edges.push(bare([p1 + c, p3 + v(x, y + 1, z)]));
                    edges.push(bare([p2 + c, p3 + v(x, y, z + 1)]));
                }
            }
        }
        SyndromeGraph::new(l, 4 * n, edges)
    }

    /// Doubled-edge cubic: the cubic graph with a midpoint vertex on every
    /// edge.
    pub fn doubled_edge_graph(l: u32) -> SyndromeGraph {
        let li = l as i64;
        let n = (li * li * li) as u32;
        let v = torus(li);
        let mut edges = Vec::new();
        for z in 0..li {
            for y in 0..li {
                for x in 0..li {
                    let c = v(x, y, z);
                    for (a, (dx, dy, dz)) in [(0, (1, 0, 0)), (1, (0, 1, 0)), (2, (0, 0, 1))] {
                        let mid = n + 3 * c + a;
                        edges.push(bare([c, mid]));
                        edges.push(bare([mid, v(x + dx, y + dy, z + dz)]));
                    }
                }
            }
        }
        SyndromeGraph::new(l, 4 * n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_complex::{extract_syndrome_graph, Side};

    #[test]
    fn generate_rejects_l1() {
        let err = generate(&LatticeSpec { kind: LatticeKind::Cubic, size: 1 }).unwrap_err();
        assert!(err.to_string().contains("L must be >= 2"));
    }

    #[test]
    fn cubic_l3_counts() {
        let c = generate(&LatticeSpec { kind: LatticeKind::Cubic, size: 3 }).unwrap();
        assert_eq!(
            (c.vertex_count(), c.edge_count(), c.face_count(), c.cell_count()),
            (27, 81, 81, 27)
        );
    }

    #[test]
    fn diamond_l2_structure() {
        let c = generate(&LatticeSpec { kind: LatticeKind::Diamond, size: 2 }).unwrap();
        assert_eq!(c.vertex_count(), 16);
        assert_eq!(c.edge_count(), 32);
        assert!(c.faces.iter().all(|f| f.walk.len() == 6), "all faces hexagonal");
        assert!(c.cells.iter().all(|cl| cl.faces.len() == 4), "all cells have 4 faces");
        assert!(c.edge_valences().iter().all(|&z| z == 6));
        let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
        assert!((0..g.vertex_count).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn diamond_l3_faces_and_cells() {
        let c = generate(&LatticeSpec { kind: LatticeKind::Diamond, size: 3 }).unwrap();
        assert!(c.faces.iter().all(|f| f.walk.len() == 6));
        assert!(c.cells.iter().all(|cl| cl.faces.len() == 4));
    }

    #[test]
    fn triamond_l2_structure() {
        let c = generate(&LatticeSpec { kind: LatticeKind::Triamond, size: 2 }).unwrap();
        assert_eq!(c.vertex_count(), 32);
        assert_eq!(c.edge_count(), 48);
        assert!(c.faces.iter().all(|f| f.walk.len() == 10), "all faces decagonal");
        assert!(c.cells.iter().all(|cl| cl.faces.len() == 3), "all cells have 3 faces");
        assert!(c.edge_valences().iter().all(|&z| z == 10));
        let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
        assert!((0..g.vertex_count).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn doubled_edge_l3_structure() {
        let c = generate(&LatticeSpec { kind: LatticeKind::DoubledEdgeCubic, size: 3 }).unwrap();
        assert!(c.faces.iter().all(|f| f.walk.len() == 8), "all faces octagonal");
        let six: usize = c.cells.iter().filter(|cl| cl.faces.len() == 6).count();
        let two: usize = c.cells.iter().filter(|cl| cl.faces.len() == 2).count();
        assert_eq!((six, two), (27, 81));
        assert!(c.edge_valences().iter().all(|&z| z == 8));
    }

    #[test]
    fn syndrome_graph_sizes_at_l4() {
        let cases = [
            (LatticeKind::Cubic, 64, 192, vec![(6u32, 64u32)]),
            (LatticeKind::Diamond, 128, 256, vec![(4, 128)]),
            (LatticeKind::Triamond, 256, 384, vec![(3, 256)]),
        ];
        for (kind, nv, ne, hist) in cases {
            let c = generate(&LatticeSpec { kind, size: 4 }).unwrap();
            let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
            assert_eq!(g.vertex_count as usize, nv, "{kind:?}");
            assert_eq!(g.edge_count(), ne, "{kind:?}");
            let report = degree_report(&g);
            assert_eq!(report.histogram.into_iter().collect::<Vec<_>>(), hist, "{kind:?}");
        }
    }

    #[test]
    fn degree_reports_at_l2() {
        let expected: [(LatticeKind, Vec<(u32, u32)>, f64); 4] = [
            (LatticeKind::Cubic, vec![(6, 8)], 6.0),
            (LatticeKind::Diamond, vec![(4, 16)], 4.0),
            (LatticeKind::Triamond, vec![(3, 32)], 3.0),
            (LatticeKind::DoubledEdgeCubic, vec![(2, 24), (6, 8)], 3.0),
        ];
        for (kind, hist, mean) in expected {
            let c = generate(&LatticeSpec { kind, size: 2 }).unwrap();
            let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
            let report = degree_report(&g);
            assert_eq!(report.histogram.into_iter().collect::<Vec<_>>(), hist, "{kind:?}");
            assert_eq!(report.mean, mean, "{kind:?}");
        }
    }

    #[test]
    fn cubic_l4_cut_has_16_edges() {
        let c = cubic(4);
        let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
        let cut = logical_cut(&g, Axis::X);
        assert_eq!(cut.edge_ids.len(), 16);
    }

    #[test]
    fn diamond_cut_is_a_cocycle() {
        let c = generate(&LatticeSpec { kind: LatticeKind::Diamond, size: 2 }).unwrap();
        let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
        let cut = logical_cut(&g, Axis::Z);
        for face in &c.faces {
            let crossings =
                face.walk.iter().filter(|s| cut.mask[s.edge as usize]).count();
            assert_eq!(crossings % 2, 0, "cut must cross each face boundary evenly");
        }
    }

    #[test]
    fn doubled_edge_cut_takes_one_half_per_subdivided_edge() {
        // Exactly one of the two halves of each crossing edge carries the
        // crossing: the halves' crossings sum to the parent edge's crossing.
        let c = generate(&LatticeSpec { kind: LatticeKind::DoubledEdgeCubic, size: 2 }).unwrap();
        let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
        let cut = logical_cut(&g, Axis::X);
        assert_eq!(cut.edge_ids.len(), 4); // L^2 crossing pairs, one half each
        // Every cut edge is incident to exactly one degree-2 midpoint vertex.
        for &e in &cut.edge_ids {
            let ends = g.edges[e as usize].ends;
            let degs = [g.degree(ends[0]), g.degree(ends[1])];
            assert!(degs.contains(&2) && degs.contains(&6));
        }
    }

    #[test]
    fn pipelines_match_fixture_graphs_at_l2() {
        use crate::cell_complex::iso::syndrome_graphs_isomorphic;
        let pairs: [(LatticeKind, SyndromeGraph); 3] = [
            (LatticeKind::Diamond, fixtures::diamond_graph(2)),
            (LatticeKind::Triamond, fixtures::triamond_graph(2)),
            (LatticeKind::DoubledEdgeCubic, fixtures::doubled_edge_graph(2)),
        ];
        for (kind, fixture) in pairs {
            let c = generate(&LatticeSpec { kind, size: 2 }).unwrap();
            let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
            assert!(syndrome_graphs_isomorphic(&g, &fixture), "{kind:?} pipeline vs fixture");
        }
    }
}
