//! Vertex splitting and edge subdivision as cell-complex transforms.
//!
//! A simple split divides one cell into two by inserting a new face along a
//! closed interface cycle; seen from the dual complex, it replaces a vertex
//! by two vertices joined by a new edge. An n-split composes n simple splits,
//! turning one vertex into a degree-n central vertex with n peripheral
//! vertices. Edge subdivision inserts degree-2 vertices along an edge; in the
//! dual it duplicates the faces around the edge and adds bubble cells.
//!
//! Splits are specified in the cell picture (a cell plus a partition of its
//! faces). [`split_vertex`] converts the dual-picture form (a vertex plus a
//! partition of its incident edges) by dualizing, splitting, and dualizing
//! back. All transforms are pure: the input complex is never modified.

use crate::cell_complex::{
    dual_complex, iso::complexes_isomorphic, rat, reduce_mod, wrap_quotient, Cell, CellComplex3,
    CellId, Edge, EdgeId, Face, FaceId, FaceStep, Orientation, SmallDsu, ValidationError, Vertex,
    VertexId,
};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// A cell split: partition of the target cell's faces into `n >= 2` parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitInstruction {
    pub cell: CellId,
    pub parts: Vec<Vec<FaceId>>,
}

/// The dual-picture form: partition of the edges at a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSplit {
    pub vertex: VertexId,
    pub parts: Vec<Vec<EdgeId>>,
}

/// Subdivide an edge into `segments >= 2` pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdivision {
    pub edge: EdgeId,
    pub segments: u32,
}

#[derive(Debug, Error)]
pub enum SplitError {
    #[error("unknown cell {0}")]
    UnknownCell(CellId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("a split needs at least two parts, got {0}")]
    TooFewParts(usize),
    #[error("part {0} of the partition is empty")]
    EmptyPart(usize),
    #[error("partition does not match the faces of cell {cell}")]
    PartitionMismatch { cell: CellId },
    #[error("partition does not match the edges at vertex {vertex}")]
    EdgePartitionMismatch { vertex: VertexId },
    #[error("invalid split: part {0} is not edge-connected")]
    DisconnectedPart(usize),
    #[error("invalid split: interface between the parts is not a single closed cycle")]
    InterfaceNotSingleCycle,
    #[error("invalid split: cell {0} surface is not coherently orientable")]
    NotOrientable(CellId),
    #[error("vertex {0} carries a self-loop, which splits do not support")]
    SelfLoopAtVertex(VertexId),
    #[error("subdivision needs at least 2 segments, got {0}")]
    SegmentsTooFew(u32),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

/// Divide one cell into two along the interface of a 2-part face partition.
///
/// The primal 1-skeleton and all existing faces are untouched: the result
/// gains exactly one face (the interface cycle) and one cell. The first part
/// keeps the split cell's id; the second part's cell is appended.
pub fn split_cell(complex: &CellComplex3, instr: &SplitInstruction) -> Result<CellComplex3, SplitError> {
    if instr.parts.len() != 2 {
        return Err(SplitError::TooFewParts(instr.parts.len()));
    }
    let cell = instr.cell;
    if cell as usize >= complex.cells.len() {
        return Err(SplitError::UnknownCell(cell));
    }
    check_partition(&complex.cells[cell as usize].faces, &instr.parts, cell)?;

    let part_of = part_index(&instr.parts);
    let slots = cell_edge_slots(complex, cell);

    // Parts must be connected through shared edges.
    check_part_connectivity(&instr.parts, &slots, &part_of)?;

    // Interface edges: the two slots fall in different parts.
    let mut interface: Vec<(EdgeId, FaceId)> = Vec::new(); // (edge, part-0 face)
    for (&edge, pair) in &slots {
        let p0 = part_of[&pair[0].0];
        let p1 = part_of[&pair[1].0];
        if p0 != p1 {
            let a_face = if p0 == 0 { pair[0].0 } else { pair[1].0 };
            interface.push((edge, a_face));
        }
    }
    if interface.is_empty() {
        return Err(SplitError::InterfaceNotSingleCycle);
    }
    interface.sort_unstable();

    let new_walk = interface_walk(complex, cell, &interface, &slots)?;

    let mut out = complex.clone();
    let new_face: FaceId = out.faces.len() as u32;
    out.faces.push(Face { walk: new_walk });
    let mut faces_a = instr.parts[0].clone();
    faces_a.push(new_face);
    faces_a.sort_unstable();
    let mut faces_b = instr.parts[1].clone();
    faces_b.push(new_face);
    faces_b.sort_unstable();
    out.cells[cell as usize] = Cell { faces: faces_a };
    out.cells.push(Cell { faces: faces_b });
    Ok(out)
}

/// Compose `n` simple splits: each part is split off in turn, the central
/// cell (bounded by the new faces alone) emerging last. `n = 2` coincides
/// with [`split_cell`].
pub fn n_split(complex: &CellComplex3, instr: &SplitInstruction) -> Result<CellComplex3, SplitError> {
    let n = instr.parts.len();
    if n < 2 {
        return Err(SplitError::TooFewParts(n));
    }
    for (i, p) in instr.parts.iter().enumerate() {
        if p.is_empty() {
            return Err(SplitError::EmptyPart(i));
        }
    }
    if n == 2 {
        return split_cell(complex, instr);
    }
    if instr.cell as usize >= complex.cells.len() {
        return Err(SplitError::UnknownCell(instr.cell));
    }
    check_partition(&complex.cells[instr.cell as usize].faces, &instr.parts, instr.cell)?;

    let mut current = complex.clone();
    let mut rest_cell = instr.cell;
    let mut rest_faces: Vec<FaceId> = complex.cells[instr.cell as usize].faces.clone();
    for part in &instr.parts[..n - 1] {
        let remainder: Vec<FaceId> =
            rest_faces.iter().copied().filter(|f| !part.contains(f)).collect();
        let step = SplitInstruction {
            cell: rest_cell,
            parts: vec![part.clone(), remainder.clone()],
        };
        current = split_cell(&current, &step)?;
        let new_face = (current.faces.len() - 1) as FaceId;
        rest_cell = (current.cells.len() - 1) as CellId;
        rest_faces = remainder;
        rest_faces.push(new_face);
    }
    // Split the final part off the accumulated remainder; what is left is the
    // central cell of new faces only.
    let last = &instr.parts[n - 1];
    let remainder: Vec<FaceId> = rest_faces.iter().copied().filter(|f| !last.contains(f)).collect();
    let step = SplitInstruction { cell: rest_cell, parts: vec![last.clone(), remainder] };
    split_cell(&current, &step)
}

/// Replace an edge by a path of `segments` edges through new degree-2
/// vertices placed along it. In the dual this duplicates the faces around the
/// edge, creating bubble cells. The first segment keeps the edge's id.
pub fn subdivide_edge(complex: &CellComplex3, sub: &Subdivision) -> Result<CellComplex3, SplitError> {
    let eid = sub.edge;
    if eid as usize >= complex.edges.len() {
        return Err(SplitError::UnknownEdge(eid));
    }
    let n = sub.segments;
    if n < 2 {
        return Err(SplitError::SegmentsTooFew(n));
    }
    let l = complex.size as i64;
    let edge = complex.edges[eid as usize].clone();
    let pos_u = complex.vertices[edge.ends[0] as usize].pos;
    let pos_v = complex.vertices[edge.ends[1] as usize].pos;
    let mut disp = [rat(0); 3];
    for a in 0..3 {
        disp[a] = pos_v[a] - pos_u[a] + rat(edge.wrap[a] as i64 * l);
    }

    let mut out = complex.clone();
    let first_new_vertex = out.vertices.len() as u32;
    let unrolled = |k: u32| -> [Rational64; 3] {
        let t = Rational64::new(k as i64, n as i64);
        [pos_u[0] + disp[0] * t, pos_u[1] + disp[1] * t, pos_u[2] + disp[2] * t]
    };
    for k in 1..n {
        let p = unrolled(k);
        out.vertices.push(Vertex {
            pos: [reduce_mod(p[0], l), reduce_mod(p[1], l), reduce_mod(p[2], l)],
        });
    }
    // Segment k joins vertex k-1 to vertex k along the original displacement.
    let seg_vertex = |k: u32| -> VertexId {
        match k {
            0 => edge.ends[0],
            k if k == n => edge.ends[1],
            k => first_new_vertex + k - 1,
        }
    };
    let mut seg_ids = Vec::with_capacity(n as usize);
    for k in 1..=n {
        let mut wrap = [0i8; 3];
        for a in 0..3 {
            let q = wrap_quotient(unrolled(k)[a], l) - wrap_quotient(unrolled(k - 1)[a], l);
            wrap[a] = i8::try_from(q).expect("segment wrap fits i8");
        }
        let e = Edge { ends: [seg_vertex(k - 1), seg_vertex(k)], wrap };
        if k == 1 {
            out.edges[eid as usize] = e;
            seg_ids.push(eid);
        } else {
            seg_ids.push(out.edges.len() as u32);
            out.edges.push(e);
        }
    }

    for face in &mut out.faces {
        let mut walk = Vec::with_capacity(face.walk.len());
        for &step in &face.walk {
            if step.edge != eid {
                walk.push(step);
                continue;
            }
            match step.dir {
                Orientation::Forward => {
                    walk.extend(seg_ids.iter().map(|&e| FaceStep::fwd(e)));
                }
                Orientation::Reverse => {
                    walk.extend(seg_ids.iter().rev().map(|&e| FaceStep::rev(e)));
                }
            }
        }
        face.walk = walk;
    }
    Ok(out)
}

/// Split a vertex by a partition of its incident edges: the dual-picture
/// instruction, executed by dualizing, splitting the corresponding cell, and
/// dualizing back. Children take the parent position offset along z: +1/8 for
/// the first part, -1/8 for the second; further parts step by 1/8 and in an
/// n-split the central child keeps the parent position.
pub fn split_vertex(complex: &CellComplex3, instr: &VertexSplit) -> Result<CellComplex3, SplitError> {
    let prepared = prepare_vertex_split(complex, instr)?;
    let dual = dual_complex(complex)?;
    let result = apply_vertex_splits(complex, dual, std::slice::from_ref(&prepared))?;
    Ok(result)
}

pub(crate) struct PreparedVertexSplit {
    vertex: VertexId,
    parts: Vec<Vec<EdgeId>>,
}

pub(crate) fn prepare_vertex_split(
    complex: &CellComplex3,
    instr: &VertexSplit,
) -> Result<PreparedVertexSplit, SplitError> {
    let v = instr.vertex;
    if v as usize >= complex.vertices.len() {
        return Err(SplitError::UnknownVertex(v));
    }
    let mut incident: Vec<EdgeId> = Vec::new();
    for (eid, e) in complex.edges.iter().enumerate() {
        if e.ends[0] == v && e.ends[1] == v {
            return Err(SplitError::SelfLoopAtVertex(v));
        }
        if e.ends[0] == v || e.ends[1] == v {
            incident.push(eid as u32);
        }
    }
    if instr.parts.len() < 2 {
        return Err(SplitError::TooFewParts(instr.parts.len()));
    }
    for (i, p) in instr.parts.iter().enumerate() {
        if p.is_empty() {
            return Err(SplitError::EmptyPart(i));
        }
    }
    let mut claimed: Vec<EdgeId> = instr.parts.iter().flatten().copied().collect();
    claimed.sort_unstable();
    incident.sort_unstable();
    if claimed != incident {
        return Err(SplitError::EdgePartitionMismatch { vertex: v });
    }
    Ok(PreparedVertexSplit { vertex: v, parts: instr.parts.clone() })
}

/// Split many vertices against one dualization. `dual` must be the dual of
/// `complex`; the result is dualized back with child positions overridden.
pub(crate) fn apply_vertex_splits(
    complex: &CellComplex3,
    mut dual: CellComplex3,
    splits: &[PreparedVertexSplit],
) -> Result<CellComplex3, SplitError> {
    let l = complex.size as i64;
    // (result vertex id, position) overrides collected as we split.
    let mut overrides: Vec<(u32, [Rational64; 3])> = Vec::new();
    for s in splits {
        let parent_pos = complex.vertices[s.vertex as usize].pos;
        let n = s.parts.len();
        // Edges at the vertex are faces of the corresponding dual cell,
        // index-preserving by construction of `dual_complex`.
        let instr = SplitInstruction { cell: s.vertex, parts: s.parts.clone() };
        let before = dual.cells.len() as u32;
        dual = n_split(&dual, &instr)?;
        let offset = |eighths: i64| {
            let mut p = parent_pos;
            p[2] = reduce_mod(p[2] + Rational64::new(eighths, 8), l);
            p
        };
        if n == 2 {
            overrides.push((s.vertex, offset(1)));
            overrides.push((before, offset(-1)));
        } else {
            overrides.push((s.vertex, offset(1)));
            for i in 1..n {
                overrides.push((before + i as u32 - 1, offset(1 + i as i64)));
            }
            overrides.push((before + n as u32 - 1, parent_pos)); // central child
        }
    }
    let mut result = dual_complex(&dual)?;
    for (vid, pos) in overrides {
        result.vertices[vid as usize].pos = pos;
    }
    Ok(result)
}

/// One step of a replayable transform pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum PipelineOp {
    /// Cell split (2 parts) or n-split (more).
    Split(SplitInstruction),
    /// Vertex split in the dual picture.
    SplitVertex(VertexSplit),
    Subdivide(Subdivision),
}

/// Apply a pipeline of transforms in order.
pub fn apply_pipeline(
    complex: &CellComplex3,
    ops: &[PipelineOp],
) -> Result<CellComplex3, SplitError> {
    let mut current = complex.clone();
    for op in ops {
        current = match op {
            PipelineOp::Split(instr) => n_split(&current, instr)?,
            PipelineOp::SplitVertex(instr) => split_vertex(&current, instr)?,
            PipelineOp::Subdivide(sub) => subdivide_edge(&current, sub)?,
        };
    }
    Ok(current)
}

/// Do a cell split and a vertex split commute on this complex? True iff
/// applying them in both orders yields isomorphic complexes. Instructions
/// must be valid on the base complex; a composition that fails on the
/// intermediate complex counts as non-commuting.
pub fn commute_check(
    complex: &CellComplex3,
    primal: &VertexSplit,
    dual: &SplitInstruction,
) -> Result<bool, SplitError> {
    prepare_vertex_split(complex, primal)?;
    let dual_first = n_split(complex, dual)?;
    let a = match split_vertex(&dual_first, primal) {
        Ok(c) => c,
        Err(_) => return Ok(false),
    };
    let primal_first = split_vertex(complex, primal)?;
    let b = match n_split(&primal_first, dual) {
        Ok(c) => c,
        Err(_) => return Ok(false),
    };
    Ok(complexes_isomorphic(&a, &b))
}

fn check_partition(cell_faces: &[FaceId], parts: &[Vec<FaceId>], cell: CellId) -> Result<(), SplitError> {
    for (i, p) in parts.iter().enumerate() {
        if p.is_empty() {
            return Err(SplitError::EmptyPart(i));
        }
    }
    let mut claimed: Vec<FaceId> = parts.iter().flatten().copied().collect();
    claimed.sort_unstable();
    let mut actual = cell_faces.to_vec();
    actual.sort_unstable();
    if claimed != actual {
        return Err(SplitError::PartitionMismatch { cell });
    }
    Ok(())
}

fn part_index(parts: &[Vec<FaceId>]) -> HashMap<FaceId, usize> {
    let mut map = HashMap::new();
    for (i, p) in parts.iter().enumerate() {
        for &f in p {
            map.insert(f, i);
        }
    }
    map
}

type Slot = (FaceId, usize, Orientation);

/// For each edge of the cell, its two face slots (face, walk index, direction).
fn cell_edge_slots(complex: &CellComplex3, cell: CellId) -> HashMap<EdgeId, [Slot; 2]> {
    let mut acc: HashMap<EdgeId, Vec<Slot>> = HashMap::new();
    for &f in &complex.cells[cell as usize].faces {
        for (k, step) in complex.faces[f as usize].walk.iter().enumerate() {
            acc.entry(step.edge).or_default().push((f, k, step.dir));
        }
    }
    acc.into_iter()
        .map(|(e, v)| {
            debug_assert_eq!(v.len(), 2, "validated cells use each edge twice");
            (e, [v[0], v[1]])
        })
        .collect()
}

fn check_part_connectivity(
    parts: &[Vec<FaceId>],
    slots: &HashMap<EdgeId, [Slot; 2]>,
    part_of: &HashMap<FaceId, usize>,
) -> Result<(), SplitError> {
    let mut local: HashMap<FaceId, usize> = HashMap::new();
    let mut faces: Vec<FaceId> = Vec::new();
    for p in parts {
        for &f in p {
            local.insert(f, faces.len());
            faces.push(f);
        }
    }
    let mut dsu = SmallDsu::new(faces.len());
    for pair in slots.values() {
        let (f0, f1) = (pair[0].0, pair[1].0);
        if part_of[&f0] == part_of[&f1] {
            dsu.union(local[&f0], local[&f1]);
        }
    }
    for (i, p) in parts.iter().enumerate() {
        let root = dsu.find(local[&p[0]]);
        if p.iter().any(|f| dsu.find(local[f]) != root) {
            return Err(SplitError::DisconnectedPart(i));
        }
    }
    Ok(())
}

/// Build the new face's boundary walk along the interface, oriented against
/// the first part's coherent traversal (the interface cycle with the first
/// part on the left, up to the global reflection of the cell surface).
fn interface_walk(
    complex: &CellComplex3,
    cell: CellId,
    interface: &[(EdgeId, FaceId)],
    slots: &HashMap<EdgeId, [Slot; 2]>,
) -> Result<Vec<FaceStep>, SplitError> {
    // Coherent orientation: sign per face such that the two traversals of
    // every edge of the cell run in opposite directions.
    let cell_faces = &complex.cells[cell as usize].faces;
    let mut sign: HashMap<FaceId, i8> = HashMap::new();
    sign.insert(cell_faces[0], 1);
    let mut queue = std::collections::VecDeque::from([cell_faces[0]]);
    let mut adj: HashMap<FaceId, Vec<(FaceId, bool)>> = HashMap::new();
    for pair in slots.values() {
        let (a, b) = (pair[0], pair[1]);
        // same_dir: both walks traverse the edge the same way.
        let same_dir = a.2 == b.2;
        adj.entry(a.0).or_default().push((b.0, same_dir));
        adj.entry(b.0).or_default().push((a.0, same_dir));
    }
    while let Some(f) = queue.pop_front() {
        let s = sign[&f];
        for &(g, same_dir) in adj.get(&f).into_iter().flatten() {
            let expected = if same_dir { -s } else { s };
            match sign.get(&g) {
                Some(&got) if got != expected => return Err(SplitError::NotOrientable(cell)),
                Some(_) => {}
                None => {
                    sign.insert(g, expected);
                    queue.push_back(g);
                }
            }
        }
    }

    // Directed interface steps: opposite to the first part's traversal.
    let mut steps: HashMap<EdgeId, FaceStep> = HashMap::new();
    for &(edge, a_face) in interface {
        let pair = &slots[&edge];
        let slot = if pair[0].0 == a_face { pair[0] } else { pair[1] };
        let traversal = if sign[&slot.0] > 0 { slot.2 } else { slot.2.flip() };
        steps.insert(edge, FaceStep { edge, dir: traversal.flip() });
    }

    // Chain the directed steps head-to-tail into one cycle.
    let mut by_tail: HashMap<VertexId, Vec<EdgeId>> = HashMap::new();
    for (&e, &step) in &steps {
        by_tail.entry(complex.step_tail(step)).or_default().push(e);
    }
    for v in by_tail.values_mut() {
        v.sort_unstable();
    }
    let start = interface[0].0;
    let mut walk = Vec::with_capacity(interface.len());
    let mut used: HashMap<EdgeId, bool> = HashMap::new();
    let mut current = steps[&start];
    loop {
        walk.push(current);
        used.insert(current.edge, true);
        if walk.len() > interface.len() {
            return Err(SplitError::InterfaceNotSingleCycle);
        }
        let head = complex.step_head(current);
        let next = by_tail
            .get(&head)
            .into_iter()
            .flatten()
            .find(|e| !used.get(e).copied().unwrap_or(false));
        match next {
            Some(&e) => current = steps[&e],
            None => break,
        }
    }
    if walk.len() != interface.len()
        || complex.step_head(*walk.last().unwrap()) != complex.step_tail(walk[0])
    {
        return Err(SplitError::InterfaceNotSingleCycle);
    }
    Ok(walk)
}
