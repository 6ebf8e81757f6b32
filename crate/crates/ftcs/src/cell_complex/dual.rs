//! Combinatorial dual of a space-filling complex.
//!
//! Index-preserving: dual vertex `i` is cell `i`, dual edge `j` is face `j`,
//! dual face `k` is edge `k`, dual cell `m` is vertex `m`. Dual vertex
//! positions are cell barycenters; dual edge wraps are derived from anchored
//! routes through the shared face, so that dual face walks have zero wrap sum
//! whenever the input is a valid honeycomb.

use super::{
    rat, reduce_mod, wrap_quotient, Cell, CellComplex3, CellId, Edge, Face, FaceStep, Orientation,
    ValidationError, Vertex, VertexId,
};
use num_rational::Rational64;
use std::collections::HashMap;

struct CellFrame {
    /// Unrolled (universal-cover) positions of the cell's vertices, anchored
    /// at the torus position of its minimum-id vertex.
    unrolled: HashMap<VertexId, [Rational64; 3]>,
    /// Barycenter reduced into `[0, L)`.
    position: [Rational64; 3],
    /// Integer quotient `(barycenter - position) / L`.
    quotient: [i64; 3],
}

pub fn dual_complex(complex: &CellComplex3) -> Result<CellComplex3, ValidationError> {
    complex.validate()?;
    let l = complex.size as i64;
    let face_cells = complex.face_cells();
    let slots = complex.edge_face_slots();

    let frames: Vec<CellFrame> = (0..complex.cells.len())
        .map(|c| unroll_cell(complex, c as CellId))
        .collect();

    // Dual vertices: one per cell, at the cell barycenter.
    let vertices: Vec<Vertex> = frames.iter().map(|f| Vertex { pos: f.position }).collect();

    // Dual edges: one per face, joining the two cells sharing it.
    let mut edges = Vec::with_capacity(complex.faces.len());
    for (fid, owners) in face_cells.iter().enumerate() {
        debug_assert_eq!(owners.len(), 2);
        let (ca, cb) = (owners[0], owners[1]);
        let pivot = complex.faces[fid]
            .walk
            .iter()
            .map(|&s| complex.step_tail(s))
            .min()
            .expect("validated faces are nonempty");
        let ua = frames[ca as usize].unrolled[&pivot];
        let ub = frames[cb as usize].unrolled[&pivot];
        let mut wrap = [0i8; 3];
        for a in 0..3 {
            let shift = (ua[a] - ub[a]) / rat(l);
            debug_assert!(shift.is_integer(), "anchor routes must differ by whole wraps");
            let w = frames[cb as usize].quotient[a] - frames[ca as usize].quotient[a]
                + shift.to_integer();
            wrap[a] = i8::try_from(w).expect("dual edge wrap exceeds i8 range");
        }
        edges.push(Edge { ends: [ca, cb], wrap });
    }

    // Dual faces: one per edge, walking the cycle of faces around it.
    let mut faces = Vec::with_capacity(complex.edges.len());
    for (eid, eslots) in slots.iter().enumerate() {
        let cycle = slot_cycle(eid as u32, eslots, &face_cells)?;
        let k = cycle.len();
        let mut walk = Vec::with_capacity(k);
        for i in 0..k {
            let (slot_face, _) = cycle[i].0;
            let via_prev = cycle[(i + k - 1) % k].1;
            let via_next = cycle[i].1;
            let ends = edges[slot_face as usize].ends;
            let dir = if ends == [via_prev, via_next] {
                Orientation::Forward
            } else {
                debug_assert_eq!(ends, [via_next, via_prev]);
                Orientation::Reverse
            };
            walk.push(FaceStep { edge: slot_face, dir });
        }
        faces.push(Face { walk });
    }

    // Dual cells: one per vertex, bounded by the dual faces of its edges.
    let mut cells = vec![Cell { faces: Vec::new() }; complex.vertices.len()];
    for (eid, e) in complex.edges.iter().enumerate() {
        cells[e.ends[0] as usize].faces.push(eid as u32);
        if e.ends[1] != e.ends[0] {
            cells[e.ends[1] as usize].faces.push(eid as u32);
        }
    }
    for c in &mut cells {
        c.faces.sort_unstable();
    }

    let dual = CellComplex3 { size: complex.size, vertices, edges, faces, cells };
    dual.validate()?;
    Ok(dual)
}

/// BFS over the cell's vertex-edge graph, unrolling positions in the
/// universal cover. Any two in-cell routes agree because the cell surface is
/// a sphere, so the result is route-independent.
fn unroll_cell(complex: &CellComplex3, cell: CellId) -> CellFrame {
    let l = complex.size as i64;
    let mut cell_edges: Vec<u32> = complex.cells[cell as usize]
        .faces
        .iter()
        .flat_map(|&f| complex.faces[f as usize].walk.iter().map(|s| s.edge))
        .collect();
    cell_edges.sort_unstable();
    cell_edges.dedup();

    let mut adjacency: HashMap<VertexId, Vec<u32>> = HashMap::new();
    for &e in &cell_edges {
        let ends = complex.edges[e as usize].ends;
        adjacency.entry(ends[0]).or_default().push(e);
        adjacency.entry(ends[1]).or_default().push(e);
    }
    let anchor = *adjacency.keys().min().expect("cells have vertices");

    let mut unrolled: HashMap<VertexId, [Rational64; 3]> = HashMap::new();
    unrolled.insert(anchor, complex.vertices[anchor as usize].pos);
    let mut queue = std::collections::VecDeque::from([anchor]);
    while let Some(u) = queue.pop_front() {
        let at = unrolled[&u];
        for &e in &adjacency[&u] {
            let edge = &complex.edges[e as usize];
            let (v, sign) = if edge.ends[0] == u { (edge.ends[1], 1) } else { (edge.ends[0], -1) };
            if unrolled.contains_key(&v) {
                continue;
            }
            let mut p = at;
            for a in 0..3 {
                let disp = complex.vertices[edge.ends[1] as usize].pos[a]
                    - complex.vertices[edge.ends[0] as usize].pos[a]
                    + rat(edge.wrap[a] as i64 * l);
                p[a] += disp * rat(sign);
            }
            unrolled.insert(v, p);
            queue.push_back(v);
        }
    }

    let n = rat(unrolled.len() as i64);
    let mut lift = [rat(0); 3];
    for p in unrolled.values() {
        for a in 0..3 {
            lift[a] += p[a];
        }
    }
    let mut position = [rat(0); 3];
    let mut quotient = [0i64; 3];
    for a in 0..3 {
        lift[a] /= n;
        position[a] = reduce_mod(lift[a], l);
        quotient[a] = wrap_quotient(lift[a], l);
    }
    CellFrame { unrolled, position, quotient }
}

/// Order the face slots around an edge into a single cycle, recording the
/// cell crossed between consecutive slots. Element `i` of the result is
/// `((face, occurrence), cell joining slot i to slot i+1)`.
fn slot_cycle(
    edge: u32,
    slots: &[(u32, usize)],
    face_cells: &[Vec<CellId>],
) -> Result<Vec<((u32, usize), CellId)>, ValidationError> {
    // Each cell incident to the edge pairs up exactly two slots.
    let mut by_cell: HashMap<CellId, Vec<usize>> = HashMap::new();
    for (i, &(f, _)) in slots.iter().enumerate() {
        for &c in &face_cells[f as usize] {
            by_cell.entry(c).or_default().push(i);
        }
    }
    let mut arcs: Vec<Vec<(usize, CellId)>> = vec![Vec::new(); slots.len()];
    for (&c, pair) in &by_cell {
        if pair.len() != 2 {
            return Err(ValidationError::EdgeLinkDisconnected { edge });
        }
        arcs[pair[0]].push((pair[1], c));
        arcs[pair[1]].push((pair[0], c));
    }
    for a in &mut arcs {
        a.sort_unstable_by_key(|&(_, c)| c);
        if a.len() != 2 {
            return Err(ValidationError::EdgeLinkDisconnected { edge });
        }
    }

    let start = 0usize;
    let mut cycle = Vec::with_capacity(slots.len());
    let mut current = start;
    let mut via = arcs[start][0].1; // lower cell id first
    loop {
        cycle.push((slots[current], via));
        let (next, _) = *arcs[current].iter().find(|&&(_, c)| c == via).unwrap();
        if next == start {
            break;
        }
        // Leave through the other cell of the next slot.
        via = arcs[next].iter().find(|&&(_, c)| c != via).map(|&(_, c)| c).ok_or(
            ValidationError::EdgeLinkDisconnected { edge },
        )?;
        current = next;
    }
    if cycle.len() != slots.len() {
        return Err(ValidationError::EdgeLinkDisconnected { edge });
    }
    // Rotate so the walk is recorded slot-by-slot starting from `start`, with
    // cycle[i].1 the cell between slot i and slot i+1.
    Ok(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattices::cubic;

    #[test]
    fn cubic_dual_counts() {
        let c = cubic(2);
        let d = dual_complex(&c).unwrap();
        assert_eq!(d.vertex_count(), c.cell_count());
        assert_eq!(d.edge_count(), c.face_count());
        assert_eq!(d.face_count(), c.edge_count());
        assert_eq!(d.cell_count(), c.vertex_count());
    }

    #[test]
    fn double_dual_restores_counts_and_validates() {
        let c = cubic(3);
        let dd = dual_complex(&dual_complex(&c).unwrap()).unwrap();
        assert_eq!(dd.vertex_count(), c.vertex_count());
        assert_eq!(dd.edge_count(), c.edge_count());
        assert_eq!(dd.face_count(), c.face_count());
        assert_eq!(dd.cell_count(), c.cell_count());
        // Index-preserving double dual: the 1-skeleton matches edge by edge.
        for (e, f) in c.edges.iter().zip(dd.edges.iter()) {
            let mut a = e.ends;
            let mut b = f.ends;
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
    }
}
