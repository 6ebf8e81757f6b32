//! Isomorphism checks on syndrome graphs and cell complexes.
//!
//! Both reduce to isomorphism of a typed incidence multigraph: syndrome
//! graphs contribute vertex and edge nodes, complexes contribute vertex,
//! edge, face and cell nodes with incidence arcs (multiplicity counts
//! repeated walk steps). Candidates are pruned by iterated color refinement
//! before a backtracking search. Intended for the small instances the test
//! suite uses (L = 2); positions, wraps and crossing vectors are ignored.

use super::{CellComplex3, SyndromeGraph};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct IncidenceGraph {
    types: Vec<u32>,
    adj: Vec<Vec<(u32, u32)>>, // (neighbor, multiplicity), sorted
}

impl IncidenceGraph {
    fn new(types: Vec<u32>, arcs: Vec<(u32, u32)>) -> Self {
        let n = types.len();
        let mut mult: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for (a, b) in arcs {
            *mult.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        let mut adj = vec![Vec::new(); n];
        for (&(a, b), &m) in &mult {
            adj[a as usize].push((b, m));
            if a != b {
                adj[b as usize].push((a, m));
            }
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        IncidenceGraph { types, adj }
    }

    pub fn from_syndrome_graph(g: &SyndromeGraph) -> Self {
        let nv = g.vertex_count;
        let mut types = vec![0u32; nv as usize];
        types.extend(std::iter::repeat(1).take(g.edge_count()));
        let mut arcs = Vec::with_capacity(2 * g.edge_count());
        for (eid, e) in g.edges.iter().enumerate() {
            let enode = nv + eid as u32;
            arcs.push((enode, e.ends[0]));
            arcs.push((enode, e.ends[1]));
        }
        IncidenceGraph::new(types, arcs)
    }

    pub fn from_complex(c: &CellComplex3) -> Self {
        let nv = c.vertices.len() as u32;
        let ne = c.edges.len() as u32;
        let nf = c.faces.len() as u32;
        let nc = c.cells.len() as u32;
        let mut types = Vec::with_capacity((nv + ne + nf + nc) as usize);
        for (t, n) in [(0u32, nv), (1, ne), (2, nf), (3, nc)] {
            types.extend(std::iter::repeat(t).take(n as usize));
        }
        let mut arcs = Vec::new();
        for (eid, e) in c.edges.iter().enumerate() {
            let enode = nv + eid as u32;
            arcs.push((enode, e.ends[0]));
            arcs.push((enode, e.ends[1]));
        }
        for (fid, f) in c.faces.iter().enumerate() {
            let fnode = nv + ne + fid as u32;
            for step in &f.walk {
                arcs.push((fnode, nv + step.edge));
            }
        }
        for (cid, cell) in c.cells.iter().enumerate() {
            let cnode = nv + ne + nf + cid as u32;
            for &f in &cell.faces {
                arcs.push((cnode, nv + ne + f));
            }
        }
        IncidenceGraph::new(types, arcs)
    }

    fn multiplicity(&self, a: u32, b: u32) -> u32 {
        match self.adj[a as usize].binary_search_by_key(&b, |&(n, _)| n) {
            Ok(i) => self.adj[a as usize][i].1,
            Err(_) => 0,
        }
    }
}

/// Joint color refinement of both graphs; colors are comparable across them.
fn refine(a: &IncidenceGraph, b: &IncidenceGraph) -> (Vec<u32>, Vec<u32>) {
    let mut ca: Vec<u32> = a.types.clone();
    let mut cb: Vec<u32> = b.types.clone();
    let mut classes = u32::MAX;
    for _ in 0..64 {
        let mut table: BTreeMap<(u32, Vec<(u32, u32)>), u32> = BTreeMap::new();
        let next = |sig: (u32, Vec<(u32, u32)>), table: &mut BTreeMap<_, u32>| -> u32 {
            let n = table.len() as u32;
            *table.entry(sig).or_insert(n)
        };
        let signature = |g: &IncidenceGraph, colors: &[u32], i: usize| {
            let mut nb: Vec<(u32, u32)> =
                g.adj[i].iter().map(|&(n, m)| (colors[n as usize], m)).collect();
            nb.sort_unstable();
            (colors[i], nb)
        };
        let na: Vec<u32> =
            (0..ca.len()).map(|i| next(signature(a, &ca, i), &mut table)).collect();
        let nb: Vec<u32> =
            (0..cb.len()).map(|i| next(signature(b, &cb, i), &mut table)).collect();
        let count = table.len() as u32;
        ca = na;
        cb = nb;
        if count == classes {
            break;
        }
        classes = count;
    }
    (ca, cb)
}

/// Find one isomorphism from `a` to `b`, if any.
pub fn find_isomorphism(a: &IncidenceGraph, b: &IncidenceGraph) -> Option<Vec<u32>> {
    let n = a.types.len();
    if n != b.types.len() {
        return None;
    }
    let (ca, cb) = refine(a, b);
    let mut count_a: BTreeMap<u32, u32> = BTreeMap::new();
    let mut count_b: BTreeMap<u32, u32> = BTreeMap::new();
    for &c in &ca {
        *count_a.entry(c).or_insert(0) += 1;
    }
    for &c in &cb {
        *count_b.entry(c).or_insert(0) += 1;
    }
    if count_a != count_b {
        return None;
    }

    // Candidate lists per color, rare colors first in the search order.
    let mut by_color: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (i, &c) in cb.iter().enumerate() {
        by_color.entry(c).or_default().push(i as u32);
    }

    // Static order: repeatedly pick the unplaced node with the most placed
    // neighbors, breaking ties by color rarity then id.
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut placed_neighbors = vec![0u32; n];
    for _ in 0..n {
        let mut best: Option<u32> = None;
        for i in 0..n as u32 {
            if placed[i as usize] {
                continue;
            }
            let key = |x: u32| {
                (
                    std::cmp::Reverse(placed_neighbors[x as usize]),
                    count_a[&ca[x as usize]],
                    x,
                )
            };
            if best.map_or(true, |b| key(i) < key(b)) {
                best = Some(i);
            }
        }
        let pick = best.unwrap();
        placed[pick as usize] = true;
        for &(nb, _) in &a.adj[pick as usize] {
            placed_neighbors[nb as usize] += 1;
        }
        order.push(pick);
    }

    let mut mapping = vec![u32::MAX; n];
    let mut used = vec![false; n];
    if search(a, b, &ca, &cb, &by_color, &order, 0, &mut mapping, &mut used) {
        Some(mapping)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &IncidenceGraph,
    b: &IncidenceGraph,
    ca: &[u32],
    cb: &[u32],
    by_color: &BTreeMap<u32, Vec<u32>>,
    order: &[u32],
    depth: usize,
    mapping: &mut Vec<u32>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let node = order[depth];
    let color = ca[node as usize];
    for &cand in &by_color[&color] {
        if used[cand as usize] || cb[cand as usize] != color {
            continue;
        }
        // Adjacency consistency with everything already mapped, both ways.
        let ok = a.adj[node as usize].iter().all(|&(nb, m)| {
            let img = mapping[nb as usize];
            img == u32::MAX || b.multiplicity(cand, img) == m
        }) && b.adj[cand as usize]
            .iter()
            .all(|&(nb, m)| !used[nb as usize] || preimage_mult(a, node, mapping, nb) == m);
        if !ok {
            continue;
        }
        mapping[node as usize] = cand;
        used[cand as usize] = true;
        if search(a, b, ca, cb, by_color, order, depth + 1, mapping, used) {
            return true;
        }
        mapping[node as usize] = u32::MAX;
        used[cand as usize] = false;
    }
    false
}

fn preimage_mult(a: &IncidenceGraph, node: u32, mapping: &[u32], image: u32) -> u32 {
    for &(nb, m) in &a.adj[node as usize] {
        if mapping[nb as usize] == image {
            return m;
        }
    }
    0
}

/// 1-skeleton isomorphism of two syndrome graphs.
pub fn syndrome_graphs_isomorphic(a: &SyndromeGraph, b: &SyndromeGraph) -> bool {
    find_isomorphism(&IncidenceGraph::from_syndrome_graph(a), &IncidenceGraph::from_syndrome_graph(b))
        .is_some()
}

/// Isomorphism of the full vertex-edge-face-cell incidence structure.
pub fn complexes_isomorphic(a: &CellComplex3, b: &CellComplex3) -> bool {
    find_isomorphism(&IncidenceGraph::from_complex(a), &IncidenceGraph::from_complex(b)).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_complex::{extract_syndrome_graph, Side};
    use crate::lattices::cubic;

    #[test]
    fn cubic_self_dual_at_l2() {
        let c = cubic(2);
        let p = extract_syndrome_graph(&c, Side::Primal).unwrap();
        let d = extract_syndrome_graph(&c, Side::Dual).unwrap();
        assert!(syndrome_graphs_isomorphic(&p, &d));
    }

    #[test]
    fn different_sizes_are_not_isomorphic() {
        let a = extract_syndrome_graph(&cubic(2), Side::Primal).unwrap();
        let b = extract_syndrome_graph(&cubic(3), Side::Primal).unwrap();
        assert!(!syndrome_graphs_isomorphic(&a, &b));
    }

    #[test]
    fn complex_is_isomorphic_to_itself_relabeled() {
        let c = cubic(2);
        assert!(complexes_isomorphic(&c, &c));
    }
}
