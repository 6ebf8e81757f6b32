//! Union-find decoder with erasure support.
//!
//! Decoding proceeds in three phases:
//!
//! 1. **Cluster initialization.** Every erased edge is fully grown from the
//!    start; erasure-connected components form the initial clusters, and each
//!    nontrivial syndrome vertex seeds a cluster of its own. Cluster parity
//!    is the count of syndrome vertices inside, mod 2.
//! 2. **Uniform growth.** Every odd cluster advances all of its boundary
//!    edges by one half-step per round; an edge reaching two half-steps fuses
//!    and merges the clusters at its endpoints (union by size, parities
//!    added). Pure-erasure inputs have all-even clusters and skip growth
//!    entirely.
//! 3. **Peeling.** A spanning forest of the fused region is peeled from the
//!    leaves inward: a leaf edge joins the correction exactly when its
//!    pendant vertex is currently odd, toggling the other endpoint.
//!
//! All tie-breaking is by ascending id, so a decode is a pure function of
//! `(graph, syndrome, erased)`. The produced correction is always verified to
//! annihilate the syndrome; a violation is a decoder bug and panics.

use crate::cell_complex::SyndromeGraph;
use crate::noise::Syndrome;
use serde::Serialize;
use thiserror::Error;

pub type Correction = Vec<u32>;

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("syndrome has odd weight {0}")]
    OddSyndrome(usize),
    #[error("syndrome vertex {0} out of range")]
    UnknownVertex(u32),
    #[error("edge {0} out of range")]
    UnknownEdge(u32),
    #[error("syndrome vertex {0} lies outside the peeling region")]
    SyndromeOutsideRegion(u32),
    #[error("region component holds an odd number of syndrome vertices (root {0})")]
    OddRegionComponent(u32),
}

/// Decoder events, emitted in order when a trace sink is attached.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Init { clusters: usize, erased_edges: usize, syndrome: usize },
    GrowRound { round: u32, odd_clusters: usize },
    Grow { round: u32, edge: u32, level: u8 },
    Fuse { round: u32, edge: u32 },
    Merge { round: u32, absorbed: u32, into: u32 },
    PeelForest { region_edges: usize, tree_edges: usize },
    Peel { edge: u32, pendant: u32, included: bool },
    Done { correction_edges: usize },
}

pub type TraceSink<'a> = &'a mut dyn FnMut(&TraceEvent);

/// Disjoint-set clusters over the syndrome graph plus growth bookkeeping.
/// Reusable across decodes on the same graph; `begin` resets everything.
pub struct ClusterState<'g> {
    graph: &'g SyndromeGraph,
    parent: Vec<u32>,
    size: Vec<u32>,
    parity: Vec<bool>,
    syndrome_mask: Vec<bool>,
    has_boundary: Vec<bool>,
    boundary: Vec<Vec<u32>>,
    /// Half-steps grown per edge, saturating at 2 (= fully grown).
    grow: Vec<u8>,
    /// Edges that reached full growth, in fusion order.
    fused: Vec<u32>,
    active: Vec<u32>,
    round: u32,
    // peeling scratch
    forest_parent: Vec<u32>,
    tree_deg: Vec<u32>,
    tree_offsets: Vec<u32>,
    tree_slots: Vec<(u32, u32)>,
    bfs_order: Vec<u32>,
    parent_edge: Vec<u32>,
    parent_vertex: Vec<u32>,
    visited: Vec<bool>,
    odd_scratch: Vec<u32>,
    fused_now: Vec<u32>,
    check_parity: Vec<bool>,
}

impl<'g> ClusterState<'g> {
    pub fn new(graph: &'g SyndromeGraph) -> Self {
        let nv = graph.vertex_count as usize;
        let ne = graph.edge_count();
        ClusterState {
            graph,
            parent: (0..nv as u32).collect(),
            size: vec![1; nv],
            parity: vec![false; nv],
            syndrome_mask: vec![false; nv],
            has_boundary: vec![false; nv],
            boundary: vec![Vec::new(); nv],
            grow: vec![0; ne],
            fused: Vec::new(),
            active: Vec::new(),
            round: 0,
            forest_parent: (0..nv as u32).collect(),
            tree_deg: vec![0; nv],
            tree_offsets: vec![0; nv + 1],
            tree_slots: Vec::new(),
            bfs_order: Vec::new(),
            parent_edge: vec![u32::MAX; nv],
            parent_vertex: vec![u32::MAX; nv],
            visited: vec![false; nv],
            odd_scratch: Vec::new(),
            fused_now: Vec::new(),
            check_parity: vec![false; nv],
        }
    }

    pub fn graph(&self) -> &'g SyndromeGraph {
        self.graph
    }

    /// Rounds of uniform growth performed so far.
    pub fn rounds(&self) -> u32 {
        self.round
    }

    /// Edges fused so far (the region peeling will act on).
    pub fn region(&self) -> &[u32] {
        &self.fused
    }

    /// Reset and initialize clusters from a syndrome and an erasure mask.
    pub fn begin(&mut self, syndrome: &[u32], erased: &[bool]) -> Result<(), DecodeError> {
        self.begin_traced(syndrome, erased, &mut None)
    }

    pub fn begin_traced(
        &mut self,
        syndrome: &[u32],
        erased: &[bool],
        trace: &mut Option<TraceSink>,
    ) -> Result<(), DecodeError> {
        if syndrome.len() % 2 != 0 {
            return Err(DecodeError::OddSyndrome(syndrome.len()));
        }
        let nv = self.graph.vertex_count;
        if erased.len() != self.graph.edge_count() {
            return Err(DecodeError::UnknownEdge(erased.len() as u32));
        }
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.size.fill(1);
        self.parity.fill(false);
        self.syndrome_mask.fill(false);
        self.has_boundary.fill(false);
        for b in &mut self.boundary {
            b.clear();
        }
        self.grow.fill(0);
        self.fused.clear();
        self.active.clear();
        self.round = 0;

        for &v in syndrome {
            if v >= nv {
                return Err(DecodeError::UnknownVertex(v));
            }
            self.parity[v as usize] = true;
            self.syndrome_mask[v as usize] = true;
        }
        for &v in syndrome {
            self.ensure_boundary(v);
            self.active.push(v);
        }
        for e in 0..erased.len() as u32 {
            if !erased[e as usize] {
                continue;
            }
            self.grow[e as usize] = 2;
            self.fused.push(e);
            let [u, v] = self.graph.edges[e as usize].ends;
            self.ensure_boundary(u);
            self.ensure_boundary(v);
            let ru = self.find(u);
            let rv = self.find(v);
            if ru != rv {
                let w = self.union_roots(ru, rv);
                self.active.push(w);
            }
        }
        if let Some(t) = trace {
            t(&TraceEvent::Init {
                clusters: self.active.len(),
                erased_edges: self.fused.len(),
                syndrome: syndrome.len(),
            });
        }
        Ok(())
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            self.parent[v as usize] = self.parent[self.parent[v as usize] as usize];
            v = self.parent[v as usize];
        }
        v
    }

    /// Union by size; ties go to the smaller root id. Returns the winner.
    fn union_roots(&mut self, a: u32, b: u32) -> u32 {
        debug_assert_ne!(a, b);
        let (w, l) = if self.size[a as usize] > self.size[b as usize]
            || (self.size[a as usize] == self.size[b as usize] && a < b)
        {
            (a, b)
        } else {
            (b, a)
        };
        self.parent[l as usize] = w;
        self.size[w as usize] += self.size[l as usize];
        let lp = self.parity[l as usize];
        self.parity[w as usize] ^= lp;
        if self.boundary[l as usize].len() > self.boundary[w as usize].len() {
            let (wi, li) = (w as usize, l as usize);
            let (a, b) = if wi < li {
                let (x, y) = self.boundary.split_at_mut(li);
                (&mut x[wi], &mut y[0])
            } else {
                let (x, y) = self.boundary.split_at_mut(wi);
                (&mut y[0], &mut x[li])
            };
            std::mem::swap(a, b);
        }
        let moved = std::mem::take(&mut self.boundary[l as usize]);
        self.boundary[w as usize].extend_from_slice(&moved);
        w
    }

    /// First contact with a vertex: its incident edges join the boundary of
    /// whatever cluster it belongs to.
    fn ensure_boundary(&mut self, v: u32) {
        if self.has_boundary[v as usize] {
            return;
        }
        self.has_boundary[v as usize] = true;
        let r = self.find(v);
        for &(e, _) in self.graph.neighbors(v) {
            self.boundary[r as usize].push(e);
        }
    }

    /// Are all clusters even (growth finished)?
    pub fn settled(&mut self) -> bool {
        let active = std::mem::take(&mut self.active);
        let mut settled = true;
        for &r in &active {
            if self.find(r) == r && self.parity[r as usize] {
                settled = false;
            }
        }
        self.active = active;
        settled
    }

    /// One round of uniform growth: every odd cluster's boundary advances by
    /// one half-step; edges reaching full growth fuse and merge clusters.
    /// Returns the number of odd clusters grown (0 = settled).
    pub fn grow_step(&mut self) -> usize {
        self.grow_step_traced(&mut None)
    }

    pub fn grow_step_traced(&mut self, trace: &mut Option<TraceSink>) -> usize {
        // Snapshot the odd roots, ascending: the round is uniform over them.
        let mut active = std::mem::take(&mut self.active);
        active.sort_unstable();
        active.dedup();
        let mut odd = std::mem::take(&mut self.odd_scratch);
        odd.clear();
        self.active.clear();
        for &r in &active {
            if self.find(r) == r {
                self.active.push(r);
                if self.parity[r as usize] {
                    odd.push(r);
                }
            }
        }
        drop(active);
        if odd.is_empty() {
            self.odd_scratch = odd;
            return 0;
        }
        self.round += 1;
        if let Some(t) = trace {
            t(&TraceEvent::GrowRound { round: self.round, odd_clusters: odd.len() });
        }

        let mut fused_now = std::mem::take(&mut self.fused_now);
        fused_now.clear();
        for &r in &odd {
            let mut list = std::mem::take(&mut self.boundary[r as usize]);
            let mut keep = 0;
            for i in 0..list.len() {
                let e = list[i];
                if self.grow[e as usize] >= 2 {
                    continue; // stale: fused in an earlier round
                }
                self.grow[e as usize] += 1;
                if let Some(t) = trace {
                    t(&TraceEvent::Grow { round: self.round, edge: e, level: self.grow[e as usize] });
                }
                if self.grow[e as usize] >= 2 {
                    fused_now.push(e);
                } else {
                    list[keep] = e;
                    keep += 1;
                }
            }
            list.truncate(keep);
            self.boundary[r as usize] = list;
        }

        fused_now.sort_unstable();
        fused_now.dedup();
        for &e in &fused_now {
            self.fused.push(e);
            if let Some(t) = trace {
                t(&TraceEvent::Fuse { round: self.round, edge: e });
            }
            let [u, v] = self.graph.edges[e as usize].ends;
            self.ensure_boundary(u);
            self.ensure_boundary(v);
            let ru = self.find(u);
            let rv = self.find(v);
            if ru != rv {
                let w = self.union_roots(ru, rv);
                if let Some(t) = trace {
                    t(&TraceEvent::Merge { round: self.round, absorbed: ru ^ rv ^ w, into: w });
                }
                self.active.push(w);
            }
        }
        let grown = odd.len();
        self.odd_scratch = odd;
        self.fused_now = fused_now;
        grown
    }

    /// Grow until settled, peel, verify annihilation, return the correction.
    pub fn decode(&mut self) -> Correction {
        self.decode_traced(&mut None)
    }

    pub fn decode_traced(&mut self, trace: &mut Option<TraceSink>) -> Correction {
        let mut guard = 0u64;
        while self.grow_step_traced(trace) > 0 {
            guard += 1;
            assert!(
                guard <= 4 * (self.graph.edge_count() as u64 + 2),
                "growth failed to settle: decoder bug"
            );
        }
        let correction = self
            .peel_region(trace)
            .expect("grown clusters cover the syndrome: decoder bug");
        // Annihilation: the correction must reproduce the input syndrome.
        self.check_parity.fill(false);
        for &e in &correction {
            let [u, v] = self.graph.edges[e as usize].ends;
            if u != v {
                self.check_parity[u as usize] ^= true;
                self.check_parity[v as usize] ^= true;
            }
        }
        assert_eq!(
            self.check_parity, self.syndrome_mask,
            "correction does not annihilate the syndrome: decoder bug"
        );
        if let Some(t) = trace {
            t(&TraceEvent::Done { correction_edges: correction.len() });
        }
        correction
    }

    /// Spanning-forest peeling over the fused region.
    fn peel_region(&mut self, trace: &mut Option<TraceSink>) -> Result<Correction, DecodeError> {
        self.fused.sort_unstable();
        self.fused.dedup();
        let nv = self.graph.vertex_count as usize;
        for (i, p) in self.forest_parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        let find = |parent: &mut Vec<u32>, mut v: u32| -> u32 {
            while parent[v as usize] != v {
                parent[v as usize] = parent[parent[v as usize] as usize];
                v = parent[v as usize];
            }
            v
        };

        self.tree_deg.fill(0);
        let mut tree_edges: Vec<u32> = Vec::with_capacity(self.fused.len());
        for &e in &self.fused {
            let [u, v] = self.graph.edges[e as usize].ends;
            if u == v {
                continue;
            }
            let ru = find(&mut self.forest_parent, u);
            let rv = find(&mut self.forest_parent, v);
            if ru != rv {
                // Smaller root wins to keep the forest deterministic.
                let (w, l) = if ru < rv { (ru, rv) } else { (rv, ru) };
                self.forest_parent[l as usize] = w;
                tree_edges.push(e);
                self.tree_deg[u as usize] += 1;
                self.tree_deg[v as usize] += 1;
            }
        }
        if let Some(t) = trace {
            t(&TraceEvent::PeelForest { region_edges: self.fused.len(), tree_edges: tree_edges.len() });
        }

        self.tree_offsets[0] = 0;
        for i in 0..nv {
            self.tree_offsets[i + 1] = self.tree_offsets[i] + self.tree_deg[i];
        }
        self.tree_slots.clear();
        self.tree_slots.resize(tree_edges.len() * 2, (0, 0));
        let mut cursor: Vec<u32> = self.tree_offsets[..nv].to_vec();
        for &e in &tree_edges {
            let [u, v] = self.graph.edges[e as usize].ends;
            self.tree_slots[cursor[u as usize] as usize] = (e, v);
            cursor[u as usize] += 1;
            self.tree_slots[cursor[v as usize] as usize] = (e, u);
            cursor[v as usize] += 1;
        }

        // BFS forest order, roots ascending.
        self.visited.fill(false);
        self.bfs_order.clear();
        self.parent_edge.fill(u32::MAX);
        self.parent_vertex.fill(u32::MAX);
        for root in 0..nv as u32 {
            if self.visited[root as usize] || self.tree_deg[root as usize] == 0 {
                continue;
            }
            self.visited[root as usize] = true;
            let mut head = self.bfs_order.len();
            self.bfs_order.push(root);
            while head < self.bfs_order.len() {
                let u = self.bfs_order[head];
                head += 1;
                let lo = self.tree_offsets[u as usize] as usize;
                let hi = self.tree_offsets[u as usize + 1] as usize;
                for k in lo..hi {
                    let (e, v) = self.tree_slots[k];
                    if !self.visited[v as usize] {
                        self.visited[v as usize] = true;
                        self.parent_edge[v as usize] = e;
                        self.parent_vertex[v as usize] = u;
                        self.bfs_order.push(v);
                    }
                }
            }
        }

        // Syndrome vertices must lie inside the region's components.
        for v in 0..nv {
            if self.syndrome_mask[v] && !self.visited[v] {
                return Err(DecodeError::SyndromeOutsideRegion(v as u32));
            }
        }

        // Peel from the deepest vertices inward.
        let mut pp = std::mem::take(&mut self.check_parity);
        pp.copy_from_slice(&self.syndrome_mask);
        let mut correction: Correction = Vec::new();
        for idx in (0..self.bfs_order.len()).rev() {
            let v = self.bfs_order[idx];
            if self.parent_edge[v as usize] == u32::MAX {
                // Component root: all parity must have cancelled here.
                if pp[v as usize] {
                    self.check_parity = pp;
                    return Err(DecodeError::OddRegionComponent(v));
                }
                continue;
            }
            let included = pp[v as usize];
            if let Some(t) = trace {
                t(&TraceEvent::Peel { edge: self.parent_edge[v as usize], pendant: v, included });
            }
            if included {
                correction.push(self.parent_edge[v as usize]);
                pp[v as usize] = false;
                pp[self.parent_vertex[v as usize] as usize] ^= true;
            }
        }
        self.check_parity = pp;
        correction.sort_unstable();
        Ok(correction)
    }
}

/// Decode a syndrome with erased edges given as an id list.
pub fn decode(
    graph: &SyndromeGraph,
    syndrome: &Syndrome,
    erased: &[u32],
) -> Result<Correction, DecodeError> {
    let mut mask = vec![false; graph.edge_count()];
    for &e in erased {
        if e as usize >= mask.len() {
            return Err(DecodeError::UnknownEdge(e));
        }
        mask[e as usize] = true;
    }
    let mut state = ClusterState::new(graph);
    state.begin(syndrome, &mask)?;
    Ok(state.decode())
}

pub fn decode_with_trace(
    graph: &SyndromeGraph,
    syndrome: &Syndrome,
    erased: &[u32],
    sink: TraceSink,
) -> Result<Correction, DecodeError> {
    let mut mask = vec![false; graph.edge_count()];
    for &e in erased {
        if e as usize >= mask.len() {
            return Err(DecodeError::UnknownEdge(e));
        }
        mask[e as usize] = true;
    }
    let mut state = ClusterState::new(graph);
    let mut trace = Some(sink);
    state.begin_traced(syndrome, &mask, &mut trace)?;
    Ok(state.decode_traced(&mut trace))
}

/// Peel a correction for `syndrome` out of an explicit region of edges. The
/// syndrome must lie inside the region's components, each of which must hold
/// an even number of syndrome vertices.
pub fn peel(
    graph: &SyndromeGraph,
    region: &[u32],
    syndrome: &Syndrome,
) -> Result<Correction, DecodeError> {
    if syndrome.len() % 2 != 0 {
        return Err(DecodeError::OddSyndrome(syndrome.len()));
    }
    let mut state = ClusterState::new(graph);
    let empty = vec![false; graph.edge_count()];
    state.begin(syndrome, &empty)?;
    for &e in region {
        if e as usize >= graph.edge_count() {
            return Err(DecodeError::UnknownEdge(e));
        }
        state.fused.push(e);
    }
    state.peel_region(&mut None)
}
