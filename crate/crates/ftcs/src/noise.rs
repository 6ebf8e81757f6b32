//! Error-pattern sampling and syndrome computation.
//!
//! Three phenomenological models: i.i.d. Pauli flips at rate `p`, erasures at
//! rate `p_E` (an erased qubit's replacement outcome is a uniformly random
//! bit, so it also flips with probability 1/2), and the weighted model where
//! each qubit flips with probability `z_q * p` scaled by its cluster-state
//! valence. A mixed model combines erasure with background Pauli noise.
//!
//! All sampling uses ChaCha8 with explicit streams: trial `t` of a run with
//! master seed `s` draws from `trial_rng(s, t)`, so trials are reproducible
//! independent of execution order.

use crate::cell_complex::SyndromeGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NoiseError {
    #[error("probability {0} outside [0, 1]")]
    RateOutOfRange(f64),
    #[error("weighted rate overflow: edge {edge} has valence {valence}, {valence} * {rate} > 1")]
    RateOverflow { edge: u32, valence: u32, rate: f64 },
}

/// Per-edge flip and erasure masks for one trial.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ErrorPattern {
    pub flipped: Vec<bool>,
    pub erased: Vec<bool>,
}

impl ErrorPattern {
    pub fn empty(edge_count: usize) -> Self {
        ErrorPattern { flipped: vec![false; edge_count], erased: vec![false; edge_count] }
    }

    fn reset(&mut self, edge_count: usize) {
        self.flipped.clear();
        self.flipped.resize(edge_count, false);
        self.erased.clear();
        self.erased.resize(edge_count, false);
    }

    pub fn flipped_ids(&self) -> Vec<u32> {
        mask_ids(&self.flipped)
    }

    pub fn erased_ids(&self) -> Vec<u32> {
        mask_ids(&self.erased)
    }

    pub fn from_ids(edge_count: usize, flipped: &[u32], erased: &[u32]) -> Self {
        let mut p = ErrorPattern::empty(edge_count);
        for &e in flipped {
            p.flipped[e as usize] = true;
        }
        for &e in erased {
            p.erased[e as usize] = true;
        }
        p
    }
}

fn mask_ids(mask: &[bool]) -> Vec<u32> {
    mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32).collect()
}

/// Serialized form: edge-id lists, for decoder regression fixtures.
#[derive(Serialize, Deserialize)]
struct PatternDoc {
    edge_count: usize,
    flipped: Vec<u32>,
    erased: Vec<u32>,
}

impl Serialize for ErrorPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PatternDoc {
            edge_count: self.flipped.len(),
            flipped: self.flipped_ids(),
            erased: self.erased_ids(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ErrorPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = PatternDoc::deserialize(d)?;
        Ok(ErrorPattern::from_ids(doc.edge_count, &doc.flipped, &doc.erased))
    }
}

/// Odd-parity stabilizer sites, ascending.
pub type Syndrome = Vec<u32>;

/// The fixed per-trial generator: ChaCha8 seeded by the master seed, with the
/// 64-bit stream selecting the trial.
pub fn trial_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

fn check_rate(p: f64) -> Result<(), NoiseError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(NoiseError::RateOutOfRange(p));
    }
    Ok(())
}

/// Flip each edge independently with probability `p`.
pub fn sample_pauli(graph: &SyndromeGraph, p: f64, seed: u64) -> Result<ErrorPattern, NoiseError> {
    let mut pattern = ErrorPattern::default();
    sample_pauli_into(graph, p, &mut trial_rng(seed, 0), &mut pattern)?;
    Ok(pattern)
}

pub fn sample_pauli_into(
    graph: &SyndromeGraph,
    p: f64,
    rng: &mut ChaCha8Rng,
    pattern: &mut ErrorPattern,
) -> Result<(), NoiseError> {
    check_rate(p)?;
    pattern.reset(graph.edge_count());
    // gen::<f64>() samples [0, 1), so p = 1 flips everything.
    for f in pattern.flipped.iter_mut() {
        *f = rng.gen::<f64>() < p;
    }
    Ok(())
}

/// Erase each edge independently with probability `p_erase`; every erased
/// edge is additionally flipped with probability 1/2.
pub fn sample_erasure(
    graph: &SyndromeGraph,
    p_erase: f64,
    seed: u64,
) -> Result<ErrorPattern, NoiseError> {
    let mut pattern = ErrorPattern::default();
    sample_erasure_into(graph, p_erase, &mut trial_rng(seed, 0), &mut pattern)?;
    Ok(pattern)
}

pub fn sample_erasure_into(
    graph: &SyndromeGraph,
    p_erase: f64,
    rng: &mut ChaCha8Rng,
    pattern: &mut ErrorPattern,
) -> Result<(), NoiseError> {
    check_rate(p_erase)?;
    pattern.reset(graph.edge_count());
    for e in 0..graph.edge_count() {
        if rng.gen::<f64>() < p_erase {
            pattern.erased[e] = true;
            pattern.flipped[e] = rng.gen::<bool>();
        }
    }
    Ok(())
}

/// Flip edge `e` with probability `valence(e) * p`.
pub fn sample_weighted(
    graph: &SyndromeGraph,
    p: f64,
    seed: u64,
) -> Result<ErrorPattern, NoiseError> {
    let mut pattern = ErrorPattern::default();
    sample_weighted_into(graph, p, &mut trial_rng(seed, 0), &mut pattern)?;
    Ok(pattern)
}

pub fn sample_weighted_into(
    graph: &SyndromeGraph,
    p: f64,
    rng: &mut ChaCha8Rng,
    pattern: &mut ErrorPattern,
) -> Result<(), NoiseError> {
    if p < 0.0 {
        return Err(NoiseError::RateOutOfRange(p));
    }
    for (eid, e) in graph.edges.iter().enumerate() {
        if e.valence as f64 * p > 1.0 {
            return Err(NoiseError::RateOverflow { edge: eid as u32, valence: e.valence, rate: p });
        }
    }
    pattern.reset(graph.edge_count());
    for (eid, e) in graph.edges.iter().enumerate() {
        pattern.flipped[eid] = rng.gen::<f64>() < e.valence as f64 * p;
    }
    Ok(())
}

/// Erasure at `p_erase` with background Pauli noise at `p` on intact edges.
pub fn sample_mixed_into(
    graph: &SyndromeGraph,
    p: f64,
    p_erase: f64,
    rng: &mut ChaCha8Rng,
    pattern: &mut ErrorPattern,
) -> Result<(), NoiseError> {
    check_rate(p)?;
    check_rate(p_erase)?;
    pattern.reset(graph.edge_count());
    for e in 0..graph.edge_count() {
        if rng.gen::<f64>() < p_erase {
            pattern.erased[e] = true;
            pattern.flipped[e] = rng.gen::<bool>();
        } else {
            pattern.flipped[e] = rng.gen::<f64>() < p;
        }
    }
    Ok(())
}

/// Vertices with an odd number of incident flipped edges. Self-loops never
/// change parity. The result has even size on a closed torus.
pub fn syndrome_of(graph: &SyndromeGraph, pattern: &ErrorPattern) -> Syndrome {
    let mut parity = vec![false; graph.vertex_count as usize];
    for (eid, e) in graph.edges.iter().enumerate() {
        if pattern.flipped[eid] && e.ends[0] != e.ends[1] {
            parity[e.ends[0] as usize] ^= true;
            parity[e.ends[1] as usize] ^= true;
        }
    }
    let syndrome: Syndrome = mask_ids(&parity);
    debug_assert!(syndrome.len() % 2 == 0, "error chains have two endpoints or none");
    syndrome
}

pub(crate) fn syndrome_into(
    graph: &SyndromeGraph,
    pattern: &ErrorPattern,
    parity: &mut Vec<bool>,
    out: &mut Vec<u32>,
) {
    parity.clear();
    parity.resize(graph.vertex_count as usize, false);
    for (eid, e) in graph.edges.iter().enumerate() {
        if pattern.flipped[eid] && e.ends[0] != e.ends[1] {
            parity[e.ends[0] as usize] ^= true;
            parity[e.ends[1] as usize] ^= true;
        }
    }
    out.clear();
    out.extend(parity.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32));
}
