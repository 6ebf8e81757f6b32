//! Monte Carlo harness: logical error rates, sweeps over (size, rate) grids,
//! and threshold estimation from curve crossings.
//!
//! A trial samples an error pattern, decodes, and tests the residual against
//! one fixed logical cut (x axis by default); the other axes exist for
//! diagnostics. Trials draw from independent ChaCha8 streams indexed by
//! `(cell, trial)`, so sweeps are reproducible bit for bit regardless of
//! worker count, and resumed runs fill in exactly the missing cells.
//!
//! Threshold crossings are located on the two largest sizes: each curve is
//! fit with a local quadratic in the rate, the fits are intersected, and the
//! uncertainty comes from a nonparametric bootstrap that resamples every cell
//! binomially (500 resamples by default).

use crate::cell_complex::{extract_syndrome_graph, Side, SyndromeGraph};
use crate::decoder::ClusterState;
use crate::lattices::{generate, logical_cut, Axis, LatticeError, LatticeKind, LatticeSpec, LogicalCut};
use crate::noise::{
    sample_erasure_into, sample_mixed_into, sample_pauli_into, sample_weighted_into, syndrome_into,
    trial_rng, ErrorPattern, NoiseError,
};
use rand::distributions::Distribution;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ErrorModel {
    Pauli { p: f64 },
    Erasure { p_erase: f64 },
    Weighted { p: f64 },
    Mixed { p: f64, p_erase: f64 },
}

impl ErrorModel {
    pub fn name(&self) -> &'static str {
        match self {
            ErrorModel::Pauli { .. } => "pauli",
            ErrorModel::Erasure { .. } => "erasure",
            ErrorModel::Weighted { .. } => "weighted",
            ErrorModel::Mixed { .. } => "mixed",
        }
    }

    /// `(p, p_erase)` as reported in the CSV schema.
    pub fn rates(&self) -> (f64, f64) {
        match *self {
            ErrorModel::Pauli { p } => (p, 0.0),
            ErrorModel::Erasure { p_erase } => (0.0, p_erase),
            ErrorModel::Weighted { p } => (p, 0.0),
            ErrorModel::Mixed { p, p_erase } => (p, p_erase),
        }
    }

    fn validate(&self, graph: &SyndromeGraph) -> Result<(), NoiseError> {
        let check = |p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(NoiseError::RateOutOfRange(p))
            }
        };
        match *self {
            ErrorModel::Pauli { p } => check(p),
            ErrorModel::Erasure { p_erase } => check(p_erase),
            ErrorModel::Mixed { p, p_erase } => check(p).and(check(p_erase)),
            ErrorModel::Weighted { p } => {
                if p < 0.0 {
                    return Err(NoiseError::RateOutOfRange(p));
                }
                for (eid, e) in graph.edges.iter().enumerate() {
                    if e.valence as f64 * p > 1.0 {
                        return Err(NoiseError::RateOverflow {
                            edge: eid as u32,
                            valence: e.valence,
                            rate: p,
                        });
                    }
                }
                Ok(())
            }
        }
    }
}

/// Model family swept by a [`SweepConfig`]; the swept rate is `p` except for
/// erasure, where it is `p_erase`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Pauli,
    Erasure,
    Weighted,
    Mixed,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Pauli => "pauli",
            ModelKind::Erasure => "erasure",
            ModelKind::Weighted => "weighted",
            ModelKind::Mixed => "mixed",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pauli" => Ok(ModelKind::Pauli),
            "erasure" => Ok(ModelKind::Erasure),
            "weighted" => Ok(ModelKind::Weighted),
            "mixed" => Ok(ModelKind::Mixed),
            other => Err(format!("unknown model '{other}' (pauli, erasure, weighted, mixed)")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub lattice: LatticeKind,
    pub sizes: Vec<u32>,
    pub model: ModelKind,
    /// Swept rates: `p` for pauli/weighted/mixed, `p_erase` for erasure.
    pub rates: Vec<f64>,
    /// Fixed erasure rate for the mixed model; ignored otherwise.
    #[serde(default)]
    pub p_erase: f64,
    pub trials: u64,
    pub seed: u64,
    pub axis: Axis,
}

impl SweepConfig {
    pub fn model_at(&self, rate: f64) -> ErrorModel {
        match self.model {
            ModelKind::Pauli => ErrorModel::Pauli { p: rate },
            ModelKind::Erasure => ErrorModel::Erasure { p_erase: rate },
            ModelKind::Weighted => ErrorModel::Weighted { p: rate },
            ModelKind::Mixed => ErrorModel::Mixed { p: rate, p_erase: self.p_erase },
        }
    }
}

/// One populated grid cell, in CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub lattice: String,
    pub l: u32,
    pub model: String,
    pub p: f64,
    pub p_erase: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
}

impl SweepCell {
    /// The rate that was swept to produce this cell.
    pub fn swept_rate(&self) -> f64 {
        if self.model == "erasure" {
            self.p_erase
        } else {
            self.p
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid sweep config: {0}")]
    Config(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Validation(#[from] crate::cell_complex::ValidationError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
}

/// Scratch buffers for one worker: decoder state plus sampling buffers.
pub struct TrialScratch<'g> {
    state: ClusterState<'g>,
    pattern: ErrorPattern,
    parity: Vec<bool>,
    syndrome: Vec<u32>,
}

impl<'g> TrialScratch<'g> {
    pub fn new(graph: &'g SyndromeGraph) -> Self {
        TrialScratch {
            state: ClusterState::new(graph),
            pattern: ErrorPattern::empty(graph.edge_count()),
            parity: Vec::new(),
            syndrome: Vec::new(),
        }
    }
}

/// One Monte Carlo trial: sample, decode, test the residual against the cut.
/// Failure means the residual error crosses the logical cut an odd number of
/// times. The decoder itself asserts that the residual syndrome is empty.
pub fn run_trial(
    graph: &SyndromeGraph,
    cut: &LogicalCut,
    model: &ErrorModel,
    seed: u64,
) -> Result<bool, ExperimentError> {
    model.validate(graph)?;
    let mut scratch = TrialScratch::new(graph);
    Ok(run_trial_with(&mut scratch, graph, cut, model, &mut trial_rng(seed, 0)))
}

/// Hot path: rates must have been validated against this graph already.
pub fn run_trial_with(
    scratch: &mut TrialScratch,
    graph: &SyndromeGraph,
    cut: &LogicalCut,
    model: &ErrorModel,
    rng: &mut ChaCha8Rng,
) -> bool {
    let pattern = &mut scratch.pattern;
    let sampled = match *model {
        ErrorModel::Pauli { p } => sample_pauli_into(graph, p, rng, pattern),
        ErrorModel::Erasure { p_erase } => sample_erasure_into(graph, p_erase, rng, pattern),
        ErrorModel::Weighted { p } => sample_weighted_into(graph, p, rng, pattern),
        ErrorModel::Mixed { p, p_erase } => sample_mixed_into(graph, p, p_erase, rng, pattern),
    };
    sampled.expect("rates validated before the trial loop");
    syndrome_into(graph, pattern, &mut scratch.parity, &mut scratch.syndrome);
    scratch
        .state
        .begin(&scratch.syndrome, &pattern.erased)
        .expect("sampled syndromes are even and in range");
    let correction = scratch.state.decode();

    let mut parity = false;
    for &e in &cut.edge_ids {
        if pattern.flipped[e as usize] {
            parity = !parity;
        }
    }
    for &e in &correction {
        if cut.mask[e as usize] {
            parity = !parity;
        }
    }
    parity
}

/// Run the full grid. Rows stream through `on_row` as each cell completes.
pub fn sweep_streaming(
    config: &SweepConfig,
    mut on_row: impl FnMut(&SweepCell),
) -> Result<SweepResult, ExperimentError> {
    sweep_filtered(config, |_, _| false, &mut on_row)
}

/// Like [`sweep_streaming`], but cells where `skip(L, rate)` returns true are
/// omitted (used to resume interrupted runs). Seeds depend only on the cell's
/// grid position, so partial runs compose deterministically.
pub fn sweep_filtered(
    config: &SweepConfig,
    skip: impl Fn(u32, f64) -> bool,
    on_row: &mut dyn FnMut(&SweepCell),
) -> Result<SweepResult, ExperimentError> {
    if config.sizes.is_empty() || config.rates.is_empty() {
        return Err(ExperimentError::Config("sizes and rates must be nonempty".into()));
    }
    if config.trials == 0 {
        return Err(ExperimentError::Config("trials must be at least 1".into()));
    }
    if config.trials > u32::MAX as u64 {
        return Err(ExperimentError::Config("trials per cell exceed 2^32".into()));
    }
    let mut cells = Vec::new();
    for (si, &l) in config.sizes.iter().enumerate() {
        let complex = generate(&LatticeSpec { kind: config.lattice, size: l })?;
        let graph = extract_syndrome_graph(&complex, Side::Primal)?;
        let cut = logical_cut(&graph, config.axis);
        for (ri, &rate) in config.rates.iter().enumerate() {
            if skip(l, rate) {
                continue;
            }
            let model = config.model_at(rate);
            model.validate(&graph)?;
            let cell_index = (si * config.rates.len() + ri) as u64;
            let failures: u64 = (0..config.trials)
                .into_par_iter()
                .map_init(
                    || TrialScratch::new(&graph),
                    |scratch, t| {
                        let mut rng = trial_rng(config.seed, (cell_index << 32) | t);
                        run_trial_with(scratch, &graph, &cut, &model, &mut rng) as u64
                    },
                )
                .sum();
            let (rate_est, ci_lo, ci_hi) = wilson_interval(failures, config.trials);
            let (p, p_erase) = model.rates();
            let cell = SweepCell {
                lattice: config.lattice.name().to_string(),
                l,
                model: model.name().to_string(),
                p,
                p_erase,
                trials: config.trials,
                failures,
                rate: rate_est,
                ci_lo,
                ci_hi,
                seed: config.seed,
            };
            on_row(&cell);
            cells.push(cell);
        }
    }
    Ok(SweepResult { cells })
}

pub fn sweep(config: &SweepConfig) -> Result<SweepResult, ExperimentError> {
    sweep_streaming(config, |_| {})
}

/// 95% Wilson score interval: returns `(rate, lo, hi)`.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64, f64) {
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let phat = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (phat, (center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Error)]
pub enum ThresholdError {
    #[error("sweep mixes lattices or models: {0}")]
    MixedSweep(String),
    #[error("threshold fit needs at least two sizes, got {0}")]
    TooFewSizes(usize),
    #[error("threshold fit needs at least three rates, got {0}")]
    TooFewRates(usize),
    #[error("no crossing bracketed by the sweep: {observed}; widen the rate grid")]
    NoCrossing { observed: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdOptions {
    pub bootstrap_resamples: usize,
    pub bootstrap_seed: u64,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions { bootstrap_resamples: 500, bootstrap_seed: 0x7153_9ced }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub lattice: String,
    pub model: String,
    pub crossing: f64,
    pub uncertainty: f64,
    pub method: String,
    /// The two sizes whose curves were intersected.
    pub sizes: [u32; 2],
    pub bootstrap_resamples: usize,
}

/// Locate the threshold crossing of the two largest sizes in a sweep.
pub fn find_threshold(
    result: &SweepResult,
    options: &ThresholdOptions,
) -> Result<ThresholdEstimate, ThresholdError> {
    let mut lattices: Vec<&str> = result.cells.iter().map(|c| c.lattice.as_str()).collect();
    lattices.sort_unstable();
    lattices.dedup();
    let mut models: Vec<&str> = result.cells.iter().map(|c| c.model.as_str()).collect();
    models.sort_unstable();
    models.dedup();
    if lattices.len() != 1 || models.len() != 1 {
        return Err(ThresholdError::MixedSweep(format!(
            "lattices {lattices:?}, models {models:?}"
        )));
    }

    let mut sizes: Vec<u32> = result.cells.iter().map(|c| c.l).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(ThresholdError::TooFewSizes(sizes.len()));
    }
    let pair = [sizes[sizes.len() - 2], sizes[sizes.len() - 1]];

    let curve = |l: u32| -> Vec<&SweepCell> {
        let mut cells: Vec<&SweepCell> = result.cells.iter().filter(|c| c.l == l).collect();
        cells.sort_by(|a, b| a.swept_rate().partial_cmp(&b.swept_rate()).unwrap());
        cells
    };
    let small = curve(pair[0]);
    let big = curve(pair[1]);
    if small.len() < 3 || big.len() < 3 || small.len() != big.len() {
        return Err(ThresholdError::TooFewRates(small.len().min(big.len())));
    }

    let xs: Vec<f64> = small.iter().map(|c| c.swept_rate()).collect();
    let observed = |curve: &[&SweepCell]| -> Vec<f64> { curve.iter().map(|c| c.rate).collect() };
    let ys_small = observed(&small);
    let ys_big = observed(&big);

    // Bracketing: the larger size must sit at or below the smaller at the low
    // end and above it at the high end.
    let ordering = format!(
        "L={} rates {:?}, L={} rates {:?}",
        pair[0], ys_small, pair[1], ys_big
    );
    if ys_big[0] > ys_small[0] || ys_big[ys_big.len() - 1] < ys_small[ys_small.len() - 1] {
        return Err(ThresholdError::NoCrossing { observed: ordering });
    }

    let cross = |ys_a: &[f64], ys_b: &[f64]| -> Option<f64> {
        let qa = quadratic_fit(&xs, ys_a);
        let qb = quadratic_fit(&xs, ys_b);
        intersect(&qa, &qb, xs[0], xs[xs.len() - 1])
    };
    let crossing = cross(&ys_small, &ys_big)
        .ok_or(ThresholdError::NoCrossing { observed: ordering })?;

    // Nonparametric bootstrap: binomially resample every cell, refit, rescan.
    let mut rng = trial_rng(options.bootstrap_seed, 0);
    let mut samples = Vec::with_capacity(options.bootstrap_resamples);
    for _ in 0..options.bootstrap_resamples {
        let resample = |curve: &[&SweepCell], rng: &mut ChaCha8Rng| -> Vec<f64> {
            curve
                .iter()
                .map(|c| binomial_draw(c.trials, c.failures as f64 / c.trials as f64, rng) / c.trials as f64)
                .collect()
        };
        let ya = resample(&small, &mut rng);
        let yb = resample(&big, &mut rng);
        if let Some(x) = cross(&ya, &yb) {
            samples.push(x);
        }
    }
    let uncertainty = if samples.len() >= 2 {
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
            / (samples.len() - 1) as f64;
        var.sqrt().max(f64::EPSILON)
    } else {
        // Bootstrap could not re-bracket: fall back to the grid spacing.
        xs[1] - xs[0]
    };

    Ok(ThresholdEstimate {
        lattice: lattices[0].to_string(),
        model: models[0].to_string(),
        crossing,
        uncertainty,
        method: format!(
            "quadratic fit on the two largest sizes intersected by bisection; \
             {} binomial bootstrap resamples",
            options.bootstrap_resamples
        ),
        sizes: pair,
        bootstrap_resamples: options.bootstrap_resamples,
    })
}

fn binomial_draw(n: u64, p: f64, rng: &mut ChaCha8Rng) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return n as f64;
    }
    let dist = rand_distr::Binomial::new(n, p).expect("valid binomial parameters");
    dist.sample(rng) as f64
}

/// Least-squares quadratic coefficients `[c0, c1, c2]`.
fn quadratic_fit(xs: &[f64], ys: &[f64]) -> [f64; 3] {
    let n = xs.len();
    let mut moments = [0.0f64; 5];
    let mut rhs = [0.0f64; 3];
    for i in 0..n {
        let mut xk = 1.0;
        for k in 0..5 {
            moments[k] += xk;
            if k < 3 {
                rhs[k] += ys[i] * xk;
            }
            xk *= xs[i];
        }
    }
    let mut a = [
        [moments[0], moments[1], moments[2], rhs[0]],
        [moments[1], moments[2], moments[3], rhs[1]],
        [moments[2], moments[3], moments[4], rhs[2]],
    ];
    // Gaussian elimination with partial pivoting.
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()).unwrap();
        a.swap(col, pivot);
        let d = a[col][col];
        if d.abs() < 1e-30 {
            continue;
        }
        for row in 0..3 {
            if row == col {
                continue;
            }
            let f = a[row][col] / d;
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = if a[k][k].abs() < 1e-30 { 0.0 } else { a[k][3] / a[k][k] };
    }
    out
}

fn eval(q: &[f64; 3], x: f64) -> f64 {
    q[0] + q[1] * x + q[2] * x * x
}

/// First sign change of `big - small` from non-positive to positive, refined
/// by bisection.
fn intersect(small: &[f64; 3], big: &[f64; 3], lo: f64, hi: f64) -> Option<f64> {
    let d = |x: f64| eval(big, x) - eval(small, x);
    let steps = 512;
    let mut prev = d(lo);
    let mut prev_x = lo;
    for i in 1..=steps {
        let x = lo + (hi - lo) * i as f64 / steps as f64;
        let cur = d(x);
        if prev <= 0.0 && cur > 0.0 {
            let (mut a, mut b) = (prev_x, x);
            for _ in 0..64 {
                let m = 0.5 * (a + b);
                if d(m) <= 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some(0.5 * (a + b));
        }
        prev = cur;
        prev_x = x;
    }
    None
}

pub const CSV_HEADER: &str = "lattice,L,model,p,p_erase,trials,failures,rate,ci_lo,ci_hi,seed";

pub fn csv_string(result: &SweepResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in &result.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            c.lattice, c.l, c.model, c.p, c.p_erase, c.trials, c.failures, c.rate, c.ci_lo,
            c.ci_hi, c.seed
        ));
    }
    out
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub fn parse_csv(text: &str) -> Result<SweepResult, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        Some((_, header)) => {
            return Err(CsvError::Parse {
                line: 1,
                message: format!("unexpected header '{header}'"),
            })
        }
        None => return Err(CsvError::Parse { line: 1, message: "empty file".into() }),
    }
    let mut cells = Vec::new();
    for (idx, line) in lines {
        let ln = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 11 {
            return Err(CsvError::Parse {
                line: ln,
                message: format!("expected 11 fields, got {}", parts.len()),
            });
        }
        let field = |i: usize| -> &str { parts[i].trim() };
        macro_rules! num {
            ($i:expr, $t:ty) => {
                field($i).parse::<$t>().map_err(|_| CsvError::Parse {
                    line: ln,
                    message: format!("bad numeric field '{}'", field($i)),
                })?
            };
        }
        cells.push(SweepCell {
            lattice: field(0).to_string(),
            l: num!(1, u32),
            model: field(2).to_string(),
            p: num!(3, f64),
            p_erase: num!(4, f64),
            trials: num!(5, u64),
            failures: num!(6, u64),
            rate: num!(7, f64),
            ci_lo: num!(8, f64),
            ci_hi: num!(9, f64),
            seed: num!(10, u64),
        });
    }
    Ok(SweepResult { cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(kind: LatticeKind, l: u32) -> SyndromeGraph {
        let c = generate(&LatticeSpec { kind, size: l }).unwrap();
        extract_syndrome_graph(&c, Side::Primal).unwrap()
    }

    #[test]
    fn zero_rate_never_fails() {
        let g = graph(LatticeKind::Cubic, 2);
        let cut = logical_cut(&g, Axis::X);
        for t in 0..50 {
            assert!(!run_trial(&g, &cut, &ErrorModel::Pauli { p: 0.0 }, t).unwrap());
        }
    }

    #[test]
    fn wrapping_cycle_with_empty_syndrome_fails() {
        // A homologically nontrivial residual: flip a straight cycle that
        // wraps the torus once along x. Its syndrome is empty, so the decoder
        // returns nothing and the trial must report failure.
        let c = crate::lattices::cubic(2);
        let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
        let cut = logical_cut(&g, Axis::X);
        // x-edges of the row y=0, z=0: ids 3*v for v = 0 and 1.
        let mut pattern = ErrorPattern::empty(g.edge_count());
        pattern.flipped[0] = true;
        pattern.flipped[3] = true;
        assert!(crate::noise::syndrome_of(&g, &pattern).is_empty());
        let flips = pattern.flipped_ids();
        let parity = flips.iter().filter(|&&e| cut.mask[e as usize]).count();
        assert_eq!(parity % 2, 1, "the cycle crosses the cut once");

        // Run the equivalent through the trial logic by hand: no syndrome,
        // empty correction, cut parity odd => failure.
        let syndrome = crate::noise::syndrome_of(&g, &pattern);
        let corr = crate::decoder::decode(&g, &syndrome, &[]).unwrap();
        assert!(corr.is_empty());
        assert_eq!(parity % 2, 1);
    }

    #[test]
    fn above_threshold_failure_rate_is_large() {
        let g = graph(LatticeKind::Cubic, 6);
        let cut = logical_cut(&g, Axis::X);
        let model = ErrorModel::Pauli { p: 0.04 };
        let mut scratch = TrialScratch::new(&g);
        let mut failures = 0u64;
        let trials = 1000u64;
        for t in 0..trials {
            let mut rng = trial_rng(2024, t);
            failures += run_trial_with(&mut scratch, &g, &cut, &model, &mut rng) as u64;
        }
        let rate = failures as f64 / trials as f64;
        assert!(rate > 0.05, "p=4% is above threshold; measured {rate}");
    }

    #[test]
    fn sweep_produces_full_grid_and_zero_column() {
        let config = SweepConfig {
            lattice: LatticeKind::Cubic,
            sizes: vec![2, 3],
            model: ModelKind::Pauli,
            rates: vec![0.0, 0.02, 0.05],
            p_erase: 0.0,
            trials: 50,
            seed: 99,
            axis: Axis::X,
        };
        let result = sweep(&config).unwrap();
        assert_eq!(result.cells.len(), 6);
        for c in result.cells.iter().filter(|c| c.p == 0.0) {
            assert_eq!(c.failures, 0);
        }
    }

    #[test]
    fn sweep_is_reproducible() {
        let config = SweepConfig {
            lattice: LatticeKind::Diamond,
            sizes: vec![2],
            model: ModelKind::Mixed,
            rates: vec![0.02, 0.04],
            p_erase: 0.1,
            trials: 200,
            seed: 31337,
            axis: Axis::X,
        };
        let a = csv_string(&sweep(&config).unwrap());
        let b = csv_string(&sweep(&config).unwrap());
        assert_eq!(a, b);
        let parsed = parse_csv(&a).unwrap();
        assert_eq!(csv_string(&parsed), a);
    }

    #[test]
    fn synthetic_crossing_is_recovered() {
        // Exact curves 0.5 + (p - 0.1) * L cross at p = 0.1.
        let mut cells = Vec::new();
        let trials = 1_000_000u64;
        for &l in &[4u32, 8] {
            for &p in &[0.07, 0.085, 0.1, 0.115, 0.13] {
                let rate = 0.5 + (p - 0.1) * l as f64;
                let failures = (rate * trials as f64).round() as u64;
                let (rate, ci_lo, ci_hi) = wilson_interval(failures, trials);
                cells.push(SweepCell {
                    lattice: "cubic".into(),
                    l,
                    model: "pauli".into(),
                    p,
                    p_erase: 0.0,
                    trials,
                    failures,
                    rate,
                    ci_lo,
                    ci_hi,
                    seed: 0,
                });
            }
        }
        let est = find_threshold(&SweepResult { cells }, &ThresholdOptions::default()).unwrap();
        assert!((est.crossing - 0.1).abs() < 1e-3, "crossing {}", est.crossing);
        assert!(est.uncertainty > 0.0 && est.uncertainty < 5e-3);
        assert_eq!(est.sizes, [4, 8]);
    }

    #[test]
    fn monotone_curves_report_no_crossing() {
        let mut cells = Vec::new();
        for &l in &[4u32, 8] {
            for &p in &[0.1, 0.2, 0.3] {
                // Larger size strictly above smaller everywhere: no crossing.
                let rate = 0.2 + 0.01 * l as f64 + p * 0.1;
                cells.push(SweepCell {
                    lattice: "cubic".into(),
                    l,
                    model: "pauli".into(),
                    p,
                    p_erase: 0.0,
                    trials: 1000,
                    failures: (rate * 1000.0) as u64,
                    rate,
                    ci_lo: 0.0,
                    ci_hi: 1.0,
                    seed: 0,
                });
            }
        }
        match find_threshold(&SweepResult { cells }, &ThresholdOptions::default()) {
            Err(ThresholdError::NoCrossing { .. }) => {}
            other => panic!("expected NoCrossing, got {other:?}"),
        }
    }

    #[test]
    fn wilson_interval_basics() {
        let (rate, lo, hi) = wilson_interval(0, 100);
        assert_eq!(rate, 0.0);
        assert!(lo.abs() < 1e-12);
        assert!(hi > 0.0 && hi < 0.05);
        let (rate, lo, hi) = wilson_interval(50, 100);
        assert!((rate - 0.5).abs() < 1e-12);
        assert!(lo > 0.39 && hi < 0.61);
    }

    #[test]
    fn csv_round_trip_errors_carry_lines() {
        let bad = format!("{CSV_HEADER}\ncubic,2,pauli,oops\n");
        match parse_csv(&bad) {
            Err(CsvError::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
