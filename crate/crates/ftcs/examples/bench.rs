use ftcs::cell_complex::{extract_syndrome_graph, Side};
use ftcs::experiments::{run_trial_with, ErrorModel, TrialScratch};
use ftcs::lattices::{generate, logical_cut, Axis, LatticeKind, LatticeSpec};
use ftcs::noise::trial_rng;
use std::time::Instant;

fn main() {
    let cases = [
        (LatticeKind::Cubic, 10u32, ErrorModel::Pauli { p: 0.026 }),
        (LatticeKind::Cubic, 10, ErrorModel::Erasure { p_erase: 0.249 }),
        (LatticeKind::Triamond, 10, ErrorModel::Pauli { p: 0.095 }),
        (LatticeKind::Triamond, 10, ErrorModel::Erasure { p_erase: 0.55 }),
        (LatticeKind::DoubledEdgeCubic, 10, ErrorModel::Erasure { p_erase: 0.50 }),
        (LatticeKind::Diamond, 10, ErrorModel::Pauli { p: 0.052 }),
    ];
    for (kind, l, model) in cases {
        let gen_start = Instant::now();
        let c = generate(&LatticeSpec { kind, size: l }).unwrap();
        let g = extract_syndrome_graph(&c, Side::Primal).unwrap();
        let gen_time = gen_start.elapsed();
        let cut = logical_cut(&g, Axis::X);
        let mut scratch = TrialScratch::new(&g);
        let trials = 2000u64;
        let start = Instant::now();
        let mut f = 0u64;
        for t in 0..trials {
            let mut rng = trial_rng(1, t);
            f += run_trial_with(&mut scratch, &g, &cut, &model, &mut rng) as u64;
        }
        let dt = start.elapsed();
        println!(
            "{:?} L={} {:?}: gen {:.2?}, {:.1} us/trial, fail rate {:.3}",
            kind, l, model, gen_time,
            dt.as_secs_f64() * 1e6 / trials as f64,
            f as f64 / trials as f64
        );
    }
}
