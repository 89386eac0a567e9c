//! Seeded random-state generators shared by the integration suites.
//!
//! Everything here is deterministic: a fixed seed gives the same states on
//! every run, so tolerance checks freeze into regression tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xconcurrence::channels::DampingSpec;
use xconcurrence::{C64, PairEntry, XMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random valid X-matrix: positive weights normalized to unit trace,
/// coherences placed inside the positivity ball with random phases.
pub fn random_x(rng: &mut ChaCha8Rng, n_qubits: u32) -> XMatrix {
    let n_pairs = 1usize << (n_qubits - 1);
    let mut weights: Vec<f64> = (0..2 * n_pairs).map(|_| rng.gen::<f64>() + 1e-6).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let pairs: Vec<PairEntry> = (0..n_pairs)
        .map(|i| {
            let a = weights[2 * i];
            let b = weights[2 * i + 1];
            let fill = rng.gen::<f64>();
            let phase = rng.gen::<f64>() * std::f64::consts::TAU;
            PairEntry::new(a, b, C64::from_polar(fill * (a * b).sqrt(), phase))
        })
        .collect();
    XMatrix::new(n_qubits, pairs).expect("sampler emits valid states")
}

/// Rank-one state: all weight on one pair, coherence saturating positivity,
/// angle kept away from the product-state poles.
pub fn random_rank_one(rng: &mut ChaCha8Rng, n_qubits: u32) -> XMatrix {
    let n_pairs = 1usize << (n_qubits - 1);
    let pair = rng.gen_range(0..n_pairs);
    let alpha = rng.gen_range(1e-3..std::f64::consts::FRAC_PI_2 - 1e-3);
    let (sin, cos) = alpha.sin_cos();
    let phase = rng.gen::<f64>() * std::f64::consts::TAU;
    let mut pairs = vec![PairEntry::ZERO; n_pairs];
    pairs[pair] = PairEntry::new(sin * sin, cos * cos, C64::from_polar(sin * cos, phase));
    XMatrix::new(n_qubits, pairs).expect("rank-one sampler emits valid states")
}

/// Random heterogeneous damping probabilities, one per qubit.
pub fn random_spec(rng: &mut ChaCha8Rng, n_qubits: u32) -> DampingSpec {
    DampingSpec::new((0..n_qubits).map(|_| rng.gen()).collect()).expect("probabilities in [0, 1]")
}

/// Random state with concurrence exactly zero: every coherence is shrunk
/// strictly below its pair's cross sum (which depends only on the weights,
/// so shrinking cannot create a new witness).
pub fn random_separable(rng: &mut ChaCha8Rng, n_qubits: u32) -> XMatrix {
    let x = random_x(rng, n_qubits);
    let report = x.gm_concurrence();
    if report.value == 0.0 {
        return x;
    }
    let pairs: Vec<PairEntry> = x
        .pairs()
        .iter()
        .zip(&report.w)
        .map(|(e, &w)| {
            let zn = e.z.norm();
            if zn > w {
                PairEntry::new(e.a, e.b, e.z * ((w / zn) * (1.0 - 1e-9)))
            } else {
                *e
            }
        })
        .collect();
    let y = XMatrix::new(x.n_qubits(), pairs).expect("shrinking preserves validity");
    assert_eq!(y.gm_concurrence().value, 0.0, "shrunk state must be separable");
    y
}
