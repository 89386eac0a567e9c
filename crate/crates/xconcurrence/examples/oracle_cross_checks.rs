//! The compressed formulas never have to be taken on faith. This example
//! replays the independent verification routes on random states: dense
//! Kraus products for the channel, the Wootters spin-flip spectrum for two
//! qubits, and bipartition purities for pure states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use xconcurrence::channels::{damp, DampingSpec};
use xconcurrence::oracle::{
    dense_damp, pure_gm_concurrence, to_dense, wootters_concurrence, PureState,
};
use xconcurrence::{C64, PairEntry, Result, XMatrix};

/// Random valid X-matrix: normalized weights, coherences filling a random
/// fraction of the |z| <= sqrt(a b) disc.
fn random_x(rng: &mut ChaCha8Rng, n_qubits: u32) -> Result<XMatrix> {
    let n_pairs = 1usize << (n_qubits - 1);
    let mut weights: Vec<f64> = (0..2 * n_pairs).map(|_| rng.gen::<f64>() + 1e-6).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let pairs = (0..n_pairs)
        .map(|i| {
            let (a, b) = (weights[2 * i], weights[2 * i + 1]);
            let z = C64::from_polar(rng.gen::<f64>() * (a * b).sqrt(), rng.gen_range(0.0..TAU));
            PairEntry::new(a, b, z)
        })
        .collect();
    XMatrix::new(n_qubits, pairs)
}

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // Two qubits: the closed form must reproduce Wootters' concurrence
    // computed from the spin-flip eigenvalues of the dense matrix.
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let x = random_x(&mut rng, 2)?;
        let formula = x.gm_concurrence().value;
        let oracle = wootters_concurrence(&to_dense(&x)?)?;
        worst = worst.max((formula - oracle).abs());
    }
    println!("500 two-qubit states vs spin flip: worst gap {worst:.2e}");

    // Pure states: concurrence from the minimum bipartition purity.
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(3..=7);
        let alpha: f64 = rng.gen_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05);
        let pair = rng.gen_range(1..=1usize << (n - 1));
        let psi = PureState::two_level(n, pair, C64::from(alpha.cos()), C64::from(alpha.sin()))?;
        let mut pairs = vec![PairEntry::ZERO; 1 << (n - 1)];
        pairs[pair - 1] = PairEntry::new(
            alpha.cos().powi(2),
            alpha.sin().powi(2),
            C64::from(alpha.cos() * alpha.sin()),
        );
        let x = XMatrix::new(n, pairs)?;
        let gap = (x.gm_concurrence().value - pure_gm_concurrence(&psi)?).abs();
        worst = worst.max(gap);
    }
    println!("200 rank-one states vs bipartition purities: worst gap {worst:.2e}");

    // The closed-form channel must match the explicit Kraus product
    // entrywise, not just in summary numbers.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(2..=5);
        let x = random_x(&mut rng, n)?;
        let probs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let spec = DampingSpec::new(probs)?;
        let fast = to_dense(&damp(&x, &spec)?)?;
        let slow = dense_damp(&to_dense(&x)?, &spec)?;
        let gap = fast
            .matrix()
            .iter()
            .zip(slow.matrix().iter())
            .map(|(l, r)| (l - r).norm())
            .fold(0.0, f64::max);
        worst = worst.max(gap);
    }
    println!("50 damped states vs dense Kraus evolution: worst entry gap {worst:.2e}");
    Ok(())
}
