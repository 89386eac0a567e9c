//! Local amplitude-damping dynamics in closed form.
//!
//! Each qubit `k` is coupled to its own zero-temperature bath. In Kraus form
//! the single-qubit channel with decay probability `p` is
//!
//! ```text
//!     K0 = [ 1      0        ]      K1 = [ 0   sqrt(p) ]
//!          [ 0  sqrt(1 - p)  ]           [ 0      0    ]
//! ```
//!
//! so the excited component `|1>` relaxes to `|0>` with probability `p`; for
//! a Markovian bath with rate `gamma`, `p = 1 - exp(-gamma * t)`.
//!
//! The product channel maps X-form to X-form, and its action splits cleanly:
//! diagonal weight flows along singlebit-flip edges toward the ground state,
//! while every anti-diagonal coherence is scaled by the same factor
//! `prod_k sqrt(1 - p_k)`. [`damp`] applies that action directly on the
//! compressed representation in O(N * 2^N) time, with no Kraus products and
//! no dense matrices. The channels form a semigroup: damping by `p1` then
//! `p2` equals damping once by [`compose`]`(p1, p2)`.

use crate::xmatrix::PairEntry;
use crate::{Error, Result, XMatrix};

/// Per-qubit decay probabilities for one application of the product channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DampingSpec {
    probabilities: Vec<f64>,
}

impl DampingSpec {
    /// Channel with an individual decay probability per qubit. Each must lie
    /// in `[0, 1]`.
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Domain(
                "a damping spec needs at least one qubit".into(),
            ));
        }
        for (k, &p) in probabilities.iter().enumerate() {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::Range {
                    name: "decay probability",
                    value: p,
                    lo: 0.0,
                    hi: 1.0,
                });
            }
            let _ = k;
        }
        Ok(DampingSpec { probabilities })
    }

    /// The same decay probability on every qubit.
    pub fn uniform(n_qubits: u32, p: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Domain(
                "a damping spec needs at least one qubit".into(),
            ));
        }
        Self::new(vec![p; n_qubits as usize])
    }

    pub fn n_qubits(&self) -> u32 {
        self.probabilities.len() as u32
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// Decay probability accumulated by two sequential applications:
/// `1 - (1 - p1)(1 - p2)`.
pub fn compose(p1: f64, p2: f64) -> f64 {
    p1 + p2 - p1 * p2
}

/// Decay probability after evolving for time `t` at rate `gamma`:
/// `1 - exp(-gamma * t)`.
pub fn decay_probability(gamma: f64, t: f64) -> Result<f64> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::Range {
            name: "gamma",
            value: gamma,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Range {
            name: "t",
            value: t,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(-(-gamma * t).exp_m1())
}

/// Apply the product amplitude-damping channel.
pub fn damp(x: &XMatrix, spec: &DampingSpec) -> Result<XMatrix> {
    let n = x.n_qubits();
    if spec.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: spec.n_qubits(),
        });
    }
    let dim = x.dim();

    // Unpack the diagonal: pair i holds indices (i - 1, dim - i).
    let mut d = vec![0.0f64; dim];
    for (idx, e) in x.pairs().iter().enumerate() {
        d[idx] = e.a;
        d[dim - 1 - idx] = e.b;
    }

    // Qubit k owns bit n - 1 - k. Each pass moves a fraction p of every
    // excited weight across its bit-flip edge; targets have the bit clear,
    // so no entry is read after being written within a pass.
    for (k, &p) in spec.probabilities().iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let mask = 1usize << (n as usize - 1 - k);
        for s in 0..dim {
            if s & mask != 0 {
                let f = p * d[s];
                d[s ^ mask] += f;
                d[s] -= f;
            }
        }
    }

    // Every coherence connects complementary indices, so each qubit
    // contributes one surviving-excitation factor sqrt(1 - p_k).
    let mut coh = 1.0;
    for &p in spec.probabilities() {
        coh *= (1.0 - p).sqrt();
    }

    let pairs = x
        .pairs()
        .iter()
        .enumerate()
        .map(|(idx, e)| PairEntry::new(d[idx], d[dim - 1 - idx], e.z * coh))
        .collect();
    Ok(XMatrix::from_parts_unchecked(n, pairs))
}

/// Damp one qubit only.
pub fn damp_single(x: &XMatrix, qubit: usize, p: f64) -> Result<XMatrix> {
    let n = x.n_qubits() as usize;
    if qubit >= n {
        return Err(Error::IndexOutOfRange {
            index: qubit,
            max: n - 1,
        });
    }
    let mut probabilities = vec![0.0; n];
    probabilities[qubit] = p;
    damp(x, &DampingSpec::new(probabilities)?)
}

/// Concurrence of the damped state at each time, evolving always from the
/// initial state (the semigroup property makes this equal to stepwise
/// evolution, without accumulating error). `rates[k]` is qubit k's decay
/// rate.
pub fn concurrence_trajectory(x: &XMatrix, rates: &[f64], times: &[f64]) -> Result<Vec<f64>> {
    if rates.len() != x.n_qubits() as usize {
        return Err(Error::DimensionMismatch {
            left: x.n_qubits(),
            right: rates.len() as u32,
        });
    }
    times
        .iter()
        .map(|&t| {
            let probs = rates
                .iter()
                .map(|&g| decay_probability(g, t))
                .collect::<Result<Vec<f64>>>()?;
            Ok(damp(x, &DampingSpec::new(probs)?)?.concurrence())
        })
        .collect()
}

#[cfg(test)]
// frozen reference values keep their full independently computed digits
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::C64;
    use proptest::prelude::*;

    fn ghz3() -> XMatrix {
        let mut pairs = vec![PairEntry::ZERO; 4];
        pairs[0] = PairEntry::real(0.5, 0.5, 0.5);
        XMatrix::new(3, pairs).unwrap()
    }

    #[test]
    fn spec_rejects_out_of_range_probabilities() {
        assert!(DampingSpec::new(vec![0.5, 1.2]).is_err());
        assert!(DampingSpec::new(vec![-0.1]).is_err());
        assert!(DampingSpec::new(vec![f64::NAN]).is_err());
        assert!(DampingSpec::new(vec![]).is_err());
        assert!(DampingSpec::uniform(0, 0.5).is_err());
        assert_eq!(
            DampingSpec::uniform(3, 0.25).unwrap().probabilities(),
            &[0.25, 0.25, 0.25]
        );
    }

    #[test]
    fn zero_damping_is_the_identity() {
        let x = ghz3();
        let y = damp(&x, &DampingSpec::uniform(3, 0.0).unwrap()).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn full_damping_reaches_the_ground_state_exactly() {
        let x = ghz3();
        let y = damp(&x, &DampingSpec::uniform(3, 1.0).unwrap()).unwrap();
        assert_eq!(y.pairs()[0], PairEntry::real(1.0, 0.0, 0.0));
        for e in &y.pairs()[1..] {
            assert_eq!(*e, PairEntry::ZERO);
        }
    }

    #[test]
    fn damped_ghz_matches_dense_kraus_oracle_values() {
        // Frozen output of an independent dense Kraus-operator evolution of
        // the three-qubit GHZ state at p = 0.19 on every qubit.
        let y = damp(&ghz3(), &DampingSpec::uniform(3, 0.19).unwrap()).unwrap();
        let p = y.pairs();
        assert!((p[0].a - 0.50342950000000000).abs() < 1e-15);
        assert!((p[0].b - 0.26572050000000000).abs() < 1e-15);
        assert!((p[0].z.re - 0.36450000000000000).abs() < 1e-15);
        assert_eq!(p[0].z.im, 0.0);
        for i in [1, 2] {
            assert!((p[i].a - 0.0146205).abs() < 1e-15);
            assert!((p[i].b - 0.0623295).abs() < 1e-15);
            assert_eq!(p[i].z, C64::new(0.0, 0.0));
        }
        assert!((p[3].a - 0.0623295).abs() < 1e-15);
        assert!((p[3].b - 0.0146205).abs() < 1e-15);
        assert!((y.concurrence() - 0.54787467219905439).abs() < 1e-14);
    }

    #[test]
    fn heterogeneous_damping_matches_dense_kraus_oracle_values() {
        // Frozen dense-evolution output for unequal probabilities per qubit.
        let x = XMatrix::new(
            3,
            vec![
                PairEntry::new(0.3, 0.1, C64::new(0.1, 0.05)),
                PairEntry::new(0.2, 0.15, C64::new(0.02, -0.1)),
                PairEntry::real(0.05, 0.1, 0.0),
                PairEntry::new(0.05, 0.05, C64::new(0.0, 0.03)),
            ],
        )
        .unwrap();
        let y = damp(&x, &DampingSpec::new(vec![0.1, 0.35, 0.6]).unwrap()).unwrap();
        let want_diag = [
            0.46635000000000004,
            0.09240000000000001,
            0.06565000000000001,
            0.015600000000000006,
            0.16515000000000002,
            0.048600000000000004,
            0.12285000000000001,
            0.023400000000000008,
        ];
        let want_z = [
            C64::new(0.04837354648979131, 0.024186773244895654),
            C64::new(0.00967470929795826, -0.04837354648979131),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.01451206394693739),
        ];
        for (i, e) in y.pairs().iter().enumerate() {
            assert!((e.a - want_diag[i]).abs() < 1e-15, "pair {} a", i + 1);
            assert!((e.b - want_diag[7 - i]).abs() < 1e-15, "pair {} b", i + 1);
            assert!((e.z - want_z[i]).norm() < 1e-15, "pair {} z", i + 1);
        }
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let x = ghz3();
        assert!(matches!(
            damp(&x, &DampingSpec::uniform(2, 0.5).unwrap()),
            Err(Error::DimensionMismatch { left: 3, right: 2 })
        ));
        assert!(damp_single(&x, 3, 0.5).is_err());
    }

    #[test]
    fn decay_probability_limits() {
        assert_eq!(decay_probability(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(decay_probability(0.0, 5.0).unwrap(), 0.0);
        let p = decay_probability(2.0, 0.5).unwrap();
        assert!((p - (1.0 - (-1.0f64).exp())).abs() < 1e-16);
        // tiny arguments keep full relative precision through exp_m1
        let tiny = decay_probability(1e-12, 1.0).unwrap();
        assert!((tiny - 1e-12).abs() < 1e-24);
        assert!(decay_probability(-1.0, 1.0).is_err());
        assert!(decay_probability(1.0, -1.0).is_err());
    }

    #[test]
    fn compose_matches_sequential_probabilities() {
        assert_eq!(compose(0.0, 0.3), 0.3);
        assert_eq!(compose(1.0, 0.3), 1.0);
        assert!((compose(0.2, 0.25) - 0.4).abs() < 1e-16);
    }

    #[test]
    fn trajectory_starts_at_initial_concurrence_and_decays() {
        let x = ghz3();
        let times = [0.0, 0.1, 0.5, 1.0, 3.0];
        let c = concurrence_trajectory(&x, &[1.0, 1.0, 1.0], &times).unwrap();
        assert_eq!(c[0], 1.0);
        for w in c.windows(2) {
            assert!(w[1] <= w[0] + 1e-15);
        }
        assert!(c[4] < 0.05);
    }

    prop_compose! {
        fn arb_x(max_qubits: u32)
                (n in 1..=max_qubits)
                (n in Just(n),
                 raw in proptest::collection::vec((1e-6..1.0f64, 1e-6..1.0f64, 0.0..1.0f64, 0.0..std::f64::consts::TAU),
                                                  (1usize << (n - 1))..=(1usize << (n - 1))))
                -> XMatrix {
            let total: f64 = raw.iter().map(|(a, b, _, _)| a + b).sum();
            let pairs = raw.iter().map(|&(a, b, s, phi)| {
                let (a, b) = (a / total, b / total);
                PairEntry::new(a, b, C64::from_polar(s * (a * b).sqrt(), phi))
            }).collect();
            XMatrix::new(n, pairs).expect("sampled state is valid")
        }
    }

    proptest! {
        #[test]
        fn damping_preserves_x_form_validity(x in arb_x(5), p in 0.0..=1.0f64) {
            let y = damp(&x, &DampingSpec::uniform(x.n_qubits(), p).unwrap()).unwrap();
            prop_assert!(y.validate(1e-12).is_ok());
        }

        #[test]
        fn damping_forms_a_semigroup(x in arb_x(4), p1 in 0.0..=1.0f64, p2 in 0.0..=1.0f64) {
            let n = x.n_qubits();
            let two_step = damp(&damp(&x, &DampingSpec::uniform(n, p1).unwrap()).unwrap(),
                                &DampingSpec::uniform(n, p2).unwrap()).unwrap();
            let one_step = damp(&x, &DampingSpec::uniform(n, compose(p1, p2)).unwrap()).unwrap();
            for (u, v) in two_step.pairs().iter().zip(one_step.pairs()) {
                prop_assert!((u.a - v.a).abs() < 1e-12);
                prop_assert!((u.b - v.b).abs() < 1e-12);
                prop_assert!((u.z - v.z).norm() < 1e-12);
            }
        }

        #[test]
        fn qubit_order_does_not_matter(x in arb_x(4), probs in proptest::collection::vec(0.0..=1.0f64, 4)) {
            let n = x.n_qubits() as usize;
            let probs = &probs[..n];
            let joint = damp(&x, &DampingSpec::new(probs.to_vec()).unwrap()).unwrap();
            let mut folded = x.clone();
            for k in (0..n).rev() {
                folded = damp_single(&folded, k, probs[k]).unwrap();
            }
            for (u, v) in joint.pairs().iter().zip(folded.pairs()) {
                prop_assert!((u.a - v.a).abs() < 1e-12);
                prop_assert!((u.b - v.b).abs() < 1e-12);
                prop_assert!((u.z - v.z).norm() < 1e-12);
            }
        }

        #[test]
        fn coherences_scale_by_the_survival_factor(x in arb_x(4), probs in proptest::collection::vec(0.0..0.999f64, 4)) {
            let n = x.n_qubits() as usize;
            let probs = &probs[..n];
            let y = damp(&x, &DampingSpec::new(probs.to_vec()).unwrap()).unwrap();
            let factor: f64 = probs.iter().map(|&p| (1.0 - p).sqrt()).product();
            for (u, v) in x.pairs().iter().zip(y.pairs()) {
                prop_assert!((u.z * factor - v.z).norm() < 1e-14);
            }
        }

        #[test]
        fn damping_never_increases_concurrence(x in arb_x(4), p in 0.0..=1.0f64) {
            let y = damp(&x, &DampingSpec::uniform(x.n_qubits(), p).unwrap()).unwrap();
            prop_assert!(y.concurrence() <= x.concurrence() + 1e-9);
        }
    }
}
