//! Compressed N-qubit X-form density matrices and their genuinely
//! multipartite concurrence.
//!
//! In the computational basis, an X-form density matrix has nonzero entries
//! only on the main diagonal and the anti-diagonal. The anti-diagonal couples
//! basis index `p` to its bitwise complement `pbar = 2^N - 1 - p`, so the
//! matrix splits into `n = 2^(N-1)` independent 2x2 blocks
//!
//! ```text
//!         [ a_i   z_i  ]          p    = i - 1
//!         [ z_i*  b_i  ]          pbar = 2^N - 1 - p,      i = 1..n
//! ```
//!
//! with `a_i` the weight at index `p`, `b_i` the weight at `pbar`, and `z_i`
//! the coherence between them. [`XMatrix`] stores exactly these triples.
//!
//! The genuinely multipartite concurrence of such a state has a closed form:
//!
//! ```text
//!     C = 2 * max{ 0, max_i ( |z_i| - w_i ) },
//!     w_i = sum_{j != i} sqrt(a_j b_j)
//! ```
//!
//! [`XMatrix::gm_concurrence`] evaluates it in O(n) after one pass over the
//! pairs, and reports the maximizing pair as an entanglement witness. `C > 0`
//! proves the state is not biseparable under any bipartition; for `C = 0` the
//! oracle module can produce an explicit biseparable decomposition.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Default absolute tolerance for validation: normalization slack and the
/// allowed excess of |z|^2 over a*b.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default cap on explicit pair storage. 2^(N-1) triples at N = 20 is half a
/// million pairs; beyond that the analytic paths in [`crate::ghz`] are the
/// right tool.
pub const DEFAULT_MAX_QUBITS: u32 = 20;

/// One anti-diagonal pair: weights `a` (at basis index `p = i - 1`) and `b`
/// (at the complement index), plus the coherence `z` between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEntry {
    pub a: f64,
    pub b: f64,
    pub z: C64,
}

impl PairEntry {
    pub const ZERO: PairEntry = PairEntry {
        a: 0.0,
        b: 0.0,
        z: C64::new(0.0, 0.0),
    };

    pub fn new(a: f64, b: f64, z: C64) -> Self {
        PairEntry { a, b, z }
    }

    /// Pair with a real coherence.
    pub fn real(a: f64, b: f64, z: f64) -> Self {
        PairEntry {
            a,
            b,
            z: C64::new(z, 0.0),
        }
    }

    /// `sqrt(a * b)`, the ceiling a physical coherence can reach.
    pub fn root_product(&self) -> f64 {
        (self.a * self.b).sqrt()
    }

    /// Total diagonal weight of the block.
    pub fn trace(&self) -> f64 {
        self.a + self.b
    }

    /// Smaller eigenvalue of the 2x2 block; analytic, no solver needed.
    pub fn min_eigenvalue(&self) -> f64 {
        let mid = 0.5 * (self.a + self.b);
        let off = (0.25 * (self.a - self.b) * (self.a - self.b) + self.z.norm_sqr()).sqrt();
        mid - off
    }

    fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.z.re.is_finite() && self.z.im.is_finite()
    }

    pub(crate) fn scaled(&self, f: f64) -> PairEntry {
        PairEntry {
            a: self.a * f,
            b: self.b * f,
            z: self.z * f,
        }
    }
}

/// Wire form of a pair in the JSON interchange format.
#[derive(Serialize, Deserialize)]
pub(crate) struct PairWire {
    pub a: f64,
    pub b: f64,
    pub z_re: f64,
    pub z_im: f64,
}

impl From<PairEntry> for PairWire {
    fn from(e: PairEntry) -> Self {
        PairWire {
            a: e.a,
            b: e.b,
            z_re: e.z.re,
            z_im: e.z.im,
        }
    }
}

impl From<PairWire> for PairEntry {
    fn from(w: PairWire) -> Self {
        PairEntry {
            a: w.a,
            b: w.b,
            z: C64::new(w.z_re, w.z_im),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct XMatrixWire {
    n_qubits: u32,
    pairs: Vec<PairWire>,
}

/// Result of a concurrence evaluation.
///
/// `witness_pair` is the 1-based index of the first pair attaining the inner
/// maximum; when `value > 0` its coherence is the entanglement witness. `w`
/// holds the cross sums `w_i` for every pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrenceReport {
    pub value: f64,
    pub witness_pair: usize,
    pub w: Vec<f64>,
}

/// Compressed X-form density matrix on `n_qubits` qubits.
///
/// Invariants enforced at construction (within the chosen tolerance): all
/// weights nonnegative, `|z_i|^2 <= a_i * b_i`, zero coherence on pairs with a
/// vanishing weight, and unit trace. Qubit `k` (0-based) corresponds to bit
/// `N - 1 - k` of a basis index, i.e. qubit 0 is the leftmost label in a ket.
#[derive(Debug, Clone, PartialEq)]
pub struct XMatrix {
    n_qubits: u32,
    pairs: Vec<PairEntry>,
}

/// Basis-index pair represented by 1-based pair index `i` on `n_qubits`
/// qubits: `(i - 1, 2^N - i)`.
pub fn pair_basis(i: usize, n_qubits: u32) -> Result<(usize, usize)> {
    if n_qubits == 0 || n_qubits > 63 {
        return Err(Error::Domain(format!(
            "pair_basis needs 1..=63 qubits, got {n_qubits}"
        )));
    }
    let n_pairs = 1usize << (n_qubits - 1);
    if i < 1 || i > n_pairs {
        return Err(Error::IndexOutOfRange {
            index: i,
            max: n_pairs,
        });
    }
    let p = i - 1;
    Ok((p, (1usize << n_qubits) - 1 - p))
}

impl XMatrix {
    /// Validating constructor with default tolerance and storage limit.
    pub fn new(n_qubits: u32, pairs: Vec<PairEntry>) -> Result<Self> {
        Self::with_limits(n_qubits, pairs, DEFAULT_TOL, DEFAULT_MAX_QUBITS)
    }

    /// Validating constructor with a caller-chosen tolerance.
    pub fn with_tolerance(n_qubits: u32, pairs: Vec<PairEntry>, tol: f64) -> Result<Self> {
        Self::with_limits(n_qubits, pairs, tol, DEFAULT_MAX_QUBITS)
    }

    /// Fully parameterized constructor.
    pub fn with_limits(
        n_qubits: u32,
        pairs: Vec<PairEntry>,
        tol: f64,
        max_qubits: u32,
    ) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Domain("a state needs at least one qubit".into()));
        }
        if n_qubits > max_qubits {
            return Err(Error::StorageLimit {
                n_qubits,
                max: max_qubits,
            });
        }
        let x = XMatrix { n_qubits, pairs };
        x.validate(tol)?;
        Ok(x)
    }

    /// Construction for internal operations whose outputs are valid by
    /// derivation (convex mixing, damping, relabeling). Debug builds still
    /// check.
    pub(crate) fn from_parts_unchecked(n_qubits: u32, pairs: Vec<PairEntry>) -> Self {
        let x = XMatrix { n_qubits, pairs };
        debug_assert!(x.validate(1e-9).is_ok(), "internal op produced invalid X");
        x
    }

    /// Re-run all structural checks against an absolute tolerance.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let expected = 1usize << (self.n_qubits - 1);
        if self.pairs.len() != expected {
            return Err(Error::Shape {
                n_qubits: self.n_qubits,
                expected,
                got: self.pairs.len(),
            });
        }
        let mut total = 0.0;
        for (idx, e) in self.pairs.iter().enumerate() {
            let pair = idx + 1;
            if !e.is_finite() {
                return Err(Error::PositivityViolation {
                    pair,
                    detail: "non-finite entry".into(),
                });
            }
            if e.a < 0.0 || e.b < 0.0 {
                return Err(Error::PositivityViolation {
                    pair,
                    detail: format!("negative weight a = {:e}, b = {:e}", e.a, e.b),
                });
            }
            let zz = e.z.norm_sqr();
            if zz > e.a * e.b + tol {
                return Err(Error::PositivityViolation {
                    pair,
                    detail: format!("|z|^2 = {:e} exceeds a*b = {:e}", zz, e.a * e.b),
                });
            }
            // A pair with no weight on one side cannot hold a coherence; the
            // |z|^2 bound alone would let sqrt(tol)-sized dust through.
            if (e.a == 0.0 || e.b == 0.0) && e.z.norm() > tol {
                return Err(Error::PositivityViolation {
                    pair,
                    detail: format!("coherence |z| = {:e} on a zero-weight pair", e.z.norm()),
                });
            }
            total += e.a + e.b;
        }
        if (total - 1.0).abs() > tol {
            return Err(Error::Normalization { total });
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    /// Number of anti-diagonal pairs, `2^(N-1)`.
    pub fn n_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Full matrix dimension `2^N`.
    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn pairs(&self) -> &[PairEntry] {
        &self.pairs
    }

    /// Pair by 1-based index.
    pub fn pair(&self, i: usize) -> Result<PairEntry> {
        if i < 1 || i > self.pairs.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.pairs.len(),
            });
        }
        Ok(self.pairs[i - 1])
    }

    /// Genuinely multipartite concurrence `2 max{0, max_i (|z_i| - w_i)}`.
    ///
    /// The square roots are summed in ascending order, which makes the value
    /// exactly invariant under pair relabelings (the sorted sequence, and so
    /// every rounding step, is identical).
    pub fn gm_concurrence(&self) -> ConcurrenceReport {
        let roots: Vec<f64> = self.pairs.iter().map(PairEntry::root_product).collect();
        let s = sorted_sum(&roots);
        let mut w = Vec::with_capacity(roots.len());
        let mut best = f64::NEG_INFINITY;
        let mut witness = 1;
        for (idx, e) in self.pairs.iter().enumerate() {
            let wi = s - roots[idx];
            let excess = e.z.norm() - wi;
            if excess > best {
                best = excess;
                witness = idx + 1;
            }
            w.push(wi);
        }
        ConcurrenceReport {
            value: (2.0 * best).max(0.0),
            witness_pair: witness,
            w,
        }
    }

    /// Concurrence value alone.
    pub fn concurrence(&self) -> f64 {
        self.gm_concurrence().value
    }

    /// Convex mixture `lambda * x1 + (1 - lambda) * x2`.
    pub fn mix(lambda: f64, x1: &XMatrix, x2: &XMatrix) -> Result<XMatrix> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Range {
                name: "lambda",
                value: lambda,
                lo: 0.0,
                hi: 1.0,
            });
        }
        if x1.n_qubits != x2.n_qubits {
            return Err(Error::DimensionMismatch {
                left: x1.n_qubits,
                right: x2.n_qubits,
            });
        }
        let mu = 1.0 - lambda;
        let pairs = x1
            .pairs
            .iter()
            .zip(&x2.pairs)
            .map(|(p, q)| PairEntry {
                a: lambda * p.a + mu * q.a,
                b: lambda * p.b + mu * q.b,
                z: p.z * lambda + q.z * mu,
            })
            .collect();
        Ok(XMatrix::from_parts_unchecked(x1.n_qubits, pairs))
    }

    /// Relabel qubits: qubit `k` moves to position `sigma[k]`.
    ///
    /// On basis indices this permutes bit positions, so a pair `(p, pbar)`
    /// maps to `(q, qbar)`; when `q` lands in the upper half the stored entry
    /// swaps `a` with `b` and conjugates `z`.
    pub fn permute_qubits(&self, sigma: &[usize]) -> Result<XMatrix> {
        let n = self.n_qubits as usize;
        let mut seen = vec![false; n];
        if sigma.len() != n {
            return Err(Error::InvalidPermutation { n: self.n_qubits });
        }
        for &s in sigma {
            if s >= n || seen[s] {
                return Err(Error::InvalidPermutation { n: self.n_qubits });
            }
            seen[s] = true;
        }
        let dim = 1usize << n;
        let half = dim >> 1;
        let mut out = vec![PairEntry::ZERO; half];
        for (idx, e) in self.pairs.iter().enumerate() {
            let p = idx;
            let mut q = 0usize;
            for (k, &sk) in sigma.iter().enumerate() {
                let bit = (p >> (n - 1 - k)) & 1;
                q |= bit << (n - 1 - sk);
            }
            if q < half {
                out[q] = *e;
            } else {
                out[dim - 1 - q] = PairEntry {
                    a: e.b,
                    b: e.a,
                    z: e.z.conj(),
                };
            }
        }
        Ok(XMatrix::from_parts_unchecked(self.n_qubits, out))
    }

    /// Serialize to the JSON interchange format. serde_json emits floats in
    /// shortest round-trip form, so a write-read cycle is bit exact.
    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        let wire = XMatrixWire {
            n_qubits: self.n_qubits,
            pairs: self.pairs.iter().map(|&e| e.into()).collect(),
        };
        let text = serde_json::to_string_pretty(&wire)
            .map_err(|e| Error::Domain(format!("serialization failed: {e}")))?;
        writer
            .write_all(text.as_bytes())
            .and_then(|_| writer.write_all(b"\n"))
            .map_err(|e| Error::Domain(format!("write failed: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    /// Parse and validate the JSON interchange format.
    pub fn read_json<R: Read>(mut reader: R, tol: f64) -> Result<XMatrix> {
        let mut text = String::new();
        reader
            .read_to_string(&mut text)
            .map_err(|e| Error::Domain(format!("read failed: {e}")))?;
        Self::from_json_str(&text, tol)
    }

    pub fn from_json_str(text: &str, tol: f64) -> Result<XMatrix> {
        let wire: XMatrixWire = serde_json::from_str(text)
            .map_err(|e| Error::Json(format!("malformed X-matrix JSON: {e}")))?;
        XMatrix::with_tolerance(
            wire.n_qubits,
            wire.pairs.into_iter().map(PairEntry::from).collect(),
            tol,
        )
    }

}

/// Sum in ascending order; deterministic under any input permutation.
pub(crate) fn sorted_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().sum()
}
